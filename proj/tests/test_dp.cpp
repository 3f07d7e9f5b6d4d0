#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "golden.hpp"
#include "sharpmult/constants.hpp"
#include "sharpmult/errors.hpp"
#include "sharpmult/martingale.hpp"

using namespace sharpmult;
using namespace sharpmult::martingale;

namespace {

DpOptions fast() {
  DpOptions o;
  o.check_resolution = false;
  return o;
}

}  // namespace

TEST_CASE("dp matches the brute-force splicing oracle at depth <= 3") {
  const auto rows = golden::rows("dp_bruteforce.csv");
  REQUIRE(rows.size() == 18);
  for (const auto& r : rows) {
    const double p = std::stod(r[0]), b = std::stod(r[1]), B = std::stod(r[2]);
    const int N = std::stoi(r[3]);
    const double expected = std::stod(r[4]);
    const auto got = dp_optimal_ratio(p, b, B, N, 4096, fast());
    CAPTURE(p);
    CAPTURE(b);
    CAPTURE(N);
    CHECK(std::abs(got.ratio - expected) <= 1e-6);
  }
}

TEST_CASE("dp at p = 2 is the largest multiplier") {
  // The p = 2 value function is flat along whole arcs; angular interpolation
  // leaves a bias below 1e-6 at these depths.
  for (int N = 1; N <= 4; ++N) {
    CHECK(std::abs(dp_optimal_ratio(2.0, -1.0, 1.0, N, 4096, fast()).ratio - 1.0) <= 1e-6);
    CHECK(std::abs(dp_optimal_ratio(2.0, -2.0, 1.0, N, 4096, fast()).ratio - 2.0) <= 1e-6);
  }
}

TEST_CASE("dp is nondecreasing in depth and bounded by the sharp constant") {
  double prev = 0.0;
  for (int N = 1; N <= 5; ++N) {
    const double r = dp_optimal_ratio(4.0, -1.0, 1.0, N, 4096, fast()).ratio;
    CHECK(r >= prev - 1e-9);
    CHECK(r <= 3.0);
    prev = r;
  }
  CHECK(prev > 1.7);
}

TEST_CASE("dp is monotone in the multiplier range") {
  const double base = dp_optimal_ratio(4.0, -1.0, 1.0, 3, 4096, fast()).ratio;
  CHECK(dp_optimal_ratio(4.0, -1.0, 1.5, 3, 4096, fast()).ratio >= base - 1e-9);
  CHECK(dp_optimal_ratio(4.0, -2.0, 1.0, 3, 4096, fast()).ratio >= base - 1e-9);
  CHECK(dp_optimal_ratio(4.0, -0.5, 1.0, 3, 4096, fast()).ratio <= base + 1e-9);
}

TEST_CASE("origin value changes sign at the optimal ratio") {
  const double r = dp_optimal_ratio(4.0, -1.0, 1.0, 3, 4096, fast()).ratio;
  CHECK(dp_origin_value(4.0, -1.0, 1.0, 3, r * 1.01, 4096, fast()) <= 0.0);
  CHECK(dp_origin_value(4.0, -1.0, 1.0, 3, r * 0.99, 4096, fast()) > 0.0);
}

TEST_CASE("dp reports the maximizing sequence and the resolution check") {
  const auto res = dp_optimal_ratio(4.0, -1.0, 1.0, 3, 1024);
  REQUIRE(res.best_alpha.size() == 3);
  for (double a : res.best_alpha) CHECK((a == -1.0 || a == 1.0));
  REQUIRE(res.refined_ratio.has_value());
  CHECK(std::abs(*res.refined_ratio - res.ratio) <= 1e-3);
  CHECK_FALSE(res.resolution_too_coarse);
}

TEST_CASE("dp validates its inputs") {
  CHECK_THROWS_AS(dp_optimal_ratio(4.0, -1.0, 1.0, 13), ValidationError);
  CHECK_THROWS_AS(dp_optimal_ratio(4.0, -1.0, 1.0, 0), ValidationError);
  CHECK_THROWS_AS(dp_optimal_ratio(4.0, 1.0, 1.0, 2), ValidationError);
  CHECK_THROWS_AS(dp_optimal_ratio(1.0, -1.0, 1.0, 2), ValidationError);
}

TEST_CASE("search at p = 2 finds the largest multiplier") {
  for (auto [b, B] : {std::pair{-1.0, 1.0}, {0.0, 1.0}, {-2.0, 1.0}}) {
    const auto res = search_extremal(2.0, b, B, 4, 5, 0);
    CHECK(res.ratio == doctest::Approx(std::max(std::abs(b), std::abs(B))).epsilon(1e-12));
  }
}

TEST_CASE("search agrees with the dp") {
  const double dp = dp_optimal_ratio(4.0, -1.0, 1.0, 4, 4096, fast()).ratio;
  const auto res = search_extremal(4.0, -1.0, 1.0, 4, 20, 0);
  CHECK(res.ratio <= dp * (1.0 + 1e-6));
  CHECK(res.ratio >= dp * 0.99);

  const auto pos = search_extremal(4.0, 0.0, 1.0, 6, 10, 0);
  CHECK(pos.ratio >= 1.0);
  CHECK(pos.ratio <= constants::choi_bounds(4.0).hi);
}

TEST_CASE("search output is consistent and reproducible") {
  const auto a = search_extremal(3.0, -1.0, 2.0, 4, 6, 17);
  const auto b = search_extremal(3.0, -1.0, 2.0, 4, 6, 17);
  CHECK(a.ratio == b.ratio);
  CHECK(a.f.levels() == b.f.levels());
  CHECK(a.v.alpha() == b.v.alpha());
  CHECK(a.seed == 17);
  CHECK(ratio(a.f, a.v, 3.0) == doctest::Approx(a.ratio).epsilon(1e-12));
  for (double x : a.v.alpha()) CHECK((x == -1.0 || x == 2.0));
  for (int n = 1; n <= a.f.depth(); ++n)
    for (double d : a.f.level(n)) CHECK(std::abs(d) <= 10.0);
  REQUIRE_FALSE(a.trace.empty());

  // Restarts draw from independent streams, so a larger budget never does worse.
  double prev = 0.0;
  for (int budget : {1, 3, 9}) {
    const double r = search_extremal(3.0, -1.0, 2.0, 4, budget, 17).ratio;
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("search warm start embeds a shallower pair") {
  const auto shallow = search_extremal(4.0, -1.0, 1.0, 3, 5, 0);
  SearchOptions o;
  o.warm_start = std::pair{shallow.f, shallow.v};
  const auto deep = search_extremal(4.0, -1.0, 1.0, 5, 1, 0, o);
  CHECK(deep.ratio >= shallow.ratio - 1e-12);
}
