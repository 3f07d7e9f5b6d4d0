// Backward induction for the depth-N martingale transform problem.
//
// For fixed C the payoff V(x, y) = |y|^p - C^p |x|^p and every value function
// below it are p-homogeneous and even, so each layer is stored as its
// restriction to the half circle [0, pi). One step with multiplier s replaces
// W by  (x, y) -> sup_{t >= 0} [W(x + t, y + s t) + W(x - t, y - s t)] / 2,
// the symmetric two-point split of a Paley-Walsh step. Deterministic
// sequences make each layer depend on the whole suffix (v_{k+1}, ..., v_N),
// so the suffixes are walked depth-first.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sharpmult/constants.hpp"
#include "sharpmult/errors.hpp"
#include "sharpmult/martingale.hpp"
#include "sharpmult/parallel.hpp"

namespace sharpmult::martingale {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGoldenIterations = 48;

struct Problem {
  double p;
  double Cp;  // C^p
  int nodes;  // grid points on [0, pi)
  int scan;
};

/// Payoff or an interpolated layer, evaluated anywhere in the plane.
class Layer {
 public:
  /// The exact payoff V.
  explicit Layer(const Problem& problem) : problem_(&problem) {}
  Layer(const Problem& problem, std::vector<double> values)
      : problem_(&problem), values_(std::move(values)) {
    infinite_ = std::any_of(values_.begin(), values_.end(),
                            [](double v) { return !std::isfinite(v); });
  }

  [[nodiscard]] bool infinite() const { return infinite_; }

  /// Value on the unit circle at angle a.
  [[nodiscard]] double angular(double a) const {
    if (values_.empty()) {
      return std::pow(std::abs(std::sin(a)), problem_->p) -
             problem_->Cp * std::pow(std::abs(std::cos(a)), problem_->p);
    }
    if (infinite_) return kInf;
    a = std::fmod(a, kPi);
    if (a < 0) a += kPi;
    const double pos = a * problem_->nodes / kPi;
    int i = static_cast<int>(pos);
    double frac = pos - i;
    if (i >= problem_->nodes) {
      i = 0;
      frac = 0.0;
    }
    const int j = i + 1 == problem_->nodes ? 0 : i + 1;
    return values_[i] + frac * (values_[j] - values_[i]);
  }

  [[nodiscard]] double operator()(double x, double y) const {
    const double r2 = x * x + y * y;
    if (r2 == 0.0) return 0.0;
    if (values_.empty()) {
      return std::pow(std::abs(y), problem_->p) - problem_->Cp * std::pow(std::abs(x), problem_->p);
    }
    return std::exp(0.5 * problem_->p * std::log(r2)) * angular(std::atan2(y, x));
  }

 private:
  const Problem* problem_;
  std::vector<double> values_;  // empty: exact payoff
  bool infinite_ = false;
};

/// sup_t [F(P + tD) + F(P - tD)] / 2 with D = (1, s).
double split_value(const Layer& layer, const Problem& problem, double x, double y, double s) {
  if (layer.infinite()) return kInf;
  // Far along the line the average behaves like t^p F(D).
  if (layer.angular(std::atan2(s, 1.0)) > 0.0) return kInf;
  auto value = [&](double psi) {
    const double t = std::tan(psi);
    return 0.5 * (layer(x + t, y + s * t) + layer(x - t, y - s * t));
  };
  const double step = 0.5 * kPi / problem.scan;
  int best_j = 0;
  double best = value(0.0);
  for (int j = 1; j < problem.scan; ++j) {
    const double v = value(j * step);
    if (v > best) {
      best = v;
      best_j = j;
    }
  }
  // Golden-section refinement around the best scan node.
  double lo = std::max(0.0, (best_j - 1) * step);
  double hi = std::min(0.5 * kPi * (1.0 - 1e-12), (best_j + 1) * step);
  constexpr double inv_phi = 0.6180339887498949;
  double a = hi - inv_phi * (hi - lo);
  double c = lo + inv_phi * (hi - lo);
  double fa = value(a);
  double fc = value(c);
  for (int it = 0; it < kGoldenIterations; ++it) {
    if (fa < fc) {
      lo = a;
      a = c;
      fa = fc;
      c = lo + inv_phi * (hi - lo);
      fc = value(c);
    } else {
      hi = c;
      c = a;
      fc = fa;
      a = hi - inv_phi * (hi - lo);
      fa = value(a);
    }
  }
  return std::max({best, fa, fc});
}

Layer grid_step(const Layer& layer, const Problem& problem, double s) {
  if (layer.infinite() || layer.angular(std::atan2(s, 1.0)) > 0.0)
    return Layer(problem, std::vector<double>(problem.nodes, kInf));
  std::vector<double> values(problem.nodes);
  parallel_for(values.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double a = kPi * static_cast<double>(i) / problem.nodes;
      values[i] = split_value(layer, problem, std::cos(a), std::sin(a), s);
    }
  });
  return Layer(problem, std::move(values));
}

struct OriginSearch {
  const Problem& problem;
  double b;
  double B;
  const std::vector<double>* fixed = nullptr;  // restricts v_n to fixed[n - 1]
  double best = -kInf;
  std::vector<double> best_alpha;
  std::vector<double> suffix;  // v_N, v_{N-1}, ... as built

  void record(double value, double s1, double s2, bool with_s2) {
    if (value > best) {
      best = value;
      best_alpha.clear();
      best_alpha.push_back(s1);
      if (with_s2) best_alpha.push_back(s2);
      for (auto it = suffix.rbegin(); it != suffix.rend(); ++it) best_alpha.push_back(*it);
    }
  }

  [[nodiscard]] std::vector<double> slopes(int n) const {
    if (fixed != nullptr) return {(*fixed)[n - 1]};
    return {b, B};
  }

  // `remaining` steps still to be placed above `layer`; the next one is v_remaining.
  void run(const Layer& layer, int remaining) {
    if (remaining == 1) {
      for (double s1 : slopes(1)) record(layer.angular(std::atan2(s1, 1.0)), s1, 0.0, false);
      return;
    }
    if (remaining == 2) {
      for (double s2 : slopes(2)) {
        for (double s1 : slopes(1)) {
          const double a = std::atan2(s1, 1.0);
          record(split_value(layer, problem, std::cos(a), std::sin(a), s2), s1, s2, true);
        }
      }
      return;
    }
    for (double s : slopes(remaining)) {
      const Layer next = grid_step(layer, problem, s);
      suffix.push_back(s);
      run(next, remaining - 1);
      suffix.pop_back();
    }
  }
};

struct OriginValue {
  double value;
  std::vector<double> alpha;
};

/// max over sequences of E V(f_N, g_N) from the origin; with `fixed`, only that sequence.
OriginValue origin_value(double p, double b, double B, int depth, double C, int resolution,
                         const DpOptions& options, const std::vector<double>* fixed = nullptr) {
  const Problem problem{p, std::pow(C, p), resolution / 2, options.scan_points};
  OriginSearch search{problem, b, B, fixed, -kInf, {}, {}};
  search.run(Layer(problem), depth);
  return {search.best, search.best_alpha};
}

void validate(double p, double b, double B, int depth, int resolution, const DpOptions& options) {
  constants::ConstantQuery{p, b, B}.validate();
  require(depth >= 1 && depth <= 12, "DP depth must lie in [1, 12]");
  require(resolution >= 16 && resolution % 2 == 0, "DP angular resolution must be even and >= 16");
  require(options.scan_points >= 8, "DP scan needs at least 8 points");
}

/// Least C in [lo, ...) with G(C) <= 0 for a decreasing G, by the Illinois
/// variant of regula falsi; bisection while an end value is infinite.
template <class G>
double decreasing_root(G&& g, double lo, double hi, double tolerance) {
  double g_lo = g(lo);
  if (g_lo <= 0.0) return lo;
  double g_hi = g(hi);
  for (int grow = 0; g_hi > 0.0 && grow < 8; ++grow) {
    lo = hi;
    g_lo = g_hi;
    hi *= 1.25;
    g_hi = g(hi);
  }
  if (g_hi > 0.0) throw SolverError("DP root search could not bracket the ratio");
  int side = 0;
  for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
    double mid;
    if (std::isfinite(g_lo) && g_lo != g_hi) {
      mid = hi - g_hi * (hi - lo) / (g_hi - g_lo);
      if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    } else {
      mid = 0.5 * (lo + hi);
    }
    const double g_mid = g(mid);
    if (g_mid > 0.0) {
      lo = mid;
      g_lo = g_mid;
      if (side == -1 && std::isfinite(g_hi)) g_hi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      g_hi = g_mid;
      if (side == 1 && std::isfinite(g_lo)) g_lo *= 0.5;
      side = 1;
      if (g_mid == 0.0) break;
    }
  }
  return hi;
}

// The optimum is max over sequences alpha of the root C_alpha of the
// single-sequence value. Roots are found on one chain at a time; the full
// tree only checks whether another sequence is still positive there.
double solve_ratio(double p, double b, double B, int depth, int resolution,
                   const DpOptions& options, std::vector<double>& alpha) {
  const double lo = std::max(std::abs(b), std::abs(B));
  const double hi = std::max(constants::cpbB_bounds(p, b, B).hi, lo * (1.0 + 1e-9));
  auto full = [&](double C) { return origin_value(p, b, B, depth, C, resolution, options); };

  auto at = full(lo);
  alpha = at.alpha;
  if (at.value <= 0.0) return lo;
  double C = lo;
  for (int round = 0; round < 64; ++round) {
    const auto candidate = at.alpha;
    const double root = decreasing_root(
        [&](double c) {
          return origin_value(p, b, B, depth, c, resolution, options, &candidate).value;
        },
        C, std::max(hi, C * (1.0 + 1e-9)), options.root_tolerance);
    if (round > 0 && root <= C + options.root_tolerance) break;
    C = root;
    alpha = candidate;
    at = full(C);
    if (at.value <= 0.0 || at.alpha == alpha) break;
  }
  return C;
}

}  // namespace

double dp_origin_value(double p, double b, double B, int depth, double C,
                       int angular_resolution, const DpOptions& options) {
  validate(p, b, B, depth, angular_resolution, options);
  require(C >= 0.0 && std::isfinite(C), "C must be finite and >= 0");
  return origin_value(p, b, B, depth, C, angular_resolution, options).value;
}

DpResult dp_optimal_ratio(double p, double b, double B, int depth, int angular_resolution,
                          const DpOptions& options) {
  validate(p, b, B, depth, angular_resolution, options);
  DpResult result;
  result.ratio = solve_ratio(p, b, B, depth, angular_resolution, options, result.best_alpha);
  if (options.check_resolution) {
    std::vector<double> unused;
    result.refined_ratio =
        solve_ratio(p, b, B, depth, 2 * angular_resolution, options, unused);
    result.resolution_too_coarse =
        std::abs(*result.refined_ratio - result.ratio) > options.resolution_tolerance;
  }
  return result;
}

}  // namespace sharpmult::martingale
