#include <algorithm>
#include <cmath>
#include <random>

#include "sharpmult/constants.hpp"
#include "sharpmult/errors.hpp"
#include "sharpmult/martingale.hpp"

namespace sharpmult::martingale {

namespace {

/// Ascent state: terminal values of f and g on every path plus the running
/// sums of |f|^p and |g|^p.
class AscentState {
 public:
  AscentState(double p, PaleyWalshMartingale f, std::vector<double> alpha)
      : p_(p), f_(std::move(f)), alpha_(std::move(alpha)) {
    rebuild();
  }

  [[nodiscard]] double ratio() const {
    return sum_f_ > 0.0 ? std::pow(sum_g_ / sum_f_, 1.0 / p_) : 0.0;
  }
  [[nodiscard]] const PaleyWalshMartingale& f() const { return f_; }
  [[nodiscard]] const std::vector<double>& alpha() const { return alpha_; }

  /// Optimizes d_n[h] over [-bound, bound]; returns true when the ratio rose.
  bool optimize_coefficient(int n, std::size_t h, double bound, int scan, double tol) {
    const int N = f_.depth();
    const std::size_t block = std::size_t{1} << (N - n + 1);
    const std::size_t start = h * block;
    const std::size_t half = block / 2;
    const double current = f_.level(n)[h];
    const double v = alpha_[n - 1];

    // Paths outside the block, summed directly: subtracting the block from
    // the totals cancels catastrophically when the block carries most of the mass.
    double base_f = 0.0;
    double base_g = 0.0;
    for (std::size_t i = 0; i < f_end_.size(); ++i) {
      if (i >= start && i < start + block) continue;
      base_f += pw(f_end_[i]);
      base_g += pw(g_end_[i]);
    }
    // Objective as a function of the new coefficient value c.
    auto objective = [&](double c) {
      const double delta = c - current;
      double sf = base_f;
      double sg = base_g;
      for (std::size_t i = 0; i < block; ++i) {
        const double eps = i < half ? 1.0 : -1.0;
        sf += pw(f_end_[start + i] + eps * delta);
        sg += pw(g_end_[start + i] + eps * v * delta);
      }
      return sf > 0.0 ? sg / sf : 0.0;
    };

    const double before = objective(current);
    double best_c = current;
    double best = before;
    const double step = 2.0 * bound / (scan - 1);
    for (int j = 0; j < scan; ++j) {
      const double c = -bound + j * step;
      const double val = objective(c);
      if (val > best) {
        best = val;
        best_c = c;
      }
    }
    double lo = std::max(-bound, best_c - step);
    double hi = std::min(bound, best_c + step);
    constexpr double inv_phi = 0.6180339887498949;
    double a = hi - inv_phi * (hi - lo);
    double c = lo + inv_phi * (hi - lo);
    double fa = objective(a);
    double fc = objective(c);
    for (int it = 0; it < 40; ++it) {
      if (fa < fc) {
        lo = a;
        a = c;
        fa = fc;
        c = lo + inv_phi * (hi - lo);
        fc = objective(c);
      } else {
        hi = c;
        c = a;
        fc = fa;
        a = hi - inv_phi * (hi - lo);
        fa = objective(a);
      }
    }
    if (fa > best) {
      best = fa;
      best_c = a;
    }
    if (fc > best) {
      best = fc;
      best_c = c;
    }
    if (!(best > before * (1.0 + tol))) return false;

    f_.level(n)[h] = best_c;
    rebuild();
    return true;
  }

  void force_switch(int n, double other) {
    alpha_[n - 1] = other;
    rebuild();
  }

  /// Switches alpha_n to `other` when that raises the ratio.
  bool try_switch(int n, double other, double tol) {
    const double old = alpha_[n - 1];
    if (other == old) return false;
    const double before = ratio();
    alpha_[n - 1] = other;
    rebuild();
    if (ratio() > before * (1.0 + tol)) return true;
    alpha_[n - 1] = old;
    rebuild();
    return false;
  }

 private:
  [[nodiscard]] double pw(double x) const { return std::pow(std::abs(x), p_); }

  void rebuild() {
    const auto g = transform(f_, TransformSequence::deterministic(alpha_));
    f_end_ = f_.values(f_.depth());
    g_end_ = g.values(g.depth());
    resum();
  }

  void resum() {
    sum_f_ = 0.0;
    sum_g_ = 0.0;
    for (std::size_t i = 0; i < f_end_.size(); ++i) {
      sum_f_ += pw(f_end_[i]);
      sum_g_ += pw(g_end_[i]);
    }
  }

  double p_;
  PaleyWalshMartingale f_;
  std::vector<double> alpha_;
  std::vector<double> f_end_;
  std::vector<double> g_end_;
  double sum_f_ = 0.0;
  double sum_g_ = 0.0;
};

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x5eedu};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

std::pair<PaleyWalshMartingale, std::vector<double>> embed(
    const std::pair<PaleyWalshMartingale, TransformSequence>& warm, int depth, double b,
    double B) {
  const auto& [f, v] = warm;
  require(f.depth() <= depth, "warm start is deeper than the search depth");
  require(v.is_deterministic(), "warm start transform must be deterministic");
  auto levels = f.levels();
  auto alpha = v.alpha();
  for (double a : alpha) require(a == b || a == B, "warm start transform must take values in {b, B}");
  for (int n = f.depth(); n < depth; ++n) {
    levels.emplace_back(std::size_t{1} << n, 0.0);
    alpha.push_back(B);
  }
  return {PaleyWalshMartingale(std::move(levels)), std::move(alpha)};
}

}  // namespace

SearchResult search_extremal(double p, double b, double B, int depth, int budget,
                             std::uint64_t seed, const SearchOptions& options) {
  constants::ConstantQuery{p, b, B}.validate();
  require(depth >= 1 && depth <= 20, "search depth must lie in [1, 20]");
  require(budget >= 1, "search budget must be >= 1");
  require(options.coefficient_bound > 0.0, "coefficient bound must be positive");
  require(options.scan_points >= 3, "search scan needs at least 3 points");

  SearchResult result;
  result.seed = seed;
  result.ratio = -1.0;

  auto coefficient_sweep = [&](AscentState& state) {
    bool improved = false;
    for (int n = 1; n <= depth; ++n)
      for (std::size_t h = 0; h < (std::size_t{1} << (n - 1)); ++h)
        improved |= state.optimize_coefficient(n, h, options.coefficient_bound, options.scan_points,
                                               options.improvement_tolerance);
    return improved;
  };

  // At a local optimum the coefficients are tuned to the current alpha, so a
  // bare switch rarely pays off; re-optimize them before judging the switch.
  auto switch_and_refit = [&](AscentState& state) {
    for (int n = 1; n <= depth; ++n) {
      AscentState trial = state;
      const double other = trial.alpha()[n - 1] == b ? B : b;
      trial.force_switch(n, other);
      for (int sweep = 0; sweep < options.max_sweeps && coefficient_sweep(trial); ++sweep) {
      }
      if (trial.ratio() > state.ratio() * (1.0 + options.improvement_tolerance)) {
        state = std::move(trial);
        return true;
      }
    }
    return false;
  };

  auto ascend = [&](int restart, PaleyWalshMartingale f, std::vector<double> alpha) {
    AscentState state(p, std::move(f), std::move(alpha));
    result.trace.push_back({restart, 0, state.ratio()});
    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
      bool improved = coefficient_sweep(state);
      for (int n = 1; n <= depth; ++n) {
        const double other = state.alpha()[n - 1] == b ? B : b;
        improved |= state.try_switch(n, other, options.improvement_tolerance);
      }
      if (!improved) improved = switch_and_refit(state);
      result.trace.push_back({restart, sweep, state.ratio()});
      if (!improved) break;
    }
    if (state.ratio() > result.ratio) {
      result.ratio = state.ratio();
      result.f = state.f();
      result.v = TransformSequence::deterministic(state.alpha());
    }
  };

  if (options.warm_start) {
    auto [f, alpha] = embed(*options.warm_start, depth, b, B);
    ascend(0, std::move(f), std::move(alpha));
  }
  for (int r = 0; r < budget; ++r) {
    std::mt19937_64 rng(restart_seed(seed, r));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    auto f = PaleyWalshMartingale::zeros(depth);
    std::vector<double> alpha(depth);
    for (int n = 1; n <= depth; ++n) {
      alpha[n - 1] = coin(rng) ? B : b;
      for (auto& x : f.level(n)) x = uni(rng);
    }
    ascend(r + (options.warm_start ? 1 : 0), std::move(f), std::move(alpha));
  }
  return result;
}

}  // namespace sharpmult::martingale
