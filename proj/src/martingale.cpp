#include "sharpmult/martingale.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "sharpmult/errors.hpp"

namespace sharpmult::martingale {

namespace {

void check_depth(int depth) {
  require(depth >= 0 && depth <= kMaxDepth, "martingale depth must lie in [0, 24]");
}

void check_exponent(double p) {
  require(std::isfinite(p) && p >= 1.0, "L^p norm requires finite p >= 1");
}

}  // namespace

PaleyWalshMartingale::PaleyWalshMartingale(std::vector<std::vector<double>> levels,
                                           double initial)
    : levels_(std::move(levels)), initial_(initial) {
  check_depth(depth());
  for (std::size_t n = 0; n < levels_.size(); ++n)
    require(levels_[n].size() == (std::size_t{1} << n),
            "level " + std::to_string(n + 1) + " must hold 2^(n-1) coefficients");
}

PaleyWalshMartingale PaleyWalshMartingale::zeros(int depth) {
  check_depth(depth);
  std::vector<std::vector<double>> levels(depth);
  for (int n = 0; n < depth; ++n) levels[n].assign(std::size_t{1} << n, 0.0);
  return PaleyWalshMartingale(std::move(levels));
}

std::vector<double> PaleyWalshMartingale::values(int n) const {
  require(n >= 0 && n <= depth(), "level out of range");
  std::vector<double> current{initial_};
  for (int k = 1; k <= n; ++k) {
    const auto d = level(k);
    std::vector<double> next(current.size() * 2);
    for (std::size_t h = 0; h < current.size(); ++h) {
      next[2 * h] = current[h] + d[h];
      next[2 * h + 1] = current[h] - d[h];
    }
    current = std::move(next);
  }
  return current;
}

// ---------------------------------------------------------------------------

TransformSequence TransformSequence::deterministic(std::vector<double> alpha,
                                                   std::optional<double> initial) {
  check_depth(static_cast<int>(alpha.size()));
  TransformSequence v;
  v.deterministic_ = true;
  for (double a : alpha) v.levels_.push_back({a});
  v.initial_ = initial ? initial : (alpha.empty() ? std::nullopt : std::optional(alpha[0]));
  return v;
}

TransformSequence TransformSequence::predictable(std::vector<std::vector<double>> levels,
                                                 std::optional<double> initial) {
  check_depth(static_cast<int>(levels.size()));
  for (std::size_t n = 0; n < levels.size(); ++n)
    require(levels[n].size() == (std::size_t{1} << n),
            "predictable level " + std::to_string(n + 1) + " must hold 2^(n-1) values");
  TransformSequence v;
  v.deterministic_ = false;
  v.levels_ = std::move(levels);
  v.initial_ = initial;
  return v;
}

std::vector<double> TransformSequence::alpha() const {
  require(deterministic_, "transform sequence is not deterministic");
  std::vector<double> out;
  for (const auto& level : levels_) out.push_back(level[0]);
  return out;
}

void TransformSequence::validate_range(double b, double B) const {
  auto inside = [&](double x) { return std::isfinite(x) && x >= b && x <= B; };
  if (initial_) require(inside(*initial_), "initial multiplier outside [b, B]");
  for (const auto& level : levels_)
    for (double x : level) require(inside(x), "transform value outside [b, B]");
}

PaleyWalshMartingale transform(const PaleyWalshMartingale& f, const TransformSequence& v) {
  require(f.depth() == v.depth(), "martingale and transform depths differ");
  double initial = 0.0;
  if (f.initial() != 0.0) {
    require(v.initial().has_value(), "transform lacks a multiplier for the initial value");
    initial = *v.initial() * f.initial();
  }
  auto levels = f.levels();
  for (int n = 1; n <= f.depth(); ++n)
    for (std::size_t h = 0; h < levels[n - 1].size(); ++h) levels[n - 1][h] *= v.at(n, h);
  return PaleyWalshMartingale(std::move(levels), initial);
}

TransformSequence compose(const TransformSequence& v, const TransformSequence& w) {
  require(v.depth() == w.depth(), "transform depths differ");
  std::optional<double> initial;
  if (v.initial() && w.initial()) initial = *v.initial() * *w.initial();
  if (v.is_deterministic() && w.is_deterministic()) {
    auto a = v.alpha();
    const auto c = w.alpha();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= c[i];
    return TransformSequence::deterministic(std::move(a), initial);
  }
  std::vector<std::vector<double>> levels(v.depth());
  for (int n = 1; n <= v.depth(); ++n) {
    levels[n - 1].resize(std::size_t{1} << (n - 1));
    for (std::size_t h = 0; h < levels[n - 1].size(); ++h)
      levels[n - 1][h] = v.at(n, h) * w.at(n, h);
  }
  return TransformSequence::predictable(std::move(levels), initial);
}

// ---------------------------------------------------------------------------

std::vector<double> lp_norm_profile(const PaleyWalshMartingale& f, double p) {
  check_exponent(p);
  std::vector<double> profile;
  profile.reserve(f.depth() + 1);
  std::vector<double> current{f.initial()};
  profile.push_back(std::abs(f.initial()));
  for (int n = 1; n <= f.depth(); ++n) {
    const auto d = f.level(n);
    std::vector<double> next(current.size() * 2);
    double sum = 0.0;
    for (std::size_t h = 0; h < current.size(); ++h) {
      next[2 * h] = current[h] + d[h];
      next[2 * h + 1] = current[h] - d[h];
      sum += std::pow(std::abs(next[2 * h]), p) + std::pow(std::abs(next[2 * h + 1]), p);
    }
    profile.push_back(std::pow(sum / static_cast<double>(next.size()), 1.0 / p));
    current = std::move(next);
  }
  return profile;
}

double lp_norm(const PaleyWalshMartingale& f, double p) {
  const auto profile = lp_norm_profile(f, p);
  return *std::max_element(profile.begin(), profile.end());
}

double ratio(const PaleyWalshMartingale& f, const TransformSequence& v, double p) {
  const auto g = transform(f, v);
  const double nf = lp_norm_profile(f, p).back();
  if (!(nf > 0.0)) throw ValidationError("ratio undefined for a martingale with zero norm");
  return lp_norm_profile(g, p).back() / nf;
}

// ---------------------------------------------------------------------------

int HaarExpansion::resolution_level() const {
  int level = 0;
  for (std::size_t k = 1; k < coefficients.size(); ++k) {
    const int j = std::bit_width(k) - 1;
    level = std::max(level, j + 1);
  }
  return level;
}

std::vector<double> haar_evaluate(std::span<const double> coefficients, int level) {
  require(level >= 0 && level <= kMaxDepth, "Haar evaluation level out of range");
  const std::size_t cells = std::size_t{1} << level;
  std::vector<double> out(cells, coefficients.empty() ? 0.0 : coefficients[0]);
  for (std::size_t k = 1; k < coefficients.size(); ++k) {
    const int j = std::bit_width(k) - 1;
    require(j < level, "Haar function finer than the evaluation grid");
    const std::size_t i = k - (std::size_t{1} << j);
    const std::size_t width = cells >> j;  // cells covered by the support
    const std::size_t start = i * width;
    for (std::size_t c = 0; c < width; ++c)
      out[start + c] += c < width / 2 ? coefficients[k] : -coefficients[k];
  }
  return out;
}

HaarSides haar_sides(const HaarExpansion& expansion, double p) {
  check_exponent(p);
  require(expansion.multipliers.size() == expansion.coefficients.size(),
          "Haar coefficients and multipliers must have equal length");
  for (double a : expansion.coefficients) require(std::isfinite(a), "Haar coefficient not finite");
  std::vector<double> transformed(expansion.coefficients.size());
  for (std::size_t k = 0; k < transformed.size(); ++k)
    transformed[k] = expansion.coefficients[k] * expansion.multipliers[k];
  const int level = expansion.resolution_level();
  auto norm = [p](const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += std::pow(std::abs(v), p);
    return std::pow(sum / static_cast<double>(values.size()), 1.0 / p);
  };
  return {norm(haar_evaluate(transformed, level)),
          norm(haar_evaluate(expansion.coefficients, level))};
}

std::pair<PaleyWalshMartingale, TransformSequence> haar_to_martingale(
    const HaarExpansion& expansion) {
  require(expansion.multipliers.size() == expansion.coefficients.size(),
          "Haar coefficients and multipliers must have equal length");
  const int depth = expansion.resolution_level();
  auto f = PaleyWalshMartingale::zeros(depth);
  std::vector<std::vector<double>> v(depth);
  for (int n = 1; n <= depth; ++n) v[n - 1].assign(std::size_t{1} << (n - 1), 1.0);
  for (std::size_t k = 1; k < expansion.coefficients.size(); ++k) {
    const int j = std::bit_width(k) - 1;
    const std::size_t i = k - (std::size_t{1} << j);
    f.level(j + 1)[i] = expansion.coefficients[k];
    v[j][i] = expansion.multipliers[k];
  }
  const double a0 = expansion.coefficients.empty() ? 0.0 : expansion.coefficients[0];
  const double e0 = expansion.multipliers.empty() ? 1.0 : expansion.multipliers[0];
  PaleyWalshMartingale with_start(f.levels(), a0);
  return {std::move(with_start), TransformSequence::predictable(std::move(v), e0)};
}

}  // namespace sharpmult::martingale
