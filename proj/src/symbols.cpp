#include "sharpmult/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "sharpmult/errors.hpp"

namespace sharpmult::symbols {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return dot(a, a); }

void check_nonzero(std::span<const double> xi) {
  if (std::all_of(xi.begin(), xi.end(), [](double v) { return v == 0.0; }))
    throw EvaluationError("symbol evaluated at the origin");
}

std::vector<int> checked_subset(std::vector<int> subset, int dimension) {
  require(dimension >= 2, "dimension must be at least 2");
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  require(!subset.empty(), "index subset J must be nonempty");
  require(static_cast<int>(subset.size()) < dimension, "index subset J must be proper");
  require(subset.front() >= 0 && subset.back() < dimension, "index subset J out of range");
  return subset;
}

bool in_subset(const std::vector<int>& subset, int j) {
  return std::binary_search(subset.begin(), subset.end(), j);
}

// First clearly nonzero component positive.
void normalize_sign(Vector& v) {
  for (double c : v) {
    if (std::abs(c) > 1e-12) {
      if (c < 0) {
        for (double& x : v) x = -x;
      }
      return;
    }
  }
}

double eval_log(const LogParams& params, std::span<const double> xi) {
  std::size_t zeros = 0;
  std::size_t zeros_in = 0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    if (xi[j] == 0.0) {
      ++zeros;
      if (in_subset(params.subset, static_cast<int>(j))) ++zeros_in;
    }
  }
  if (zeros > 0) return static_cast<double>(zeros_in) / static_cast<double>(zeros);

  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double term = std::log1p(1.0 / (xi[j] * xi[j]));
    den += term;
    if (in_subset(params.subset, static_cast<int>(j))) num += term;
  }
  if (den > 0.0) return num / den;
  // Every term underflowed: ln(1 + t) ~ t, rescale by the smallest coordinate.
  double smallest = std::abs(xi[0]);
  for (double v : xi) smallest = std::min(smallest, std::abs(v));
  num = den = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double r = smallest / xi[j];
    den += r * r;
    if (in_subset(params.subset, static_cast<int>(j))) num += r * r;
  }
  return num / den;
}

}  // namespace

// ---------------------------------------------------------------------------

std::pair<std::vector<double>, Frame> jacobi_eigen(int n, std::vector<double> a) {
  require(n >= 1 && a.size() == static_cast<std::size_t>(n) * n, "matrix must be square");
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  const double threshold = 1e-13 * std::max(1.0, frob);

  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > threshold; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a[i * n + i] < a[j * n + j]; });
  std::vector<double> values(n);
  Frame vectors(n, Vector(n));
  for (int j = 0; j < n; ++j) {
    values[j] = a[order[j] * n + order[j]];
    for (int k = 0; k < n; ++k) vectors[j][k] = v[k * n + order[j]];
    normalize_sign(vectors[j]);
  }
  return {values, vectors};
}

QuadraticFormSpec::QuadraticFormSpec(int dimension, std::vector<double> entries)
    : dim_(dimension), a_(std::move(entries)) {
  require(dim_ >= 1, "matrix dimension must be positive");
  require(a_.size() == static_cast<std::size_t>(dim_) * dim_, "matrix must be d x d");
  for (double x : a_) require(std::isfinite(x), "matrix entries must be finite");
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      require(a_[i * dim_ + j] == a_[j * dim_ + i], "matrix must be symmetric");
  std::tie(eigenvalues_, eigenvectors_) = jacobi_eigen(dim_, a_);
}

double QuadraticFormSpec::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += entry(i, i);
  return t;
}

double QuadraticFormSpec::form(std::span<const double> xi) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (int j = 0; j < dim_; ++j) row += entry(i, j) * xi[j];
    s += row * xi[i];
  }
  return s;
}

// ---------------------------------------------------------------------------

void LevyMeasureSpec::validate() const {
  require(dimension >= 1, "Levy spec dimension must be positive");
  require(b < B, "Levy spec requires b < B");
  require(!nu.empty() || !sphere.empty(), "Levy spec needs at least one atom");
  const double bound = std::max(std::abs(b), std::abs(B));
  for (const auto& atom : nu) {
    require(static_cast<int>(atom.point.size()) == dimension, "nu atom has wrong dimension");
    require(norm2(atom.point) > 0.0, "nu atom at the origin");
    require(std::isfinite(atom.weight) && atom.weight > 0.0, "nu atom weight must be > 0");
    require(std::abs(atom.phi) <= bound, "phi exceeds max(|b|,|B|)");
  }
  for (const auto& atom : sphere) {
    require(static_cast<int>(atom.direction.size()) == dimension,
            "sphere atom has wrong dimension");
    require(std::abs(std::sqrt(norm2(atom.direction)) - 1.0) <= 1e-12,
            "sphere atom direction must be a unit vector");
    require(std::isfinite(atom.weight) && atom.weight >= 0.0,
            "sphere atom weight must be >= 0");
    require(std::abs(atom.psi) <= bound, "psi exceeds max(|b|,|B|)");
  }
}

std::string to_string(Family family) {
  switch (family) {
    case Family::quadratic: return "quadratic";
    case Family::partial_riesz: return "partial-riesz";
    case Family::marcinkiewicz: return "marcinkiewicz";
    case Family::split_stable: return "split-stable";
    case Family::log: return "log";
    case Family::levy: return "levy";
  }
  return "unknown";
}

MultiplierSymbol::MultiplierSymbol(int dimension, FamilyParams params, SymbolFlags flags,
                                   double b, double B)
    : dim_(dimension), params_(std::move(params)), flags_(flags), b_(b), B_(B) {}

Family MultiplierSymbol::family() const { return static_cast<Family>(params_.index()); }

namespace {

struct Evaluator {
  std::span<const double> xi;

  double operator()(const QuadraticParams& q) const {
    const double value = q.form.form(xi) / norm2(xi);
    return q.sign == QuadraticSign::stated ? value : -value;
  }
  double operator()(const PartialRieszParams& q) const {
    double num = 0.0;
    for (int j : q.subset) num += xi[j] * xi[j];
    return num / norm2(xi);
  }
  double operator()(const MarcinkiewiczParams& q) const {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      const double term = std::pow(std::abs(xi[j]), q.alpha);
      den += term;
      if (in_subset(q.subset, static_cast<int>(j))) num += term;
    }
    return num / den;
  }
  double operator()(const SplitStableParams& q) const {
    double first = 0.0;
    double second = 0.0;
    for (int j = 0; j < q.half_dimension; ++j) first += xi[j] * xi[j];
    for (int j = q.half_dimension; j < 2 * q.half_dimension; ++j) second += xi[j] * xi[j];
    const double a = std::pow(first, 0.5 * q.alpha);
    const double c = std::pow(second, 0.5 * q.alpha);
    return a / (a + c);
  }
  double operator()(const LogParams& q) const { return eval_log(q, xi); }
  double operator()(const LevyParams& q) const {
    double num = 0.0;
    double den = 0.0;
    for (const auto& atom : q.spec.nu) {
      const double w = atom.weight * (1.0 - std::cos(dot(xi, atom.point)));
      num += w * atom.phi;
      den += w;
    }
    for (const auto& atom : q.spec.sphere) {
      const double s = dot(xi, atom.direction);
      const double w = 0.5 * atom.weight * s * s;
      num += w * atom.psi;
      den += w;
    }
    if (!(den > 0.0)) {
      std::ostringstream msg;
      msg << "Levy symbol denominator vanishes at xi = (";
      for (std::size_t j = 0; j < xi.size(); ++j) msg << (j ? ", " : "") << xi[j];
      msg << ")";
      throw EvaluationError(msg.str());
    }
    return num / den;
  }
};

}  // namespace

std::complex<double> MultiplierSymbol::operator()(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != dim_)
    throw EvaluationError("frequency dimension does not match the symbol");
  check_nonzero(xi);
  return {std::visit(Evaluator{xi}, params_), 0.0};
}

std::optional<double> MultiplierSymbol::analytic_sphere_average() const {
  if (const auto* q = std::get_if<QuadraticParams>(&params_)) {
    const double avg = q->form.trace() / dim_;
    return q->sign == QuadraticSign::stated ? avg : -avg;
  }
  if (const auto* q = std::get_if<PartialRieszParams>(&params_))
    return static_cast<double>(q->subset.size()) / dim_;
  if (const auto* q = std::get_if<SplitStableParams>(&params_)) {
    if (q->alpha > 0) return 0.5;  // invariant under swapping the two blocks
  }
  if (const auto* q = std::get_if<LevyParams>(&params_)) {
    bool constant = true;
    for (const auto& a : q->spec.nu) constant = constant && a.phi == 1.0;
    for (const auto& a : q->spec.sphere) constant = constant && a.psi == 1.0;
    if (constant) return 1.0;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

MultiplierSymbol riesz2_symbol(const QuadraticFormSpec& spec, QuadraticSign sign) {
  require(spec.dimension() >= 2, "quadratic-form symbol needs d >= 2");
  const auto& ev = spec.eigenvalues();
  double b = ev.front();
  double B = ev.back();
  if (sign == QuadraticSign::composition) std::tie(b, B) = std::pair{-B, -b};
  return {spec.dimension(), QuadraticParams{spec, sign}, {true, true, true}, b, B};
}

MultiplierSymbol partial_riesz_symbol(std::vector<int> subset, int dimension) {
  subset = checked_subset(std::move(subset), dimension);
  return {dimension, PartialRieszParams{std::move(subset)}, {true, true, true}, 0.0, 1.0};
}

MultiplierSymbol marcinkiewicz_symbol(std::vector<int> subset, double alpha, int dimension) {
  require(alpha > 0.0 && alpha < 2.0, "Marcinkiewicz exponent alpha must lie in (0, 2)");
  subset = checked_subset(std::move(subset), dimension);
  return {dimension, MarcinkiewiczParams{std::move(subset), alpha}, {true, true, true}, 0.0,
          1.0};
}

MultiplierSymbol split_stable_symbol(int half_dimension, double alpha) {
  require(half_dimension >= 1, "half-dimension n must be >= 1");
  require(alpha > 0.0 && alpha < 2.0, "stable exponent alpha must lie in (0, 2)");
  return {2 * half_dimension, SplitStableParams{half_dimension, alpha}, {true, true, true},
          0.0, 1.0};
}

MultiplierSymbol log_symbol(std::vector<int> subset, int dimension) {
  subset = checked_subset(std::move(subset), dimension);
  return {dimension, LogParams{std::move(subset)}, {true, true, false}, 0.0, 1.0};
}

MultiplierSymbol levy_symbol(const LevyMeasureSpec& spec) {
  spec.validate();
  const bool homogeneous = spec.nu.empty();
  return {spec.dimension, LevyParams{spec}, {true, true, homogeneous}, spec.b, spec.B};
}

// ---------------------------------------------------------------------------

Frame standard_frame(int dimension) {
  Frame frame(dimension, Vector(dimension, 0.0));
  for (int j = 0; j < dimension; ++j) frame[j][j] = 1.0;
  return frame;
}

void validate_frame(const Frame& frame, int dimension) {
  require(static_cast<int>(frame.size()) == dimension, "frame must have d vectors");
  for (const auto& v : frame)
    require(static_cast<int>(v.size()) == dimension, "frame vector has wrong dimension");
  for (int i = 0; i < dimension; ++i)
    for (int j = i; j < dimension; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      require(std::abs(dot(frame[i], frame[j]) - expected) <= 1e-10, "frame is not orthonormal");
    }
}

std::pair<double, double> extract_bB(const MultiplierSymbol& symbol, const Frame& frame) {
  validate_frame(frame, symbol.dimension());
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t j = 0; j < frame.size(); ++j) {
    const auto value = symbol(frame[j]);
    if (value.imag() != 0.0)
      throw ValidationError("symbol is not real at frame vector " + std::to_string(j));
    if (j == 0 || value.real() < lo) lo = value.real();
    if (j == 0 || value.real() > hi) hi = value.real();
  }
  return {lo, hi};
}

PropertyReport check_properties(const MultiplierSymbol& symbol, std::size_t sample_count,
                                std::uint64_t seed) {
  require(sample_count >= 1, "sample_count must be >= 1");
  PropertyReport report;
  report.samples = sample_count;
  report.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> log_lambda(std::log(0.1), std::log(10.0));
  const int d = symbol.dimension();
  Vector xi(d);
  Vector neg(d);
  Vector scaled(d);
  for (std::size_t s = 0; s < sample_count; ++s) {
    do {
      for (auto& x : xi) x = gauss(rng);
    } while (norm2(xi) == 0.0);
    const double lambda = std::exp(log_lambda(rng));
    for (int j = 0; j < d; ++j) {
      neg[j] = -xi[j];
      scaled[j] = lambda * xi[j];
    }
    const auto m = symbol(xi);
    report.realness = std::max(report.realness, std::abs(m.imag()));
    report.evenness = std::max(report.evenness, std::abs(m - symbol(neg)));
    report.homogeneity = std::max(report.homogeneity, std::abs(m - symbol(scaled)));
  }
  return report;
}

}  // namespace sharpmult::symbols
