#include "sharpmult/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>

#include "sharpmult/errors.hpp"

namespace sharpmult::torus {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t grid_size(int dimension, int resolution) {
  std::size_t total = 1;
  for (int a = 0; a < dimension; ++a) total *= static_cast<std::size_t>(resolution);
  return total;
}

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place d-dimensional transform over a std::complex buffer.
class FftPlan {
 public:
  FftPlan(int dimension, int resolution, std::vector<Complex>& buffer, int sign) {
    std::vector<int> dims(dimension, resolution);
    auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft(dimension, dims.data(), data, data, sign, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

void transform(std::vector<Complex>& buffer, int dimension, int resolution, int sign) {
  FftPlan plan(dimension, resolution, buffer, sign);
  plan.execute();
}

}  // namespace

// ---------------------------------------------------------------------------

TorusGrid::TorusGrid(int dimension, int resolution)
    : TorusGrid(dimension, resolution,
                std::vector<Complex>(dimension >= 1 && resolution >= 2
                                         ? grid_size(dimension, resolution)
                                         : 0)) {}

TorusGrid::TorusGrid(int dimension, int resolution, std::vector<Complex> samples)
    : dim_(dimension), n_(resolution), samples_(std::move(samples)) {
  require(dim_ >= 1 && dim_ <= 255, "grid dimension must be in [1, 255]");
  require(n_ >= 2 && n_ % 2 == 0, "grid resolution must be even and >= 2");
  require(samples_.size() == grid_size(dim_, n_), "sample count must equal n^d");
}

double TorusGrid::node(int j) const { return -kPi + 2.0 * kPi * j / n_; }

std::vector<int> TorusGrid::multi_index(std::size_t flat) const {
  std::vector<int> idx(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::span<const Complex> TorusGrid::coefficients() const {
  if (coefficients_.empty()) {
    std::vector<Complex> buf(samples_.begin(), samples_.end());
    transform(buf, dim_, n_, FFTW_FORWARD);
    // theta starts at -pi: e^{-ik theta_j} = (-1)^k e^{-2 pi i k j / n}.
    const double scale = 1.0 / static_cast<double>(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
      const auto idx = multi_index(i);
      int parity = 0;
      for (int a = 0; a < dim_; ++a) parity += frequency_of(idx[a], n_);
      buf[i] *= (parity % 2 == 0 ? scale : -scale);
    }
    coefficients_ = std::move(buf);
  }
  return coefficients_;
}

// ---------------------------------------------------------------------------

double sphere_average(const symbols::MultiplierSymbol& symbol) {
  if (auto exact = symbol.analytic_sphere_average()) return *exact;
  const int d = symbol.dimension();
  if (d == 2) {
    constexpr int nodes = 4096;
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double t = 2.0 * kPi * i / nodes;
      const double xi[2] = {std::cos(t), std::sin(t)};
      sum += symbol.real(xi);
    }
    return sum / nodes;
  }
  if (d == 3) {
    // Equal-weight Fibonacci lattice.
    constexpr int nodes = 5810;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / nodes;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      const double xi[3] = {r * std::cos(phi), r * std::sin(phi), z};
      sum += symbol.real(xi);
    }
    return sum / nodes;
  }
  constexpr int samples = 200000;
  std::mt19937_64 rng(0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> xi(d);
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    double r2 = 0.0;
    do {
      r2 = 0.0;
      for (auto& x : xi) {
        x = gauss(rng);
        r2 += x * x;
      }
    } while (r2 == 0.0);
    sum += symbol.real(xi);
  }
  return sum / samples;
}

LatticeMultiplier::LatticeMultiplier(const symbols::MultiplierSymbol& symbol, int resolution)
    : dim_(symbol.dimension()), n_(resolution) {
  require(n_ >= 2 && n_ % 2 == 0, "grid resolution must be even and >= 2");
  require(symbol.flags().is_real, "lattice multiplier requires a real symbol");
  const std::size_t total = grid_size(dim_, n_);
  values_.resize(total);
  const double average = sphere_average(symbol);
  std::vector<int> idx(dim_);
  std::vector<double> k(dim_);
  std::vector<double> alias(dim_);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (int a = dim_ - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rest % n_);
      rest /= n_;
    }
    bool zero = true;
    bool nyquist = false;
    for (int a = 0; a < dim_; ++a) {
      const int f = frequency_of(idx[a], n_);
      k[a] = f;
      alias[a] = f == -n_ / 2 ? -f : f;
      zero = zero && f == 0;
      nyquist = nyquist || f == -n_ / 2;
    }
    if (zero) {
      values_[i] = average;
      continue;
    }
    try {
      double value = symbol.real(k);
      if (nyquist) value = 0.5 * (value + symbol.real(alias));
      values_[i] = value;
    } catch (const EvaluationError& e) {
      std::string where = "k = (";
      for (int a = 0; a < dim_; ++a) where += (a ? ", " : "") + std::to_string(idx[a]);
      throw EvaluationError(std::string(e.what()) + " [lattice point " + where + ")]");
    }
  }
}

double LatticeMultiplier::sup_abs() const {
  double best = 0.0;
  for (double v : values_) best = std::max(best, std::abs(v));
  return best;
}

TorusGrid LatticeMultiplier::apply(const TorusGrid& f) const {
  require(f.dimension() == dim_ && f.resolution() == n_,
          "grid shape does not match the lattice multiplier");
  std::vector<Complex> buf(f.samples().begin(), f.samples().end());
  transform(buf, dim_, n_, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= values_[i] * scale;
  transform(buf, dim_, n_, FFTW_BACKWARD);
  return TorusGrid(dim_, n_, std::move(buf));
}

TorusGrid apply_multiplier(const TorusGrid& f, const symbols::MultiplierSymbol& symbol) {
  require(f.dimension() == symbol.dimension(), "grid and symbol dimensions differ");
  return LatticeMultiplier(symbol, f.resolution()).apply(f);
}

// ---------------------------------------------------------------------------

double lp_norm(const TorusGrid& f, double p) {
  require(p >= 1.0 && std::isfinite(p), "L^p norm requires finite p >= 1");
  double sum = 0.0;
  for (const auto& z : f.samples()) sum += std::pow(std::abs(z), p);
  return std::pow(sum / static_cast<double>(f.size()), 1.0 / p);
}

double lp_norm(std::span<const double> values, double p) {
  require(p >= 1.0 && std::isfinite(p), "L^p norm requires finite p >= 1");
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(sum / static_cast<double>(values.size()), 1.0 / p);
}

namespace {

/// Real-valued power iteration state; T is applied through FFTW plans that
/// are created once.
class RealOperator {
 public:
  RealOperator(const LatticeMultiplier& table)
      : table_(table),
        buffer_(table.values().size()),
        forward_(table.dimension(), table.resolution(), buffer_, FFTW_FORWARD),
        backward_(table.dimension(), table.resolution(), buffer_, FFTW_BACKWARD) {}

  void apply(std::span<const double> in, std::span<double> out) {
    const auto values = table_.values();
    const double scale = 1.0 / static_cast<double>(buffer_.size());
    for (std::size_t i = 0; i < buffer_.size(); ++i) buffer_[i] = in[i];
    forward_.execute();
    for (std::size_t i = 0; i < buffer_.size(); ++i) buffer_[i] *= values[i] * scale;
    backward_.execute();
    for (std::size_t i = 0; i < buffer_.size(); ++i) out[i] = buffer_[i].real();
  }

 private:
  const LatticeMultiplier& table_;
  std::vector<Complex> buffer_;
  FftPlan forward_;
  FftPlan backward_;
};

/// u -> |u|^{r-1} sgn(u), rescaled to unit L^{r'} norm with 1/r + 1/r' = 1.
/// Returns false when u vanishes identically.
bool duality_map(std::span<const double> u, double r, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = std::copysign(std::pow(std::abs(u[i]), r - 1.0), u[i]);
  const double conj = r / (r - 1.0);
  const double norm = lp_norm(out, conj);
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  for (auto& x : out) x /= norm;
  return true;
}

void random_start(std::vector<double>& f, const TorusGrid& shape, std::uint64_t seed,
                  StartMode mode) {
  std::mt19937_64 rng(seed);
  if (mode == StartMode::random_grid) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double mean = 0.0;
    for (auto& x : f) {
      x = uni(rng);
      mean += x;
    }
    mean /= static_cast<double>(f.size());
    for (auto& x : f) x -= mean;
    return;
  }
  // Low-frequency trigonometric polynomial. The coefficient stream depends
  // only on the seed and d, so every resolution >= 10 sees the same function.
  constexpr int kmax = 4;
  const int d = shape.dimension();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<int>> modes;
  std::vector<double> cos_coef;
  std::vector<double> sin_coef;
  std::vector<int> k(d, -kmax);
  while (true) {
    bool nonzero = std::any_of(k.begin(), k.end(), [](int v) { return v != 0; });
    modes.push_back(k);
    const double a = gauss(rng);
    const double b = gauss(rng);
    cos_coef.push_back(nonzero ? a : 0.0);
    sin_coef.push_back(nonzero ? b : 0.0);
    int a_idx = d - 1;
    while (a_idx >= 0 && k[a_idx] == kmax) k[a_idx--] = -kmax;
    if (a_idx < 0) break;
    ++k[a_idx];
  }
  std::vector<double> theta(d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto idx = shape.multi_index(i);
    for (int a = 0; a < d; ++a) theta[a] = shape.node(idx[a]);
    double value = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      double phase = 0.0;
      for (int a = 0; a < d; ++a) phase += modes[m][a] * theta[a];
      value += cos_coef[m] * std::cos(phase) + sin_coef[m] * std::sin(phase);
    }
    f[i] = value;
  }
}

}  // namespace

NormEstimate estimate_norm_lower(const symbols::MultiplierSymbol& symbol, double p,
                                 int resolution, int iterations, std::uint64_t seed,
                                 const NormOptions& options) {
  require(std::isfinite(p) && p > 1.0, "norm estimate requires 1 < p < inf");
  require(resolution >= 2 && resolution % 2 == 0, "grid resolution must be even");
  require(iterations >= 1, "iterations must be >= 1");
  require(symbol.flags().is_real && symbol.flags().is_even,
          "norm iteration requires a real even symbol");

  const LatticeMultiplier table(symbol, resolution);
  RealOperator op(table);
  const TorusGrid shape(symbol.dimension(), resolution);
  const std::size_t size = shape.size();
  const double q = p / (p - 1.0);

  std::vector<double> f(size);
  std::vector<double> g(size);
  std::vector<double> h(size);

  NormEstimate result;
  auto restart = [&](int attempt) {
    random_start(f, shape, seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ull,
                 options.start);
    const double norm = lp_norm(f, p);
    if (norm > 0.0)
      for (auto& x : f) x /= norm;
  };
  restart(0);

  int stall = 0;
  for (int it = 0; it < iterations; ++it) {
    const double before = result.ratio;
    bool degenerate = false;

    op.apply(f, g);
    const double nf = lp_norm(f, p);
    const double ng = lp_norm(g, p);
    if (nf > 0.0) result.ratio = std::max(result.ratio, ng / nf);

    if (nf > 0.0 && duality_map(g, p, h)) {
      op.apply(h, g);  // T is self-adjoint for real even symbols
      const double nh = lp_norm(h, q);
      const double nk = lp_norm(g, q);
      if (nh > 0.0) result.ratio = std::max(result.ratio, nk / nh);
      degenerate = !duality_map(g, q, f);
    } else {
      degenerate = true;
    }

    if (degenerate) {
      if (result.restarts >= 3) {
        result.trace.push_back(result.ratio);
        result.iterations_run = it + 1;
        break;
      }
      ++result.restarts;
      restart(result.restarts);
    }

    result.trace.push_back(result.ratio);
    result.iterations_run = it + 1;
    if (result.ratio - before < options.stall_tolerance) {
      if (++stall >= options.stall_window) break;
    } else {
      stall = 0;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

EigenCheck eigenfunction_check(const symbols::MultiplierSymbol& symbol, int axis, int kmax) {
  require(axis >= 0 && axis < symbol.dimension(), "axis out of range");
  std::vector<double> e(symbol.dimension(), 0.0);
  e[axis] = 1.0;
  return eigenfunction_check(symbol, e, kmax);
}

EigenCheck eigenfunction_check(const symbols::MultiplierSymbol& symbol,
                               std::span<const double> direction, int kmax) {
  require(static_cast<int>(direction.size()) == symbol.dimension(),
          "direction has wrong dimension");
  require(kmax >= 1, "kmax must be >= 1");
  require(symbol.flags().is_real, "eigenfunction check requires a real symbol");
  EigenCheck check;
  check.constant = symbol.real(direction);
  std::vector<double> point(direction.size());
  for (int k = 1; k <= kmax; ++k) {
    for (std::size_t a = 0; a < direction.size(); ++a) point[a] = k * direction[a];
    check.max_deviation =
        std::max(check.max_deviation, std::abs(symbol.real(point) - check.constant));
  }
  return check;
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T)))
    throw ValidationError("grid file truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_grid(std::ostream& out, const TorusGrid& grid) {
  out.write("TGRD", 4);
  put_le<std::uint8_t>(out, 1);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(grid.dimension()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(grid.resolution()));
  for (const auto& z : grid.samples()) {
    put_le<double>(out, z.real());
    put_le<double>(out, z.imag());
  }
}

TorusGrid read_grid(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != "TGRD")
    throw ValidationError("not a TGRD grid file");
  const auto version = get_le<std::uint8_t>(in);
  if (version != 1) throw ValidationError("unsupported grid file version");
  const int d = get_le<std::uint8_t>(in);
  const auto n = get_le<std::uint32_t>(in);
  require(d >= 1, "grid file dimension must be >= 1");
  require(n >= 2 && n % 2 == 0 && n <= (1u << 20), "grid file resolution must be even");
  std::vector<Complex> samples(grid_size(d, static_cast<int>(n)));
  for (auto& z : samples) {
    const double re = get_le<double>(in);
    const double im = get_le<double>(in);
    z = {re, im};
  }
  return TorusGrid(d, static_cast<int>(n), std::move(samples));
}

void write_grid(const std::filesystem::path& path, const TorusGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_grid(out, grid);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

TorusGrid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open grid file " + path.string());
  return read_grid(in);
}

}  // namespace sharpmult::torus
