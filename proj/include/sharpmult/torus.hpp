#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "sharpmult/symbols.hpp"

namespace sharpmult::torus {

using Complex = std::complex<double>;

/// Uniform sample grid on (-pi, pi]^d, n points per axis at
/// theta_j = -pi + 2 pi j / n. Samples are row-major with axis 1 slowest.
class TorusGrid {
 public:
  TorusGrid(int dimension, int resolution);
  TorusGrid(int dimension, int resolution, std::vector<Complex> samples);

  [[nodiscard]] int dimension() const { return dim_; }
  [[nodiscard]] int resolution() const { return n_; }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] std::span<const Complex> samples() const { return samples_; }
  [[nodiscard]] std::span<Complex> samples() { return samples_; }

  /// Angle of node index j along any axis.
  [[nodiscard]] double node(int j) const;
  /// Multi-index of a flat sample position.
  [[nodiscard]] std::vector<int> multi_index(std::size_t flat) const;

  /// Fourier coefficients f^(k) = (2 pi)^-d \int f e^{-i<k,theta>}, stored in
  /// the same layout as the samples with position j holding frequency
  /// j < n/2 ? j : j - n. Computed on first use and cached.
  [[nodiscard]] std::span<const Complex> coefficients() const;

  /// Builds a grid by sampling fn(theta) at every node.
  template <class Fn>
  static TorusGrid sample(int dimension, int resolution, Fn&& fn) {
    TorusGrid grid(dimension, resolution);
    std::vector<double> theta(dimension);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto idx = grid.multi_index(i);
      for (int a = 0; a < dimension; ++a) theta[a] = grid.node(idx[a]);
      grid.samples_[i] = fn(std::span<const double>(theta));
    }
    return grid;
  }

 private:
  int dim_;
  int n_;
  std::vector<Complex> samples_;
  mutable std::vector<Complex> coefficients_;
};

/// Lattice frequency represented by FFT position j.
inline int frequency_of(int position, int resolution) {
  return position < resolution / 2 ? position : position - resolution;
}

/// Average of the symbol over the unit sphere: analytic when the family
/// provides one, otherwise a 4096-node trapezoid rule (d = 2), a 5810-node
/// Fibonacci lattice (d = 3), or seeded Monte Carlo (d >= 4).
double sphere_average(const symbols::MultiplierSymbol& symbol);

/// The symbol sampled on the frequency lattice of an n^d grid, with m(0)
/// replaced by the sphere average. Rows containing the Nyquist frequency
/// carry the average of m over the two aliases of that row so that the
/// table stays conjugate-symmetric.
class LatticeMultiplier {
 public:
  LatticeMultiplier(const symbols::MultiplierSymbol& symbol, int resolution);

  [[nodiscard]] int dimension() const { return dim_; }
  [[nodiscard]] int resolution() const { return n_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double sup_abs() const;

  /// T f for a grid of matching shape.
  [[nodiscard]] TorusGrid apply(const TorusGrid& f) const;

 private:
  int dim_;
  int n_;
  std::vector<double> values_;
};

TorusGrid apply_multiplier(const TorusGrid& f, const symbols::MultiplierSymbol& symbol);

/// Normalized-measure L^p norm via the rectangle rule: (mean |f|^p)^{1/p}.
double lp_norm(const TorusGrid& f, double p);
double lp_norm(std::span<const double> values, double p);

enum class StartMode {
  random_grid,      // seeded i.i.d. samples, mean removed
  low_frequency,    // seeded coefficients on |k|_inf <= 4, independent of n
};

struct NormOptions {
  StartMode start = StartMode::random_grid;
  double stall_tolerance = 1e-9;
  int stall_window = 10;
};

struct NormEstimate {
  double ratio = 0.0;              // best ||T f||_p / ||f||_p observed
  std::vector<double> trace;       // best-so-far after each iteration
  int iterations_run = 0;
  int restarts = 0;
};

/// Nonlinear power iteration for ||T_m||_{p -> p} on the n^d grid.
NormEstimate estimate_norm_lower(const symbols::MultiplierSymbol& symbol, double p,
                                 int resolution, int iterations, std::uint64_t seed,
                                 const NormOptions& options = {});

struct EigenCheck {
  double constant = 0.0;       // m(e_j)
  double max_deviation = 0.0;  // max_k |m(k e_j) - m(e_j)|
};

/// Compares m(k e_axis) for k = 1..kmax against m(e_axis). `axis` is 0-based.
EigenCheck eigenfunction_check(const symbols::MultiplierSymbol& symbol, int axis, int kmax);
/// Same along an arbitrary unit direction.
EigenCheck eigenfunction_check(const symbols::MultiplierSymbol& symbol,
                               std::span<const double> direction, int kmax);

/// Binary grid format: "TGRD", u8 version 1, u8 d, u32 LE n, then n^d
/// (re, im) pairs as LE float64.
void write_grid(std::ostream& out, const TorusGrid& grid);
TorusGrid read_grid(std::istream& in);
void write_grid(const std::filesystem::path& path, const TorusGrid& grid);
TorusGrid read_grid(const std::filesystem::path& path);

}  // namespace sharpmult::torus
