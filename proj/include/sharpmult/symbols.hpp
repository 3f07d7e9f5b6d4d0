#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sharpmult::symbols {

using Vector = std::vector<double>;
/// Orthonormal frame: frame[j] is the j-th basis vector.
using Frame = std::vector<Vector>;

/// Symmetric real matrix with its eigendecomposition.
class QuadraticFormSpec {
 public:
  /// Row-major d x d entries. Throws ValidationError when the matrix is not
  /// exactly symmetric or not square.
  QuadraticFormSpec(int dimension, std::vector<double> entries);

  [[nodiscard]] int dimension() const { return dim_; }
  [[nodiscard]] double entry(int i, int j) const { return a_[i * dim_ + j]; }
  [[nodiscard]] const std::vector<double>& entries() const { return a_; }
  /// Ascending eigenvalues.
  [[nodiscard]] const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  /// eigenvectors()[j] belongs to eigenvalues()[j].
  [[nodiscard]] const Frame& eigenvectors() const { return eigenvectors_; }
  [[nodiscard]] double trace() const;
  /// <A xi, xi>.
  [[nodiscard]] double form(std::span<const double> xi) const;

 private:
  int dim_;
  std::vector<double> a_;
  std::vector<double> eigenvalues_;
  Frame eigenvectors_;
};

/// Cyclic Jacobi eigendecomposition of a symmetric row-major matrix.
/// Returns ascending eigenvalues and matching unit eigenvectors.
std::pair<std::vector<double>, Frame> jacobi_eigen(int dimension, std::vector<double> entries);

struct NuAtom {
  Vector point;   // x != 0
  double weight;  // > 0
  double phi;     // value of the modulating function at x
};

struct SphereAtom {
  Vector direction;  // |theta| = 1
  double weight;     // >= 0
  double psi;
};

/// Finite atomic Levy measure, sphere measure and modulating functions.
struct LevyMeasureSpec {
  int dimension = 2;
  std::vector<NuAtom> nu;
  std::vector<SphereAtom> sphere;
  double b = 0.0;
  double B = 1.0;

  /// Throws ValidationError when any invariant fails.
  void validate() const;
};

enum class Family { quadratic, partial_riesz, marcinkiewicz, split_stable, log, levy };

std::string to_string(Family family);

/// Sign of the quadratic-form symbol. `stated` is +<A xi, xi>/|xi|^2;
/// `composition` is the symbol of sum a_ij R_i R_j, i.e. the negative.
enum class QuadraticSign { stated, composition };

struct QuadraticParams {
  QuadraticFormSpec form;
  QuadraticSign sign = QuadraticSign::stated;
};
struct PartialRieszParams {
  std::vector<int> subset;  // 0-based indices
};
struct MarcinkiewiczParams {
  std::vector<int> subset;
  double alpha;
};
struct SplitStableParams {
  int half_dimension;
  double alpha;
};
struct LogParams {
  std::vector<int> subset;
};
struct LevyParams {
  LevyMeasureSpec spec;
};

using FamilyParams = std::variant<QuadraticParams, PartialRieszParams, MarcinkiewiczParams,
                                  SplitStableParams, LogParams, LevyParams>;

struct SymbolFlags {
  bool is_real = true;
  bool is_even = true;
  bool is_homogeneous0 = true;
};

/// Immutable Fourier multiplier on R^d \ {0}.
class MultiplierSymbol {
 public:
  MultiplierSymbol(int dimension, FamilyParams params, SymbolFlags flags, double b, double B);

  [[nodiscard]] int dimension() const { return dim_; }
  [[nodiscard]] Family family() const;
  [[nodiscard]] const FamilyParams& params() const { return params_; }
  [[nodiscard]] const SymbolFlags& flags() const { return flags_; }
  /// Range data (b, B) attached at construction.
  [[nodiscard]] std::pair<double, double> range() const { return {b_, B_}; }

  /// m(xi). Throws EvaluationError at xi = 0 or where the family is undefined.
  [[nodiscard]] std::complex<double> operator()(std::span<const double> xi) const;
  /// Real part of m(xi) for real families.
  [[nodiscard]] double real(std::span<const double> xi) const { return (*this)(xi).real(); }

  /// Analytic average over the unit sphere when the family has one.
  [[nodiscard]] std::optional<double> analytic_sphere_average() const;

 private:
  int dim_;
  FamilyParams params_;
  SymbolFlags flags_;
  double b_;
  double B_;
};

MultiplierSymbol riesz2_symbol(const QuadraticFormSpec& spec,
                               QuadraticSign sign = QuadraticSign::stated);
MultiplierSymbol partial_riesz_symbol(std::vector<int> subset, int dimension);
MultiplierSymbol marcinkiewicz_symbol(std::vector<int> subset, double alpha, int dimension);
MultiplierSymbol split_stable_symbol(int half_dimension, double alpha);
MultiplierSymbol log_symbol(std::vector<int> subset, int dimension);
MultiplierSymbol levy_symbol(const LevyMeasureSpec& spec);

/// (min_j m(e_j), max_j m(e_j)) over the frame vectors.
std::pair<double, double> extract_bB(const MultiplierSymbol& symbol, const Frame& frame);

/// Standard basis of R^d.
Frame standard_frame(int dimension);

/// Throws ValidationError unless the frame is orthonormal to 1e-10.
void validate_frame(const Frame& frame, int dimension);

struct PropertyReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double realness = 0.0;     // max |Im m(xi)|
  double evenness = 0.0;     // max |m(xi) - m(-xi)|
  double homogeneity = 0.0;  // max |m(lambda xi) - m(xi)|
};

/// Samples Gaussian xi and log-uniform lambda in [1/10, 10]; deterministic
/// for a fixed seed.
PropertyReport check_properties(const MultiplierSymbol& symbol, std::size_t sample_count,
                                std::uint64_t seed);

}  // namespace sharpmult::symbols
