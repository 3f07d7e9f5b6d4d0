#pragma once

#include <optional>
#include <string_view>

namespace sharpmult::constants {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }
  [[nodiscard]] double width() const { return hi - lo; }
};

/// Exponent together with a transform range [b, B].
struct ConstantQuery {
  double p;
  double b;
  double B;

  /// Throws ValidationError unless 1 < p < inf and b < B.
  void validate() const;
};

enum class ResultKind { exact, interval, series_approximation };

std::string_view to_string(ResultKind kind);

/// What is known about C_{p,b,B} in closed form.
struct ConstantResult {
  ResultKind kind = ResultKind::interval;
  Interval bounds;                     // lo == hi for exact results
  std::optional<double> approximation; // series value when kind is series_approximation

  /// Representative scalar: the exact value, the series approximation, or
  /// the interval midpoint.
  [[nodiscard]] double value() const;
};

/// max(p, p/(p-1)).
double conjugate_max(double p);

/// Burkholder's sharp constant p* - 1 for transforms by [-1, 1].
double burkholder_constant(double p);

/// Additive constant (1/2) ln((1 + e^-2)/2) of the Choi series.
double choi_additive_constant();

/// Second-order coefficient alpha_2 of the Choi series.
double choi_alpha2();

/// Truncated Choi series p/2 + (1/2) ln((1+e^-2)/2) + alpha_2/p. Only
/// meaningful as an approximation for p >= 2; the value degrades below.
double choi_approx(double p);

/// [max(1, (p*-1)/2), p*/2].
Interval choi_bounds(double p);

/// Two-sided bound on C_{p,b,B}. The upper end uses |(B+b)/2| so that it is a
/// valid bound for every sign of B + b.
Interval cpbB_bounds(double p, double b, double B);

/// Best available description of C_{p,b,B}.
ConstantResult known_constant(double p, double b, double B);

}  // namespace sharpmult::constants
