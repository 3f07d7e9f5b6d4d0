#include "sharpmult/constants.hpp"

#include <algorithm>
#include <cmath>

#include "sharpmult/errors.hpp"

namespace sharpmult::constants {

namespace {

void check_exponent(double p) {
  require(std::isfinite(p) && p > 1.0, "exponent p must be finite and > 1");
}

}  // namespace

void ConstantQuery::validate() const {
  check_exponent(p);
  require(std::isfinite(b) && std::isfinite(B), "b and B must be finite");
  require(b < B, "transform range requires b < B");
}

std::string_view to_string(ResultKind kind) {
  switch (kind) {
    case ResultKind::exact: return "exact";
    case ResultKind::interval: return "interval";
    case ResultKind::series_approximation: return "series-approximation";
  }
  return "unknown";
}

double ConstantResult::value() const {
  if (kind == ResultKind::exact) return bounds.lo;
  if (approximation) return *approximation;
  return 0.5 * (bounds.lo + bounds.hi);
}

double conjugate_max(double p) {
  check_exponent(p);
  return std::max(p, p / (p - 1.0));
}

double burkholder_constant(double p) {
  check_exponent(p);
  return p <= 2.0 ? 1.0 / (p - 1.0) : p - 1.0;
}

double choi_additive_constant() {
  const double e2 = std::exp(-2.0);
  return 0.5 * std::log((1.0 + e2) / 2.0);
}

double choi_alpha2() {
  const double e2 = std::exp(-2.0);
  const double log_term = std::log((1.0 + e2) / 2.0);
  const double ratio = e2 / (1.0 + e2);
  return log_term * log_term + 0.5 * log_term - 2.0 * ratio * ratio;
}

double choi_approx(double p) {
  check_exponent(p);
  return 0.5 * p + choi_additive_constant() + choi_alpha2() / p;
}

Interval choi_bounds(double p) {
  const double ps = conjugate_max(p);
  return {std::max(1.0, 0.5 * (ps - 1.0)), 0.5 * ps};
}

Interval cpbB_bounds(double p, double b, double B) {
  ConstantQuery{p, b, B}.validate();
  const double burk = burkholder_constant(p);
  const double half_width = 0.5 * (B - b);
  const double lo = std::max(half_width * burk, std::max(std::abs(b), std::abs(B)));
  const double hi = half_width * burk + std::abs(0.5 * (B + b));
  return {lo, std::max(lo, hi)};
}

ConstantResult known_constant(double p, double b, double B) {
  ConstantQuery{p, b, B}.validate();
  ConstantResult result;
  if (b == -B) {
    const double exact = B * burkholder_constant(p);
    result.kind = ResultKind::exact;
    result.bounds = {exact, exact};
    return result;
  }
  if (b == 0.0) {
    const Interval unit = choi_bounds(p);
    result.bounds = {B * unit.lo, B * unit.hi};
    if (unit.lo == unit.hi) {
      result.kind = ResultKind::exact;
    } else {
      result.kind = ResultKind::series_approximation;
      result.approximation = B * choi_approx(p);
    }
    return result;
  }
  result.kind = ResultKind::interval;
  result.bounds = cpbB_bounds(p, b, B);
  if (result.bounds.lo == result.bounds.hi) result.kind = ResultKind::exact;
  return result;
}

}  // namespace sharpmult::constants
