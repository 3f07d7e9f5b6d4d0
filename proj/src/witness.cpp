#include "sharpmult/witness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sharpmult/errors.hpp"
#include "sharpmult/torus.hpp"

namespace sharpmult::witness {

namespace {

double real_value(const symbols::MultiplierSymbol& symbol, const symbols::Vector& axis) {
  const auto value = symbol(axis);
  if (value.imag() != 0.0) {
    std::ostringstream message;
    message << "symbol is not real on a frame vector (imaginary part " << value.imag() << ")";
    throw ValidationError(message.str());
  }
  return value.real();
}

}  // namespace

AxisFrame axis_alignment(const symbols::MultiplierSymbol& symbol, symbols::Frame frame) {
  symbols::validate_frame(frame, symbol.dimension());
  require(symbol.dimension() >= 2, "axis alignment needs d >= 2");
  std::vector<double> values;
  for (const auto& axis : frame) values.push_back(real_value(symbol, axis));
  // First minimum and first maximum; ties keep the earlier axis.
  const auto lo = std::min_element(values.begin(), values.end()) - values.begin();
  auto hi = std::max_element(values.begin(), values.end()) - values.begin();
  if (hi == lo) hi = lo == 0 ? 1 : 0;

  AxisFrame out;
  out.frame.push_back(frame[lo]);
  out.frame.push_back(frame[hi]);
  for (std::size_t j = 0; j < frame.size(); ++j)
    if (static_cast<std::ptrdiff_t>(j) != lo && static_cast<std::ptrdiff_t>(j) != hi)
      out.frame.push_back(frame[j]);
  out.b = values[lo];
  out.B = values[hi];
  return out;
}

AxisFrame axis_alignment(const symbols::MultiplierSymbol& symbol) {
  if (const auto* q = std::get_if<symbols::QuadraticParams>(&symbol.params()))
    return axis_alignment(symbol, q->form.eigenvectors());
  return axis_alignment(symbol, symbols::standard_frame(symbol.dimension()));
}

WitnessCertificate certify_lower_bound(const symbols::MultiplierSymbol& symbol, double p,
                                       int depth, int budget, std::uint64_t seed,
                                       const CertifyOptions& options) {
  require(std::isfinite(p) && p > 1.0, "exponent p must be finite and > 1");
  require(symbol.dimension() >= 2, "certification needs d >= 2");
  require(budget >= 1, "search budget must be >= 1");
  const auto& flags = symbol.flags();
  if (!flags.is_real || !flags.is_even || !flags.is_homogeneous0)
    throw CertificationError(
        "certification void: symbol " + symbols::to_string(symbol.family()) +
        " is not real, even and homogeneous of order 0");

  const AxisFrame axes =
      options.frame ? axis_alignment(symbol, *options.frame) : axis_alignment(symbol);
  std::array<double, 2> deviations{};
  for (int j = 0; j < 2; ++j) {
    deviations[j] = torus::eigenfunction_check(symbol, axes.frame[j], options.kmax).max_deviation;
    if (deviations[j] != 0.0) {
      std::ostringstream message;
      message << "certification void: m is not constant along axis " << j + 1
              << " (deviation " << deviations[j] << ")";
      throw CertificationError(message.str());
    }
  }
  if (!(axes.b < axes.B))
    throw CertificationError("certification void: m takes the same value on both axes");

  auto found = martingale::search_extremal(p, axes.b, axes.B, depth, budget, seed, options.search);
  return WitnessCertificate{symbol,     p,           depth,         budget,
                            seed,       axes,        deviations,    std::move(found.f),
                            std::move(found.v), found.ratio};
}

}  // namespace sharpmult::witness
