#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "sharpmult/martingale.hpp"
#include "sharpmult/symbols.hpp"

namespace sharpmult::witness {

struct AxisFrame {
  symbols::Frame frame;
  double b = 0.0;  // m(frame[0])
  double B = 0.0;  // m(frame[1])
};

/// Frame whose first axis minimizes and second axis maximizes m over the
/// frame vectors: the eigenframe for quadratic forms, a permutation of the
/// standard basis otherwise. Remaining axes keep their order.
AxisFrame axis_alignment(const symbols::MultiplierSymbol& symbol);

/// Orders a user frame the same way.
AxisFrame axis_alignment(const symbols::MultiplierSymbol& symbol, symbols::Frame frame);

struct CertifyOptions {
  int kmax = 32;  // lattice multiples checked along each axis
  std::optional<symbols::Frame> frame;
  martingale::SearchOptions search;
};

struct WitnessCertificate {
  symbols::MultiplierSymbol symbol;
  double p = 2.0;
  int depth = 0;
  int budget = 0;
  std::uint64_t seed = 0;
  AxisFrame axes;
  std::array<double, 2> eigen_deviations{};
  martingale::PaleyWalshMartingale f;
  martingale::TransformSequence v;
  double lower_bound = 0.0;  // ||g_N||_p / ||f_N||_p <= ||T_m||_p
};

/// Lower bound for ||T_m||_p from a {b, B}-valued martingale transform.
/// Throws CertificationError when the symbol is not real, even and
/// homogeneous of order 0, or when m is not constant along either axis.
WitnessCertificate certify_lower_bound(const symbols::MultiplierSymbol& symbol, double p,
                                       int depth, int budget, std::uint64_t seed,
                                       const CertifyOptions& options = {});

}  // namespace sharpmult::witness
