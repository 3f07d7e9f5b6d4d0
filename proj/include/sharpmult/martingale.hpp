#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sharpmult::martingale {

/// Largest depth for exhaustive path enumeration (2^24 sign paths).
inline constexpr int kMaxDepth = 24;

/// Finite Paley-Walsh martingale f_n = f_0 + sum_{k<=n} eps_k d_k(eps_1..eps_{k-1}).
///
/// Level n (1-based) stores 2^{n-1} coefficients indexed by the sign history:
/// the history (eps_1, ..., eps_{n-1}) maps to the integer whose binary digits,
/// most significant first, are 1 where eps_k = -1. With this indexing a
/// history index coincides with the position of a dyadic interval.
class PaleyWalshMartingale {
 public:
  PaleyWalshMartingale() = default;
  explicit PaleyWalshMartingale(std::vector<std::vector<double>> levels, double initial = 0.0);

  static PaleyWalshMartingale zeros(int depth);

  [[nodiscard]] int depth() const { return static_cast<int>(levels_.size()); }
  [[nodiscard]] double initial() const { return initial_; }
  [[nodiscard]] std::span<const double> level(int n) const { return levels_.at(n - 1); }
  [[nodiscard]] std::span<double> level(int n) { return levels_.at(n - 1); }
  [[nodiscard]] const std::vector<std::vector<double>>& levels() const { return levels_; }

  /// f_n on every sign path of length n; entry i is the path whose history
  /// index is i.
  [[nodiscard]] std::vector<double> values(int n) const;

 private:
  std::vector<std::vector<double>> levels_;
  double initial_ = 0.0;
};

/// Predictable multipliers v_n(eps_1..eps_{n-1}), stored like martingale
/// levels. Deterministic sequences have every level constant.
class TransformSequence {
 public:
  TransformSequence() = default;

  /// alpha_n applied at step n; the initial multiplier defaults to alpha_1.
  static TransformSequence deterministic(std::vector<double> alpha,
                                         std::optional<double> initial = std::nullopt);
  static TransformSequence predictable(std::vector<std::vector<double>> levels,
                                       std::optional<double> initial = std::nullopt);

  [[nodiscard]] int depth() const { return static_cast<int>(levels_.size()); }
  [[nodiscard]] bool is_deterministic() const { return deterministic_; }
  [[nodiscard]] std::optional<double> initial() const { return initial_; }
  [[nodiscard]] double at(int n, std::size_t history) const {
    return deterministic_ ? levels_[n - 1][0] : levels_[n - 1][history];
  }
  /// Deterministic alpha (throws when predictable).
  [[nodiscard]] std::vector<double> alpha() const;

  /// Throws ValidationError when some value leaves [b, B].
  void validate_range(double b, double B) const;

 private:
  std::vector<std::vector<double>> levels_;
  std::optional<double> initial_;
  bool deterministic_ = true;
};

/// g with dg_n = v_n df_n.
PaleyWalshMartingale transform(const PaleyWalshMartingale& f, const TransformSequence& v);

/// Pointwise product of two transforms.
TransformSequence compose(const TransformSequence& v, const TransformSequence& w);

/// (E |f_n|^p)^{1/p} for n = 0..N by exhaustive enumeration.
std::vector<double> lp_norm_profile(const PaleyWalshMartingale& f, double p);

/// sup_n ||f_n||_p, computed over every n.
double lp_norm(const PaleyWalshMartingale& f, double p);

/// ||g_N||_p / ||f_N||_p with g = transform(f, v).
double ratio(const PaleyWalshMartingale& f, const TransformSequence& v, double p);

/// Finite Haar expansion sum a_k h_k with transform multipliers eps_k.
/// h_0 = 1 on [0,1); for k >= 1 with k = 2^j + i, h_k is +1 on the left half
/// and -1 on the right half of [i 2^-j, (i+1) 2^-j).
struct HaarExpansion {
  std::vector<double> coefficients;
  std::vector<double> multipliers;

  /// Smallest L such that every h_k is constant on dyadic intervals of length 2^-L.
  [[nodiscard]] int resolution_level() const;
};

/// Evaluates sum c_k h_k at the midpoints of the 2^L dyadic intervals.
std::vector<double> haar_evaluate(std::span<const double> coefficients, int level);

struct HaarSides {
  double transformed = 0.0;  // || sum eps_k a_k h_k ||_p
  double original = 0.0;     // || sum a_k h_k ||_p
};

HaarSides haar_sides(const HaarExpansion& expansion, double p);

/// The dyadic martingale and predictable transform carried by a Haar expansion.
std::pair<PaleyWalshMartingale, TransformSequence> haar_to_martingale(
    const HaarExpansion& expansion);

// ---------------------------------------------------------------------------
// Finite-depth optimum

struct DpOptions {
  int scan_points = 128;          // coarse scan over the split length
  double root_tolerance = 1e-10;  // absolute tolerance on the ratio
  bool check_resolution = true;   // rerun at twice the resolution
  double resolution_tolerance = 1e-3;
};

struct DpResult {
  double ratio = 0.0;
  std::vector<double> best_alpha;        // maximizing deterministic sequence
  std::optional<double> refined_ratio;   // at 2x resolution when checked
  bool resolution_too_coarse = false;
};

/// Exact supremum of ||g_N||_p / ||f_N||_p over depth-N Paley-Walsh martingales
/// and deterministic {b, B}-valued transforms, by backward induction on the
/// p-homogeneous value function |y|^p - C^p |x|^p restricted to the circle,
/// followed by a root search in C.
DpResult dp_optimal_ratio(double p, double b, double B, int depth, int angular_resolution = 4096,
                          const DpOptions& options = {});

/// sup over depth-N pairs of E V(f_N, g_N) starting from the origin, divided
/// by t^p, maximized over the 2^N deterministic sequences. Nonpositive iff
/// C bounds the depth-N ratio. Exposed for testing.
double dp_origin_value(double p, double b, double B, int depth, double C,
                       int angular_resolution = 4096, const DpOptions& options = {});

// ---------------------------------------------------------------------------
// Adversarial search

struct SearchOptions {
  double coefficient_bound = 10.0;
  double improvement_tolerance = 1e-8;
  int max_sweeps = 200;
  int scan_points = 41;
  /// Optional starting pair, embedded into the first restart (shallower
  /// martingales are padded with zero levels).
  std::optional<std::pair<PaleyWalshMartingale, TransformSequence>> warm_start;
};

struct SearchTraceRow {
  int restart;
  int sweep;
  double ratio;
};

struct SearchResult {
  PaleyWalshMartingale f;
  TransformSequence v;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::vector<SearchTraceRow> trace;
};

/// Coordinate ascent over the coefficient arrays and the {b, B} choice at
/// each step, with `budget` random restarts. Restart r draws from a stream
/// determined by (seed, r) only, so a larger budget never does worse.
SearchResult search_extremal(double p, double b, double B, int depth, int budget,
                             std::uint64_t seed, const SearchOptions& options = {});

}  // namespace sharpmult::martingale
