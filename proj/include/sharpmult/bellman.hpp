#pragma once

#include <vector>

namespace sharpmult::bellman {

/// p-homogeneous candidate value function, stored on the unit circle at
/// phi_i = 2 pi i / M and extended by U(r cos phi, r sin phi) = r^p u(phi).
struct BellmanSurface {
  double p = 2.0;
  double b = -1.0;
  double B = 1.0;
  double C = 1.0;
  std::vector<double> u;

  [[nodiscard]] int resolution() const { return static_cast<int>(u.size()); }
  [[nodiscard]] double angle(int i) const;
  /// Piecewise-linear interpolation of u at angle phi.
  [[nodiscard]] double angular(double phi) const;
  /// U(x, y) through homogeneity.
  [[nodiscard]] double operator()(double x, double y) const;
};

/// |sin phi|^p - C^p |cos phi|^p.
double initial_V(double p, double C, double phi);

/// The payoff V sampled on M angles.
BellmanSurface initial_surface(double p, double b, double B, double C, int resolution = 4096);

struct StepResult {
  BellmanSurface surface;
  double delta = 0.0;  // max pointwise increase
};

/// One Jacobi sweep of midpoint concavification along slopes b and B with
/// chord half-length h.
StepResult concavify_step(const BellmanSurface& surface, double h);

struct EnvelopeOptions {
  int resolution = 4096;
  std::vector<double> schedule{1.0, 0.25, 1.0 / 16, 1.0 / 64};
  /// Values above cap_factor * (1 + C^p) count as divergence.
  double cap_factor = 1e6;
};

struct EnvelopeResult {
  BellmanSurface surface;
  double final_delta = 0.0;  // largest increase over the last full cycle
  int iterations = 0;        // concavify steps performed
  bool converged = false;
  bool diverged = false;     // cap reached
};

/// Iterates concavify_step cycling through the schedule until a full cycle
/// raises no value by more than tol, the cap is hit, or
/// max_iters steps have run.
EnvelopeResult envelope(double p, double b, double B, double C, double tol, int max_iters,
                        const EnvelopeOptions& options = {});

/// 1e-7 (1 + C^p).
double feasibility_tolerance(double C, double p);

/// True when u <= feasibility_tolerance on both branches of the cone
/// {(x, w x) : w in [b, B]}, sampled at cone_samples slopes.
bool feasible(const BellmanSurface& surface, int cone_samples = 257);

/// Feasibility of an envelope run; divergence or non-convergence is infeasible.
bool feasible(const EnvelopeResult& result, int cone_samples = 257);

/// One feasibility probe; lo and hi are the bracket after the probe.
struct BracketStep {
  double lo;
  double hi;
  double C;
  bool feasible;
  int iterations;
};

struct EstimateOptions {
  double envelope_tol = 1e-9;
  int max_iters = 400000;
  int cone_samples = 257;
  EnvelopeOptions envelope;
};

struct Estimate {
  double C = 0.0;
  std::vector<BracketStep> history;
};

/// Least C whose envelope is nonpositive on the cone, by bisection on the
/// bracket from cpbB_bounds until its width is below tol_C.
Estimate estimate_C(double p, double b, double B, double tol_C,
                    const EstimateOptions& options = {});

}  // namespace sharpmult::bellman
