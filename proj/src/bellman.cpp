#include "sharpmult/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sharpmult/constants.hpp"
#include "sharpmult/errors.hpp"

namespace sharpmult::bellman {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

double BellmanSurface::angle(int i) const { return kTwoPi * i / resolution(); }

double BellmanSurface::angular(double phi) const {
  const int M = resolution();
  double pos = std::fmod(phi, kTwoPi);
  if (pos < 0) pos += kTwoPi;
  pos *= M / kTwoPi;
  int i = static_cast<int>(pos);
  double frac = pos - i;
  if (i >= M) {
    i = 0;
    frac = 0.0;
  }
  const int j = i + 1 == M ? 0 : i + 1;
  return u[i] + frac * (u[j] - u[i]);
}

double BellmanSurface::operator()(double x, double y) const {
  const double r2 = x * x + y * y;
  if (r2 == 0.0) return 0.0;
  return std::exp(0.5 * p * std::log(r2)) * angular(std::atan2(y, x));
}

double initial_V(double p, double C, double phi) {
  require(std::isfinite(p) && p > 1.0, "exponent p must be finite and > 1");
  require(std::isfinite(C) && C >= 0.0, "C must be finite and >= 0");
  return std::pow(std::abs(std::sin(phi)), p) - std::pow(C, p) * std::pow(std::abs(std::cos(phi)), p);
}

BellmanSurface initial_surface(double p, double b, double B, double C, int resolution) {
  constants::ConstantQuery{p, b, B}.validate();
  require(resolution >= 8, "angular resolution must be >= 8");
  BellmanSurface s{p, b, B, C, std::vector<double>(resolution)};
  for (int i = 0; i < resolution; ++i) s.u[i] = initial_V(p, C, s.angle(i));
  return s;
}

namespace {

/// Chord endpoints of every node for one h, reduced to interpolation
/// weights: U(P +- hD) = r^p [(1 - frac) u_i + frac u_{i+1}].
struct Stencil {
  struct Point {
    int lower;
    int upper;
    double w_lower;  // r^p (1 - frac)
    double w_upper;  // r^p frac
  };
  double h = 0.0;
  std::vector<Point> points;  // node-major: [node][slope][sign]
};

Stencil make_stencil(const BellmanSurface& surface, double h) {
  const int M = surface.resolution();
  const double slopes[2] = {surface.b, surface.B};
  Stencil stencil;
  stencil.h = h;
  stencil.points.reserve(static_cast<std::size_t>(M) * 4);
  for (int i = 0; i < M; ++i) {
    const double a = surface.angle(i);
    for (double s : slopes) {
      for (double sign : {1.0, -1.0}) {
        const double x = std::cos(a) + sign * h;
        const double y = std::sin(a) + sign * h * s;
        const double r2 = x * x + y * y;
        if (r2 == 0.0) {
          stencil.points.push_back({0, 0, 0.0, 0.0});
          continue;
        }
        const double rp = std::exp(0.5 * surface.p * std::log(r2));
        double pos = std::atan2(y, x);
        if (pos < 0) pos += kTwoPi;
        pos *= M / kTwoPi;
        int lower = static_cast<int>(pos);
        double frac = pos - lower;
        if (lower >= M) {
          lower = 0;
          frac = 0.0;
        }
        const int upper = lower + 1 == M ? 0 : lower + 1;
        stencil.points.push_back({lower, upper, rp * (1.0 - frac), rp * frac});
      }
    }
  }
  return stencil;
}

double apply_stencil(const Stencil& stencil, const std::vector<double>& u,
                     std::vector<double>& out) {
  const std::size_t M = u.size();
  double delta = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const auto* pt = &stencil.points[4 * i];
    auto at = [&](const Stencil::Point& q) { return q.w_lower * u[q.lower] + q.w_upper * u[q.upper]; };
    const double first = 0.5 * (at(pt[0]) + at(pt[1]));
    const double second = 0.5 * (at(pt[2]) + at(pt[3]));
    const double best = std::max({u[i], first, second});
    delta = std::max(delta, best - u[i]);
    out[i] = best;
  }
  return delta;
}

}  // namespace

StepResult concavify_step(const BellmanSurface& surface, double h) {
  require(h > 0.0 && std::isfinite(h), "step h must be positive");
  StepResult out{surface, 0.0};
  out.delta = apply_stencil(make_stencil(surface, h), surface.u, out.surface.u);
  return out;
}

EnvelopeResult envelope(double p, double b, double B, double C, double tol, int max_iters,
                        const EnvelopeOptions& options) {
  require(tol > 0.0, "envelope tolerance must be positive");
  require(max_iters >= 1, "max_iters must be >= 1");
  require(!options.schedule.empty(), "step schedule must be nonempty");
  EnvelopeResult result;
  result.surface = initial_surface(p, b, B, C, options.resolution);
  const double cap = options.cap_factor * (1.0 + std::pow(C, p));
  const std::size_t cycle = options.schedule.size();

  std::vector<Stencil> stencils;
  for (double h : options.schedule) {
    require(h > 0.0 && std::isfinite(h), "step h must be positive");
    stencils.push_back(make_stencil(result.surface, h));
  }
  std::vector<double> next(result.surface.u.size());

  double cycle_delta = 0.0;
  while (result.iterations < max_iters) {
    const auto& stencil = stencils[result.iterations % cycle];
    const double delta = apply_stencil(stencil, result.surface.u, next);
    result.surface.u.swap(next);
    ++result.iterations;
    cycle_delta = std::max(cycle_delta, delta);

    const double top = *std::max_element(result.surface.u.begin(), result.surface.u.end());
    if (!(top < cap)) {
      for (auto& v : result.surface.u) v = std::min(v, cap);
      result.diverged = true;
      result.final_delta = cycle_delta;
      return result;
    }
    if (result.iterations % cycle == 0) {
      result.final_delta = cycle_delta;
      if (cycle_delta < tol) {
        result.converged = true;
        return result;
      }
      cycle_delta = 0.0;
    }
  }
  result.final_delta = std::max(result.final_delta, cycle_delta);
  return result;
}

double feasibility_tolerance(double C, double p) { return 1e-7 * (1.0 + std::pow(C, p)); }

bool feasible(const BellmanSurface& surface, int cone_samples) {
  require(cone_samples >= 2, "cone_samples must be >= 2");
  const double tol = feasibility_tolerance(surface.C, surface.p);
  for (int j = 0; j < cone_samples; ++j) {
    const double w = surface.b + (surface.B - surface.b) * j / (cone_samples - 1);
    if (surface.angular(std::atan2(w, 1.0)) > tol) return false;
    if (surface.angular(std::atan2(-w, -1.0)) > tol) return false;
  }
  return true;
}

bool feasible(const EnvelopeResult& result, int cone_samples) {
  if (result.diverged || !result.converged) return false;
  return feasible(result.surface, cone_samples);
}

Estimate estimate_C(double p, double b, double B, double tol_C, const EstimateOptions& options) {
  constants::ConstantQuery{p, b, B}.validate();
  require(tol_C > 0.0, "tol_C must be positive");
  const auto bounds = constants::cpbB_bounds(p, b, B);
  Estimate estimate;
  double lo = bounds.lo;
  double hi = bounds.hi;
  if (hi - lo < tol_C) {
    estimate.C = 0.5 * (lo + hi);
    return estimate;
  }

  auto probe = [&](double C) {
    const auto run = envelope(p, b, B, C, options.envelope_tol, options.max_iters, options.envelope);
    const bool ok = feasible(run, options.cone_samples);
    estimate.history.push_back({lo, hi, C, ok, run.iterations});
    return ok;
  };

  if (!probe(hi))
    throw SolverError("upper end of the bracket is infeasible at C = " + std::to_string(hi));
  if (probe(lo)) {
    // The lower bound is attained.
    estimate.C = lo;
    return estimate;
  }
  while (hi - lo >= tol_C) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid))
      hi = mid;
    else
      lo = mid;
    estimate.history.back().lo = lo;
    estimate.history.back().hi = hi;
  }
  // Feasibility must be monotone in C across every probe.
  for (const auto& a : estimate.history)
    for (const auto& c : estimate.history)
      if (a.feasible && !c.feasible && a.C < c.C)
        throw SolverError("feasibility is not monotone in C");
  estimate.C = 0.5 * (lo + hi);
  return estimate;
}

}  // namespace sharpmult::bellman
