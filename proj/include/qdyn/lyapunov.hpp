#pragma once

#include "qdyn/sphere.hpp"

namespace qdyn {

/// Overlap distance above which two trajectories count as separated.
inline constexpr double kSaturationOverlap = 0.01;
/// Minimum number of steps in the overlap fit window.
inline constexpr int kMinimumWindowSteps = 5;
/// Fraction of excluded (critical) steps tolerated by the derivative estimator.
inline constexpr double kMaxExcludedFraction = 0.01;

/// A Lyapunov exponent in nats per iteration. Not to be confused with a
/// cycle multiplier, which lives in Cycle.
struct LyapunovEstimate {
  enum class Method { overlap, derivative };

  double value = 0.0;
  Method method = Method::derivative;
  int steps = 0;           // steps that entered the estimate
  int excluded_steps = 0;  // derivative method: exact critical hits
  bool saturated = false;  // overlap method: separation reached kSaturationOverlap before n_max
  bool reliable = true;
};

/// Mean of ln spherical_derivative over z_0 .. z_{n-1}. Steps where the
/// derivative is exactly zero are skipped and counted; the estimate is
/// flagged unreliable when more than 1% of the steps are skipped.
LyapunovEstimate lyapunov_derivative(const MapParam& param, const SpherePoint& z0, int n);

/// Evolves two nearby states and fits the slope of ln Delta(n) over the
/// steps before Delta reaches kSaturationOverlap (or collapses to 0).
/// Throws DomainError if the initial overlap distance is zero or already
/// saturated.
LyapunovEstimate lyapunov_overlap(const MapParam& param, const SpherePoint& z0, const SpherePoint& z1,
                                  int n_max);

}  // namespace qdyn
