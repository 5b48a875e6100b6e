#include "qdyn/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "qdyn/error.hpp"

namespace qdyn {

LyapunovEstimate lyapunov_derivative(const MapParam& param, const SpherePoint& z0, int n) {
  if (n < 1) throw DomainError("lyapunov_derivative: n must be at least 1");
  LyapunovEstimate est;
  est.method = LyapunovEstimate::Method::derivative;
  double sum = 0.0;
  SpherePoint z = z0;
  for (int k = 0; k < n; ++k) {
    const double d = spherical_derivative(param, z);
    if (d > 0.0) {
      sum += std::log(d);
      ++est.steps;
    } else {
      ++est.excluded_steps;
    }
    z = apply_map(param, z);
  }
  est.value = est.steps > 0 ? sum / est.steps : -std::numeric_limits<double>::infinity();
  est.reliable = est.excluded_steps <= kMaxExcludedFraction * n;
  return est;
}

LyapunovEstimate lyapunov_overlap(const MapParam& param, const SpherePoint& z0, const SpherePoint& z1,
                                  int n_max) {
  if (n_max < 1) throw DomainError("lyapunov_overlap: n_max must be at least 1");
  const double delta0 = overlap_distance(z0, z1);
  if (delta0 == 0.0) throw DomainError("lyapunov_overlap: initial states coincide");
  if (delta0 >= kSaturationOverlap) throw DomainError("lyapunov_overlap: initial separation is not small");

  std::vector<double> log_delta{std::log(delta0)};
  SpherePoint a = z0;
  SpherePoint b = z1;
  LyapunovEstimate est;
  est.method = LyapunovEstimate::Method::overlap;
  for (int k = 1; k <= n_max; ++k) {
    a = apply_map(param, a);
    b = apply_map(param, b);
    const double delta = overlap_distance(a, b);
    if (delta >= kSaturationOverlap) {
      est.saturated = true;
      break;
    }
    if (delta == 0.0) break;
    log_delta.push_back(std::log(delta));
  }

  // Least-squares slope of ln Delta against the step index.
  const auto m = static_cast<double>(log_delta.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < log_delta.size(); ++k) {
    const double x = static_cast<double>(k);
    sx += x;
    sy += log_delta[k];
    sxx += x * x;
    sxy += x * log_delta[k];
  }
  est.steps = static_cast<int>(log_delta.size()) - 1;
  const double denom = m * sxx - sx * sx;
  est.value = denom > 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  est.reliable = est.steps >= kMinimumWindowSteps;
  return est;
}

}  // namespace qdyn
