#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qdyn/sphere.hpp"

namespace qdyn {

/// Defaults for orbit analysis.
inline constexpr int kDefaultMaxPeriod = 64;
inline constexpr int kDefaultCriticalIterations = 10000;
inline constexpr int kDefaultMaxPeriodicOrder = 4;
/// |lambda| at or below this counts as exactly zero (superattracting).
inline constexpr double kSuperattractingTolerance = 1e-10;
/// ||lambda| - 1| within this counts as neutral.
inline constexpr double kNeutralTolerance = 1e-8;
/// Parabolic test: lambda^k = 1 within kNeutralTolerance for some k <= this.
inline constexpr int kParabolicOrderCap = 64;
/// Chordal tolerance for "these points form a cycle" checks.
inline constexpr double kCycleCheckTolerance = 1e-6;
/// Periodic points closer than this (chordal) are merged.
inline constexpr double kRootMergeTolerance = 1e-7;

/// z, F(z), F(F(z)), ...
struct Orbit {
  MapParam param;
  std::vector<SpherePoint> points;

  const SpherePoint& start() const { return points.front(); }
};

enum class Stability { superattracting, attracting, repelling, parabolic, neutral_irrational };

std::string_view to_string(Stability s);
constexpr bool is_attracting(Stability s) {
  return s == Stability::superattracting || s == Stability::attracting;
}
constexpr bool is_neutral(Stability s) {
  return s == Stability::parabolic || s == Stability::neutral_irrational;
}

struct Cycle {
  int period = 0;
  std::vector<SpherePoint> points;  // in orbit order
  cplx multiplier{};
  Stability stability = Stability::repelling;
};

/// Orbit of length n + 1 starting at z0.
Orbit iterate_orbit(const MapParam& param, const SpherePoint& z0, int n);

/// Smallest q <= max_period such that the chordal distance between z_k and
/// z_{k+q} stays below eps over the last two periods of the sequence.
std::optional<int> detect_period(std::span<const SpherePoint> points, double eps = kPointTolerance,
                                 int max_period = kDefaultMaxPeriod);

/// Detects a cycle in the orbit tail, Newton-polishes its points and
/// classifies it. Requires points.size() > 2 * max_period.
std::optional<Cycle> detect_cycle(const Orbit& orbit, double eps = kPointTolerance,
                                  int max_period = kDefaultMaxPeriod);

/// Newton's method on F^period(z) = z in the chart of z. Returns the
/// refined point, or z itself if the iteration does not reduce the residual.
SpherePoint polish_periodic_point(const MapParam& param, const SpherePoint& z, int period);

Stability classify_multiplier(cplx multiplier);

struct MultiplierResult {
  cplx multiplier;
  Stability stability;
};

/// Product of chart derivatives along the cycle. Throws DomainError if
/// F does not map each point to the next (cyclically) within tolerance.
MultiplierResult cycle_multiplier(const MapParam& param, std::span<const SpherePoint> points,
                                  double tolerance = kCycleCheckTolerance);

/// All solutions of F^n(z) = z on the sphere, i.e. the roots of the
/// degree 2^n + 1 fixed-point polynomial, deduplicated. Cost grows like
/// 4^n; n is capped by max_order. Throws NumericalError if the root
/// finder or the verification fails.
std::vector<SpherePoint> find_periodic_points(const MapParam& param, int n,
                                              int max_order = kDefaultMaxPeriodicOrder);

/// find_periodic_points grouped into cycles (every period dividing n),
/// each with its multiplier.
std::vector<Cycle> find_cycles(const MapParam& param, int n, int max_order = kDefaultMaxPeriodicOrder);

/// Two cycles are the same if they have equal period and matching point sets.
bool same_cycle(const Cycle& a, const Cycle& b, double tolerance = kRootMergeTolerance);

struct CriticalOrbitOptions {
  int max_iter = kDefaultCriticalIterations;
  double eps = kPointTolerance;
  int max_period = kDefaultMaxPeriod;
};

struct CriticalOrbit {
  SpherePoint start;
  std::optional<Cycle> landing;   // empty: no convergence within max_iter
  std::optional<int> transient;   // first step within eps of the landing cycle
};

/// Fate of the two critical points 0 and infinity. `hyperbolic` is empty
/// when a critical orbit did not converge (numerical verdict withheld).
struct CriticalReport {
  MapParam param;
  std::array<CriticalOrbit, 2> orbits;
  std::vector<Cycle> cycles;  // distinct landing cycles
  std::optional<bool> hyperbolic;

  int attracting_or_neutral_count() const;
};

CriticalReport critical_orbits(const MapParam& param, const CriticalOrbitOptions& options = {});

}  // namespace qdyn
