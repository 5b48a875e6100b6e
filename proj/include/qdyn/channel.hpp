#pragma once

#include <vector>

#include "qdyn/density.hpp"
#include "qdyn/sphere.hpp"

namespace qdyn {

/// Purity gate of the inverse pure-state bridge.
inline constexpr double kPurityTolerance = 1e-8;

/// A pure qubit N (z|0> + |1>), N = (1 + |z|^2)^{-1/2}; infinity is |0>.
struct PureQubit {
  SpherePoint z;
};

/// The local unitary [[cos x, sin x e^{i phi}], [-sin x e^{-i phi}, cos x]].
Eigen::Matrix2cd rotation_matrix(double x, double phi);

/// rho_ij -> rho_ij^2 / sum_i rho_ii^2.
DensityMatrix2 squaring_map(const DensityMatrix2& rho);
DensityMatrix2 rotate(const DensityMatrix2& rho, double x, double phi);
/// One step of the conditional dynamics: rotate(squaring_map(rho)).
DensityMatrix2 step_density(const DensityMatrix2& rho, double x, double phi);

/// tan(x) e^{i phi}; throws DomainError for x = pi/2 mod pi.
MapParam p_from_angles(double x, double phi);

DensityMatrix2 to_density(const PureQubit& q);
/// Throws DomainError if |Tr rho^2 - 1| exceeds the purity gate.
PureQubit to_pure(const DensityMatrix2& rho, double purity_tolerance = kPurityTolerance);

/// Sum of squared diagonal entries, in [1/2, 1] for a valid qubit state.
double selection_probability(const DensityMatrix2& rho);

/// Per-step and cumulative probabilities of keeping the subensemble while
/// iterating step_density n times.
struct SelectionHistory {
  std::vector<double> step_probability;
  std::vector<double> cumulative;
  DensityMatrix2 final_state;
};

SelectionHistory track_selection(const DensityMatrix2& rho0, double x, double phi, int steps);

}  // namespace qdyn
