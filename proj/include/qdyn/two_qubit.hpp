#pragma once

#include <optional>
#include <vector>

#include "qdyn/density.hpp"

namespace qdyn {

// Product basis |00>, |01>, |10>, |11>; qubit 1 is the left tensor factor.

struct LocalAngles {
  double x = 0.0;
  double phi = 0.0;
};

DensityMatrix4 squaring4(const DensityMatrix4& rho);

/// Conjugation by U(x, phi) (x) I for qubit 1, I (x) U(x, phi) for qubit 2.
/// Throws DomainError for any other index.
DensityMatrix4 rotate_local(const DensityMatrix4& rho, int qubit, double x, double phi);

/// R_1 R_2 S rho.
DensityMatrix4 step_two_qubit(const DensityMatrix4& rho, const LocalAngles& first, const LocalAngles& second);

DensityMatrix4 tensor(const DensityMatrix2& a, const DensityMatrix2& b);
/// Reduced state of qubit 1 (trace over qubit 2) or of qubit 2.
DensityMatrix2 reduced_state(const DensityMatrix4& rho, int qubit);

struct TraceRow {
  int step;
  double purity;
  double fidelity;
  double selection_probability;  // sum of squared diagonal of the state entering the step
};

/// Iterates step_two_qubit n times. Fidelity is <psi|rho|psi> against the
/// target, which defaults to the basis state carrying the largest initial
/// population.
std::vector<TraceRow> purification_trace(const DensityMatrix4& rho0, const LocalAngles& first,
                                         const LocalAngles& second, int n,
                                         const std::optional<Eigen::Vector4cd>& target = std::nullopt);

}  // namespace qdyn
