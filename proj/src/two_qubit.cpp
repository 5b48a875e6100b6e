#include "qdyn/two_qubit.hpp"

#include "qdyn/channel.hpp"

namespace qdyn {

namespace {

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

}  // namespace

DensityMatrix4 squaring4(const DensityMatrix4& rho) { return rho.squared(); }

DensityMatrix4 rotate_local(const DensityMatrix4& rho, int qubit, double x, double phi) {
  const Eigen::Matrix2cd u = rotation_matrix(x, phi);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  if (qubit == 1) return rho.conjugated(kron(u, id));
  if (qubit == 2) return rho.conjugated(kron(id, u));
  throw DomainError("rotate_local: qubit index must be 1 or 2");
}

DensityMatrix4 step_two_qubit(const DensityMatrix4& rho, const LocalAngles& first, const LocalAngles& second) {
  const DensityMatrix4 s = squaring4(rho);
  return rotate_local(rotate_local(s, 2, second.x, second.phi), 1, first.x, first.phi);
}

DensityMatrix4 tensor(const DensityMatrix2& a, const DensityMatrix2& b) {
  return DensityMatrix4::unchecked(kron(a.matrix(), b.matrix()));
}

DensityMatrix2 reduced_state(const DensityMatrix4& rho, int qubit) {
  const auto& m = rho.matrix();
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  if (qubit == 1) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  } else if (qubit == 2) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = m(i, j) + m(i + 2, j + 2);
  } else {
    throw DomainError("reduced_state: qubit index must be 1 or 2");
  }
  return DensityMatrix2::unchecked(r);
}

std::vector<TraceRow> purification_trace(const DensityMatrix4& rho0, const LocalAngles& first,
                                         const LocalAngles& second, int n,
                                         const std::optional<Eigen::Vector4cd>& target) {
  if (n < 1) throw DomainError("purification_trace: n must be at least 1");
  Eigen::Vector4cd psi;
  if (target) {
    if (!(target->squaredNorm() > 0.0)) throw DomainError("purification_trace: target must be nonzero");
    psi = target->normalized();
  } else {
    Eigen::Index k = 0;
    rho0.matrix().diagonal().real().maxCoeff(&k);
    psi = Eigen::Vector4cd::Unit(k);
  }

  std::vector<TraceRow> rows;
  rows.reserve(static_cast<std::size_t>(n));
  DensityMatrix4 rho = rho0;
  for (int step = 1; step <= n; ++step) {
    const double selection = rho.selection_probability();
    rho = step_two_qubit(rho, first, second);
    const double fidelity = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
    rows.push_back({step, rho.purity(), fidelity, selection});
  }
  return rows;
}

}  // namespace qdyn
