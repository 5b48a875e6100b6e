#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qdyn/error.hpp"

namespace qdyn {

/// Tolerances of the density-matrix invariants.
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix of dimension Dim in a
/// fixed computational basis. The checked constructor enforces the
/// invariants; unchecked() is for values produced by trusted kernels.
template <int Dim>
class DensityMatrix {
 public:
  using Matrix = Eigen::Matrix<std::complex<double>, Dim, Dim>;

  DensityMatrix() : m_(Matrix::Identity() / double(Dim)) {}

  explicit DensityMatrix(const Matrix& m) : m_(m) {
    if (!m_.allFinite()) throw DomainError("density matrix has non-finite entries");
    if (hermiticity_error() > kHermitianTolerance) throw DomainError("density matrix is not Hermitian");
    if (std::abs(m_.trace() - 1.0) > kTraceTolerance) throw DomainError("density matrix trace is not 1");
    if (min_eigenvalue() < -kPositivityTolerance) throw DomainError("density matrix is not positive semidefinite");
  }

  static DensityMatrix unchecked(const Matrix& m) {
    DensityMatrix d;
    d.m_ = m;
    return d;
  }

  static DensityMatrix maximally_mixed() { return DensityMatrix(); }

  /// Rank-one projector onto a (not necessarily normalized) state vector.
  static DensityMatrix pure(const Eigen::Matrix<std::complex<double>, Dim, 1>& psi) {
    const double n = psi.squaredNorm();
    if (!(n > 0.0)) throw DomainError("pure state vector must be nonzero");
    return unchecked(psi * psi.adjoint() / n);
  }

  const Matrix& matrix() const { return m_; }
  std::complex<double> operator()(int i, int j) const { return m_(i, j); }

  double hermiticity_error() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }
  double trace_error() const { return std::abs(m_.trace() - 1.0); }
  double min_eigenvalue() const {
    const Matrix h = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }
  /// Tr rho^2.
  double purity() const { return (m_ * m_).trace().real(); }

  /// Sum of squared diagonal entries: the probability that one squaring
  /// step keeps the state, and the inverse of its renormalization factor.
  double selection_probability() const {
    double s = 0.0;
    for (int i = 0; i < Dim; ++i) s += m_(i, i).real() * m_(i, i).real();
    return s;
  }

  /// Entrywise square of the complex entries (not their moduli),
  /// renormalized to unit trace.
  DensityMatrix squared() const {
    const double norm = selection_probability();
    return unchecked(m_.array().square().matrix() / norm);
  }

  /// U rho U^dagger, re-symmetrized. Only the traceless part is rotated, so
  /// the identity component (and with it the maximally mixed state) is kept exactly.
  DensityMatrix conjugated(const Matrix& u) const {
    const std::complex<double> mean = m_.trace() / static_cast<double>(Dim);
    const Matrix traceless = m_ - mean * Matrix::Identity();
    Matrix r = u * traceless * u.adjoint();
    r = 0.5 * (r + r.adjoint());
    r.diagonal().array() += mean.real();
    return unchecked(r);
  }

 private:
  Matrix m_;
};

using DensityMatrix2 = DensityMatrix<2>;
using DensityMatrix4 = DensityMatrix<4>;

}  // namespace qdyn
