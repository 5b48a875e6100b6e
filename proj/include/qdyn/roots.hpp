#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qdyn {

/// All roots of sum_k coeffs[k] z^k by Aberth-Ehrlich simultaneous
/// iteration. The leading coefficient must be nonzero. A root is accepted
/// once its residual is within a small multiple of the rounding-error bound
/// of Horner evaluation; throws NumericalError if that does not happen for
/// every root within max_iter sweeps.
std::vector<std::complex<double>> polynomial_roots(std::span<const std::complex<double>> coeffs,
                                                   int max_iter = 500);

}  // namespace qdyn
