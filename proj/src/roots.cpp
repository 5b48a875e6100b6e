#include "qdyn/roots.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qdyn/error.hpp"

namespace qdyn {

namespace {

using cplx = std::complex<double>;

struct Evaluation {
  cplx value;
  cplx derivative;
  double bound;  // sum |c_k| |z|^k, scales the rounding error of value
};

Evaluation horner(std::span<const cplx> c, cplx z) {
  const double r = std::abs(z);
  cplx v = c.back();
  cplx d = 0.0;
  double b = std::abs(c.back());
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    d = d * z + v;
    v = v * z + c[k];
    b = b * r + std::abs(c[k]);
  }
  return {v, d, b};
}

}  // namespace

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, int max_iter) {
  if (coeffs.size() < 2) return {};
  const cplx lead = coeffs.back();
  if (lead == cplx{}) throw NumericalError("polynomial_roots: leading coefficient is zero");

  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  for (auto& x : c) x /= lead;
  const int degree = static_cast<int>(c.size()) - 1;

  // Start on a circle whose radius is the geometric mean of the root moduli.
  double radius = std::pow(std::abs(c.front()), 1.0 / degree);
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
  std::vector<cplx> z(degree);
  for (int k = 0; k < degree; ++k) {
    z[k] = std::polar(radius, 2.0 * std::numbers::pi * k / degree + 0.4);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(degree, false);
  int remaining = degree;
  for (int iter = 0; iter < max_iter && remaining > 0; ++iter) {
    for (int k = 0; k < degree; ++k) {
      if (done[k]) continue;
      const Evaluation e = horner(c, z[k]);
      if (std::abs(e.value) <= 8.0 * degree * eps * e.bound) {
        done[k] = true;
        --remaining;
        continue;
      }
      cplx repulsion = 0.0;
      for (int j = 0; j < degree; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      if (e.derivative == cplx{}) {
        z[k] += std::polar(radius * 1e-3, 1.0 + k);
        continue;
      }
      const cplx ratio = e.value / e.derivative;
      const cplx step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      if (std::abs(step) <= 4.0 * eps * std::abs(z[k])) {
        done[k] = true;
        --remaining;
      }
    }
  }
  if (remaining > 0) {
    throw NumericalError("polynomial_roots: no convergence after " + std::to_string(max_iter) +
                         " sweeps (degree " + std::to_string(degree) + ")");
  }
  return z;
}

}  // namespace qdyn
