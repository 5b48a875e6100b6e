#include "qdyn/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdyn/error.hpp"

namespace qdyn {

namespace {

bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Numerator and denominator of F_p written in the chart that contains z.
struct Fraction {
  cplx num;
  cplx den;
};

Fraction map_fraction(const MapParam& param, const SpherePoint& z) {
  const cplx p = param.value();
  const cplx pc = std::conj(p);
  if (chart_of(z) == Chart::origin) {
    const cplx u2 = z.value() * z.value();
    return {u2 + p, 1.0 - pc * u2};
  }
  const cplx u = chart_coordinate(z, Chart::infinity);
  const cplx u2 = u * u;
  return {1.0 + p * u2, u2 - pc};
}

}  // namespace

SpherePoint SpherePoint::finite(cplx z) {
  if (std::isnan(z.real()) || std::isnan(z.imag())) {
    throw DomainError("SpherePoint: NaN coordinate");
  }
  if (!is_finite(z) || std::abs(z) > kOverflowMagnitude) return infinity();
  return SpherePoint(z, false);
}

cplx SpherePoint::value() const {
  if (infinite_) throw DomainError("SpherePoint::value() called on the point at infinity");
  return z_;
}

double SpherePoint::magnitude() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : std::abs(z_);
}

SpherePoint SpherePoint::conj() const {
  return infinite_ ? infinity() : SpherePoint(std::conj(z_), false);
}

MapParam::MapParam(cplx p) : p_(p) {
  if (!is_finite(p)) throw DomainError("MapParam: p must be finite");
}

MapParam MapParam::from_angles(double x, double phi) {
  const double c = std::cos(x);
  if (std::abs(c) < 1e-12) {
    throw DomainError("MapParam: rotation angle x = pi/2 mod pi has no finite p");
  }
  return MapParam(std::tan(x) * std::polar(1.0, phi));
}

Chart chart_of(const SpherePoint& z) {
  return (!z.is_infinity() && std::abs(z.value()) <= 1.0) ? Chart::origin : Chart::infinity;
}

cplx chart_coordinate(const SpherePoint& z, Chart chart) {
  if (chart == Chart::origin) return z.value();
  if (z.is_infinity()) return {};
  const cplx v = z.value();
  if (v == cplx{}) throw DomainError("chart_coordinate: 0 is outside the infinity chart");
  return 1.0 / v;
}

SpherePoint from_chart(Chart chart, cplx u) {
  if (chart == Chart::origin) return SpherePoint::finite(u);
  if (u == cplx{}) return SpherePoint::infinity();
  return SpherePoint::finite(1.0 / u);
}

SpherePoint apply_map(const MapParam& param, const SpherePoint& z) {
  const auto [num, den] = map_fraction(param, z);
  // |num|^2 + |den|^2 = (1 + |p|^2)(1 + |u|^4) >= 1, so both never vanish.
  if (std::abs(num) <= std::abs(den)) return SpherePoint::finite(num / den);
  if (den == cplx{}) return SpherePoint::infinity();
  if (std::abs(den) * kOverflowMagnitude < std::abs(num)) return SpherePoint::infinity();
  return SpherePoint::finite(num / den);
}

cplx chart_derivative(const MapParam& param, const SpherePoint& z, Chart target) {
  const cplx p = param.value();
  const cplx pc = std::conj(p);
  const double scale = 2.0 * (1.0 + std::norm(p));
  const Chart source = chart_of(z);
  const cplx u = chart_coordinate(z, source);
  const cplx u2 = u * u;
  if (source == Chart::origin) {
    if (target == Chart::origin) {
      const cplx d = 1.0 - pc * u2;
      return scale * u / (d * d);
    }
    const cplx d = u2 + p;
    return -scale * u / (d * d);
  }
  if (target == Chart::origin) {
    const cplx d = u2 - pc;
    return -scale * u / (d * d);
  }
  const cplx d = 1.0 + p * u2;
  return scale * u / (d * d);
}

double overlap_distance(const SpherePoint& a, const SpherePoint& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity()) return 1.0 / (1.0 + std::norm(b.value()));
  if (b.is_infinity()) return 1.0 / (1.0 + std::norm(a.value()));

  cplx x = a.value();
  cplx y = b.value();
  // z -> 1/z is an isometry, so two large points are compared near 0.
  if (std::abs(x) > 1.0 && std::abs(y) > 1.0) {
    x = 1.0 / x;
    y = 1.0 / y;
  }
  double delta = 0.0;
  if (std::abs(y) > 1.0) {
    const cplx w = 1.0 / y;
    delta = std::norm(x * w - 1.0) / ((1.0 + std::norm(x)) * (1.0 + std::norm(w)));
  } else if (std::abs(x) > 1.0) {
    const cplx w = 1.0 / x;
    delta = std::norm(y * w - 1.0) / ((1.0 + std::norm(y)) * (1.0 + std::norm(w)));
  } else {
    delta = std::norm(x - y) / ((1.0 + std::norm(x)) * (1.0 + std::norm(y)));
  }
  return std::clamp(delta, 0.0, 1.0);
}

double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
  return std::sqrt(overlap_distance(a, b));
}

bool approx_equal(const SpherePoint& a, const SpherePoint& b, double eps) {
  return overlap_distance(a, b) < eps * eps;
}

double spherical_derivative(const MapParam& param, const SpherePoint& z) {
  const SpherePoint image = apply_map(param, z);
  const Chart target = chart_of(image);
  const cplx u = chart_coordinate(z, chart_of(z));
  const cplx v = chart_coordinate(image, target);
  return std::abs(chart_derivative(param, z, target)) * (1.0 + std::norm(u)) / (1.0 + std::norm(v));
}

}  // namespace qdyn
