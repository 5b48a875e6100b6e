#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qdyn/error.hpp"
#include "qdyn/sphere.hpp"

using namespace qdyn;

namespace {

SpherePoint pt(double re, double im = 0.0) { return SpherePoint::finite({re, im}); }

// Test-only closed form: F_p is z^2 followed by a rotation of the sphere,
// so its spherical derivative does not depend on p.
double spherical_derivative_closed_form(const SpherePoint& z) {
  if (z.is_infinity()) return 0.0;
  const double r = std::abs(z.value());
  const double r2 = r * r;
  return 2.0 * r * (1.0 + r2) / (1.0 + r2 * r2);
}

// Overlap from normalized amplitudes (z, 1) / sqrt(1 + |z|^2), independent
// of overlap_distance's chart handling.
double overlap_from_amplitudes(cplx a, cplx b) {
  const double na = std::sqrt(1.0 + std::norm(a));
  const double nb = std::sqrt(1.0 + std::norm(b));
  const cplx inner = (std::conj(a) * b + 1.0) / (na * nb);
  return 1.0 - std::norm(inner);
}

std::vector<SpherePoint> special_points(const MapParam& param) {
  std::vector<SpherePoint> pts{pt(0), pt(1), pt(-1), pt(0, 1), pt(0, -1), SpherePoint::infinity()};
  const cplx pc = std::conj(param.value());
  if (pc != cplx{}) {
    const cplx r = std::sqrt(1.0 / pc);  // roots of 1 - conj(p) z^2
    pts.push_back(SpherePoint::finite(r));
    pts.push_back(SpherePoint::finite(-r));
  }
  return pts;
}

}  // namespace

TEST_CASE("apply_map examples") {
  CHECK(approx_equal(apply_map(MapParam({1, 0}), pt(0)), pt(1)));
  CHECK(apply_map(MapParam({1, 0}), pt(1)).is_infinity());
  CHECK(approx_equal(apply_map(MapParam({0, 0}), pt(2)), pt(4)));
  CHECK(approx_equal(apply_map(MapParam({1, 0}), SpherePoint::infinity()), pt(-1)));
  CHECK(apply_map(MapParam({0, 0}), SpherePoint::infinity()).is_infinity());
}

TEST_CASE("apply_map at infinity is the limit -1/conj(p)") {
  const MapParam p({0.3, -0.8});
  const SpherePoint img = apply_map(p, SpherePoint::infinity());
  CHECK(overlap_distance(img, SpherePoint::finite(-1.0 / std::conj(p.value()))) < 1e-30);
  // Approaching infinity along a ray converges to the same value.
  CHECK(approx_equal(apply_map(p, pt(1e12, 3e11)), img, 1e-9));
}

TEST_CASE("SpherePoint snaps overflow and rejects NaN") {
  CHECK(SpherePoint::finite({1e151, 0}).is_infinity());
  CHECK(SpherePoint::finite({std::numeric_limits<double>::infinity(), 0}).is_infinity());
  CHECK_FALSE(SpherePoint::finite({1e149, 0}).is_infinity());
  CHECK_THROWS_AS(SpherePoint::finite({std::nan(""), 0}), DomainError);
  CHECK_THROWS_AS(SpherePoint::infinity().value(), DomainError);
  CHECK_THROWS_AS(MapParam({std::numeric_limits<double>::infinity(), 0}), DomainError);
}

TEST_CASE("MapParam from angles") {
  CHECK(std::abs(MapParam::from_angles(std::numbers::pi / 4, 0).value() - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(MapParam::from_angles(std::numbers::pi / 4, std::numbers::pi / 2).value() - cplx(0, 1)) < 1e-15);
  CHECK(MapParam::from_angles(0.0, 1.7).value() == cplx{});
  CHECK_THROWS_AS(MapParam::from_angles(std::numbers::pi / 2, 0), DomainError);
  CHECK_THROWS_AS(MapParam::from_angles(-std::numbers::pi / 2, 0.3), DomainError);
}

TEST_CASE("overlap_distance examples") {
  const SpherePoint z = pt(0.3, -2.0);
  CHECK(overlap_distance(z, z) == 0.0);
  CHECK(overlap_distance(pt(0), SpherePoint::infinity()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(overlap_distance(pt(1), pt(-1)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(overlap_from_amplitudes(1.0, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(overlap_distance(SpherePoint::infinity(), SpherePoint::infinity()) == 0.0);
}

TEST_CASE("overlap_distance matches the amplitude overlap and is symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const cplx a(u(rng), u(rng));
    const cplx b(u(rng), u(rng));
    const double d = overlap_distance(SpherePoint::finite(a), SpherePoint::finite(b));
    CHECK(d == doctest::Approx(overlap_from_amplitudes(a, b)).epsilon(1e-12));
    CHECK(d == overlap_distance(SpherePoint::finite(b), SpherePoint::finite(a)));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
  // Large magnitudes go through the inverted chart without overflow.
  CHECK(overlap_distance(pt(1e140), pt(2e140)) == doctest::Approx(0.25e-280).epsilon(1e-10));
  CHECK(overlap_distance(pt(0.5), pt(1e140)) == doctest::Approx(1.0 / 1.25).epsilon(1e-12));
}

TEST_CASE("spherical_derivative examples") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const MapParam p({u(rng), u(rng)});
    CHECK(spherical_derivative(p, pt(0)) == 0.0);
    CHECK(spherical_derivative(p, SpherePoint::infinity()) == 0.0);
  }
  const MapParam zero;
  for (double theta : {0.0, 0.3, 1.0, 2.5, -1.2}) {
    CHECK(spherical_derivative(zero, SpherePoint::finite(std::polar(1.0, theta))) ==
          doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("spherical_derivative agrees with the closed form for every p") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    const MapParam p({u(rng), u(rng)});
    const SpherePoint z = pt(u(rng), u(rng));
    CHECK(spherical_derivative(p, z) == doctest::Approx(spherical_derivative_closed_form(z)).epsilon(1e-10));
  }
}

TEST_CASE("property: metric consistency against finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const MapParam p({u(rng), u(rng)});
    const SpherePoint z = pt(u(rng), u(rng));
    const SpherePoint zh = SpherePoint::finite(z.value() + std::polar(1e-7, angle(rng)));
    const double quotient = std::sqrt(overlap_distance(apply_map(p, z), apply_map(p, zh))) /
                            std::sqrt(overlap_distance(z, zh));
    CHECK(std::abs(quotient - spherical_derivative(p, z)) < 1e-5);
  }
}

TEST_CASE("property: apply_map is total") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> e(-160.0, 160.0);
  for (int i = 0; i < 2000; ++i) {
    const MapParam p({u(rng), u(rng)});
    std::vector<SpherePoint> inputs = special_points(p);
    inputs.push_back(pt(u(rng), u(rng)));
    inputs.push_back(pt(std::pow(10.0, e(rng)), std::pow(10.0, e(rng))));
    for (const auto& z : inputs) {
      const SpherePoint w = apply_map(p, z);
      if (!w.is_infinity()) {
        CHECK(std::isfinite(w.value().real()));
        CHECK(std::isfinite(w.value().imag()));
        CHECK(std::abs(w.value()) <= kOverflowMagnitude);
      }
    }
  }
}

TEST_CASE("property: poles of F_p map to infinity exactly when representable") {
  const MapParam p({0.25, 0.0});
  CHECK(apply_map(p, pt(2.0)).is_infinity());
  CHECK(apply_map(p, pt(-2.0)).is_infinity());
}

TEST_CASE("property: conjugation symmetry") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const MapParam p({u(rng), u(rng)});
    const SpherePoint z = pt(u(rng), u(rng));
    const SpherePoint lhs = apply_map(p.conj(), z.conj());
    const SpherePoint rhs = apply_map(p, z).conj();
    CHECK(overlap_distance(lhs, rhs) < 1e-24);
  }
}

TEST_CASE("property: unit circle is invariant at p = 0") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  const MapParam zero;
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint w = apply_map(zero, SpherePoint::finite(std::polar(1.0, angle(rng))));
    CHECK(std::abs(w.magnitude() - 1.0) < 1e-15);
  }
}

TEST_CASE("chart helpers round-trip") {
  const SpherePoint z = pt(3.0, -4.0);
  CHECK(chart_of(z) == Chart::infinity);
  CHECK(chart_of(pt(0.6, 0.8)) == Chart::origin);
  CHECK(approx_equal(from_chart(Chart::infinity, chart_coordinate(z, Chart::infinity)), z, 1e-14));
  CHECK(from_chart(Chart::infinity, 0.0).is_infinity());
  CHECK(chart_coordinate(SpherePoint::infinity(), Chart::infinity) == cplx{});
  CHECK_THROWS_AS(chart_coordinate(pt(0), Chart::infinity), DomainError);
}
