#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qdyn/channel.hpp"
#include "qdyn/error.hpp"
#include "qdyn/two_qubit.hpp"

using namespace qdyn;

namespace {

constexpr double kPi = std::numbers::pi;

DensityMatrix4 diag4(double a, double b, double c, double d) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.diagonal() << a, b, c, d;
  return DensityMatrix4(m);
}

DensityMatrix4 random_state4(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = {g(rng), g(rng)};
  const Eigen::Matrix4cd m = a * a.adjoint();
  return DensityMatrix4(m / m.trace());
}

SpherePoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  return SpherePoint::finite({u(rng), u(rng)});
}

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("squaring4 examples") {
  const DensityMatrix4 mixed = DensityMatrix4::maximally_mixed();
  CHECK(max_diff(squaring4(mixed).matrix(), mixed.matrix()) < 1e-15);
  const DensityMatrix4 expected = diag4(16 / 30.0, 9 / 30.0, 4 / 30.0, 1 / 30.0);
  CHECK(max_diff(squaring4(diag4(0.4, 0.3, 0.2, 0.1)).matrix(), expected.matrix()) < 1e-15);
  const DensityMatrix4 basis = diag4(0, 0, 1, 0);
  CHECK(max_diff(squaring4(basis).matrix(), basis.matrix()) < 1e-15);
}

TEST_CASE("rotate_local examples") {
  std::mt19937_64 rng(1);
  const DensityMatrix4 rho = random_state4(rng);
  CHECK(max_diff(rotate_local(rho, 1, 0.0, 0.4).matrix(), rho.matrix()) < 1e-15);
  CHECK(max_diff(rotate_local(rho, 2, 0.0, 0.4).matrix(), rho.matrix()) < 1e-15);

  const DensityMatrix4 a = rotate_local(rotate_local(rho, 1, 0.3, 1.1), 2, -0.7, 2.0);
  const DensityMatrix4 b = rotate_local(rotate_local(rho, 2, -0.7, 2.0), 1, 0.3, 1.1);
  CHECK(max_diff(a.matrix(), b.matrix()) < 1e-12);

  // (|00> - |10>) / sqrt 2
  Eigen::Vector4cd v(1, 0, -1, 0);
  v /= std::sqrt(2.0);
  const Eigen::Matrix4cd expected = v * v.adjoint();
  CHECK(max_diff(rotate_local(diag4(1, 0, 0, 0), 1, kPi / 4, 0).matrix(), expected) < 1e-15);

  CHECK_THROWS_AS(rotate_local(rho, 0, 0.1, 0.1), DomainError);
  CHECK_THROWS_AS(rotate_local(rho, 3, 0.1, 0.1), DomainError);
}

TEST_CASE("step_two_qubit with zero rotations is squaring4") {
  std::mt19937_64 rng(2);
  const DensityMatrix4 rho = random_state4(rng);
  CHECK(max_diff(step_two_qubit(rho, {0, 1.0}, {0, -2.0}).matrix(), squaring4(rho).matrix()) < 1e-15);
}

TEST_CASE("tensor and reduced_state") {
  std::mt19937_64 rng(3);
  const DensityMatrix2 a = to_density({random_point(rng)});
  const DensityMatrix2 b = to_density({random_point(rng)});
  const DensityMatrix4 ab = tensor(a, b);
  CHECK(max_diff(reduced_state(ab, 1).matrix(), a.matrix()) < 1e-15);
  CHECK(max_diff(reduced_state(ab, 2).matrix(), b.matrix()) < 1e-15);
  CHECK(ab(2, 1) == a(1, 0) * b(0, 1));
  CHECK_THROWS_AS(reduced_state(ab, 0), DomainError);
}

TEST_CASE("property: product states stay products and follow the one-qubit map") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> x(-1.2, 1.2);
  std::uniform_real_distribution<double> phi(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    DensityMatrix2 a = to_density({random_point(rng)});
    DensityMatrix2 b = to_density({random_point(rng)});
    const LocalAngles first{x(rng), phi(rng)};
    const LocalAngles second = i % 2 ? first : LocalAngles{x(rng), phi(rng)};
    DensityMatrix4 rho = tensor(a, b);
    for (int step = 0; step < 5; ++step) {
      rho = step_two_qubit(rho, first, second);
      a = step_density(a, first.x, first.phi);
      b = step_density(b, second.x, second.phi);
      const DensityMatrix2 r1 = reduced_state(rho, 1);
      const DensityMatrix2 r2 = reduced_state(rho, 2);
      CHECK(std::abs(r1.purity() - 1.0) < 1e-8);
      CHECK(std::abs(r2.purity() - 1.0) < 1e-8);
      CHECK(max_diff(r1.matrix(), a.matrix()) < 1e-8);
      CHECK(max_diff(r2.matrix(), b.matrix()) < 1e-8);
    }
  }
}

TEST_CASE("property: qubit 2 parked in |0> reproduces the one-qubit channel") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(-1.2, 1.2);
  std::uniform_real_distribution<double> phi(-kPi, kPi);
  const DensityMatrix2 zero = DensityMatrix2(Eigen::Matrix2cd{{1, 0}, {0, 0}});
  for (int i = 0; i < 200; ++i) {
    std::normal_distribution<double> g;
    Eigen::Matrix2cd m;
    m << g(rng), cplx(g(rng), g(rng)), 0, g(rng);
    const Eigen::Matrix2cd pos = m * m.adjoint();
    const DensityMatrix2 rho(pos / pos.trace());
    const LocalAngles first{x(rng), phi(rng)};
    const DensityMatrix4 out = step_two_qubit(tensor(rho, zero), first, {0, phi(rng)});
    CHECK(max_diff(reduced_state(out, 1).matrix(), step_density(rho, first.x, first.phi).matrix()) < 1e-10);
  }
}

TEST_CASE("property: matrix invariants survive 100 steps") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> x(-1.5, 1.5);
  std::uniform_real_distribution<double> phi(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    DensityMatrix4 rho = random_state4(rng);
    const LocalAngles first{x(rng), phi(rng)};
    const LocalAngles second{x(rng), phi(rng)};
    double worst_h = 0, worst_t = 0, worst_e = 0;
    for (int step = 0; step < 100; ++step) {
      rho = step_two_qubit(rho, first, second);
      worst_h = std::max(worst_h, rho.hermiticity_error());
      worst_t = std::max(worst_t, rho.trace_error());
      worst_e = std::min(worst_e, rho.min_eigenvalue());
    }
    CHECK(worst_h <= 1e-10);
    CHECK(worst_t <= 1e-10);
    CHECK(worst_e >= -1e-10);
  }
}

TEST_CASE("zero rotations purify toward the dominant basis state") {
  const auto rows = purification_trace(diag4(0.4, 0.3, 0.2, 0.1), {}, {}, 30);
  REQUIRE(rows.size() == 30);
  CHECK(rows.front().step == 1);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].purity >= rows[i - 1].purity);
  CHECK(rows.back().purity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows.back().fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows.front().selection_probability == doctest::Approx(0.3).epsilon(1e-15));

  Eigen::Vector4cd target(0, 1, 0, 0);
  const auto other = purification_trace(diag4(0.4, 0.3, 0.2, 0.1), {}, {}, 30, target);
  CHECK(other.back().fidelity < 1e-12);
}

TEST_CASE("purification_trace on a pure fixed point is constant") {
  const auto rows = purification_trace(diag4(0, 0, 0, 1), {}, {}, 10);
  for (const auto& row : rows) {
    CHECK(row.purity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(row.fidelity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(row.selection_probability == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("selection column is the pre-rotation diagonal weight") {
  std::mt19937_64 rng(7);
  DensityMatrix4 rho = random_state4(rng);
  const LocalAngles first{0.4, 0.2}, second{-0.3, 1.9};
  const auto rows = purification_trace(rho, first, second, 20);
  for (const auto& row : rows) {
    CHECK(row.selection_probability > 0.0);
    CHECK(row.selection_probability <= 1.0);
    CHECK(row.selection_probability == doctest::Approx(rho.matrix().diagonal().cwiseAbs2().sum()).epsilon(1e-14));
    rho = step_two_qubit(rho, first, second);
  }
  CHECK_THROWS_AS(purification_trace(rho, first, second, 0), DomainError);
}
