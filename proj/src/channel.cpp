#include "qdyn/channel.hpp"

#include <cmath>

namespace qdyn {

Eigen::Matrix2cd rotation_matrix(double x, double phi) {
  const double c = std::cos(x);
  const double s = std::sin(x);
  Eigen::Matrix2cd u;
  u << c, s * std::polar(1.0, phi), -s * std::polar(1.0, -phi), c;
  return u;
}

DensityMatrix2 squaring_map(const DensityMatrix2& rho) { return rho.squared(); }

DensityMatrix2 rotate(const DensityMatrix2& rho, double x, double phi) {
  return rho.conjugated(rotation_matrix(x, phi));
}

DensityMatrix2 step_density(const DensityMatrix2& rho, double x, double phi) {
  return rotate(squaring_map(rho), x, phi);
}

MapParam p_from_angles(double x, double phi) { return MapParam::from_angles(x, phi); }

DensityMatrix2 to_density(const PureQubit& q) {
  // Amplitudes in the basis {|0>, |1>}: (z, 1), or (1, 1/z) when |z| > 1.
  Eigen::Vector2cd psi;
  if (chart_of(q.z) == Chart::origin) {
    psi << q.z.value(), 1.0;
  } else {
    psi << 1.0, chart_coordinate(q.z, Chart::infinity);
  }
  return DensityMatrix2::pure(psi);
}

PureQubit to_pure(const DensityMatrix2& rho, double purity_tolerance) {
  if (std::abs(rho.purity() - 1.0) > purity_tolerance) {
    throw DomainError("to_pure: state is mixed (Tr rho^2 != 1)");
  }
  const double r00 = rho(0, 0).real();
  const double r11 = rho(1, 1).real();
  if (r11 >= r00) return {SpherePoint::finite(rho(0, 1) / r11)};
  return {from_chart(Chart::infinity, rho(1, 0) / r00)};
}

double selection_probability(const DensityMatrix2& rho) { return rho.selection_probability(); }

SelectionHistory track_selection(const DensityMatrix2& rho0, double x, double phi, int steps) {
  if (steps < 0) throw DomainError("track_selection: steps must be non-negative");
  SelectionHistory h{{}, {}, rho0};
  double cumulative = 1.0;
  for (int k = 0; k < steps; ++k) {
    const double prob = h.final_state.selection_probability();
    cumulative *= prob;
    h.step_probability.push_back(prob);
    h.cumulative.push_back(cumulative);
    h.final_state = step_density(h.final_state, x, phi);
  }
  return h;
}

}  // namespace qdyn
