#include "qdyn/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdyn/error.hpp"
#include "qdyn/roots.hpp"

namespace qdyn {

namespace {

using Poly = std::vector<cplx>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly combine(cplx s, const Poly& a, cplx t, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), cplx{});
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += s * a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += t * b[i];
  return r;
}

// The point num/den of the sphere, with the overflow policy of SpherePoint.
SpherePoint from_fraction(cplx num, cplx den) {
  if (std::abs(num) <= std::abs(den)) return SpherePoint::finite(num / den);
  if (den == cplx{} || std::abs(den) * kOverflowMagnitude < std::abs(num)) return SpherePoint::infinity();
  return SpherePoint::finite(num / den);
}

SpherePoint iterate(const MapParam& param, SpherePoint z, int n) {
  for (int i = 0; i < n; ++i) z = apply_map(param, z);
  return z;
}

double periodic_residual(const MapParam& param, const SpherePoint& z, int period) {
  return overlap_distance(iterate(param, z, period), z);
}

// Derivative of u -> (chart coordinate of F^n(z)) between explicit charts.
struct Jet {
  SpherePoint image;
  cplx derivative;
};

std::optional<Jet> iterate_jet(const MapParam& param, const SpherePoint& z, int n, Chart in, Chart out) {
  cplx d = 1.0;
  if (chart_of(z) != in) {
    const cplx u = chart_coordinate(z, in);
    if (u == cplx{}) return std::nullopt;
    d = -1.0 / (u * u);
  }
  SpherePoint y = z;
  for (int i = 0; i < n; ++i) {
    const SpherePoint next = apply_map(param, y);
    d *= chart_derivative(param, y, chart_of(next));
    y = next;
  }
  if (chart_of(y) != out) {
    const cplx v = chart_coordinate(y, chart_of(y));
    if (v == cplx{}) return std::nullopt;
    d *= -1.0 / (v * v);
  }
  return Jet{y, d};
}

bool sphere_less(const SpherePoint& a, const SpherePoint& b) {
  if (a.is_infinity() != b.is_infinity()) return b.is_infinity();
  if (a.is_infinity()) return false;
  const cplx x = a.value();
  const cplx y = b.value();
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

}  // namespace

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::superattracting: return "superattracting";
    case Stability::attracting: return "attracting";
    case Stability::repelling: return "repelling";
    case Stability::parabolic: return "parabolic";
    case Stability::neutral_irrational: return "neutral-irrational";
  }
  return "unknown";
}

Orbit iterate_orbit(const MapParam& param, const SpherePoint& z0, int n) {
  if (n < 0) throw DomainError("iterate_orbit: n must be non-negative");
  Orbit orbit{param, {}};
  orbit.points.reserve(static_cast<std::size_t>(n) + 1);
  orbit.points.push_back(z0);
  for (int i = 0; i < n; ++i) orbit.points.push_back(apply_map(param, orbit.points.back()));
  return orbit;
}

std::optional<int> detect_period(std::span<const SpherePoint> points, double eps, int max_period) {
  const double threshold = eps * eps;
  const auto last = static_cast<std::ptrdiff_t>(points.size()) - 1;
  for (int q = 1; q <= max_period && 2 * q <= last; ++q) {
    bool sustained = true;
    for (std::ptrdiff_t k = last - q; k >= last - 2 * q; --k) {
      if (overlap_distance(points[k], points[k + q]) >= threshold) {
        sustained = false;
        break;
      }
    }
    if (sustained) return q;
  }
  return std::nullopt;
}

SpherePoint polish_periodic_point(const MapParam& param, const SpherePoint& z, int period) {
  SpherePoint best = z;
  double best_residual = periodic_residual(param, z, period);
  if (best_residual == 0.0) return best;

  const Chart chart = chart_of(z);
  cplx u = chart_coordinate(z, chart);
  for (int it = 0; it < 40; ++it) {
    const auto jet = iterate_jet(param, from_chart(chart, u), period, chart, chart);
    if (!jet) break;
    if (chart == Chart::infinity && !jet->image.is_infinity() && jet->image.value() == cplx{}) break;
    const cplx g = chart_coordinate(jet->image, chart) - u;
    const cplx dg = jet->derivative - 1.0;
    if (std::abs(dg) < 1e-14) break;
    const cplx du = g / dg;
    u -= du;
    const SpherePoint candidate = from_chart(chart, u);
    const double residual = periodic_residual(param, candidate, period);
    if (residual < best_residual) {
      best = candidate;
      best_residual = residual;
    }
    if (best_residual == 0.0 || std::abs(du) <= 1e-16 * (1.0 + std::abs(u))) break;
  }
  return best;
}

Stability classify_multiplier(cplx multiplier) {
  const double m = std::abs(multiplier);
  if (m <= kSuperattractingTolerance) return Stability::superattracting;
  if (m < 1.0 - kNeutralTolerance) return Stability::attracting;
  if (m > 1.0 + kNeutralTolerance) return Stability::repelling;
  const cplx unit = multiplier / m;
  cplx power = 1.0;
  for (int k = 1; k <= kParabolicOrderCap; ++k) {
    power *= unit;
    if (std::abs(power - 1.0) < kNeutralTolerance) return Stability::parabolic;
  }
  return Stability::neutral_irrational;
}

MultiplierResult cycle_multiplier(const MapParam& param, std::span<const SpherePoint> points, double tolerance) {
  if (points.empty()) throw DomainError("cycle_multiplier: empty cycle");
  const std::size_t n = points.size();
  cplx lambda = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const SpherePoint& next = points[(k + 1) % n];
    if (!approx_equal(apply_map(param, points[k]), next, tolerance)) {
      throw DomainError("cycle_multiplier: points do not form a cycle of F_p");
    }
    lambda *= chart_derivative(param, points[k], chart_of(next));
  }
  return {lambda, classify_multiplier(lambda)};
}

std::optional<Cycle> detect_cycle(const Orbit& orbit, double eps, int max_period) {
  if (max_period < 1) throw DomainError("detect_cycle: max_period must be positive");
  if (orbit.points.size() <= static_cast<std::size_t>(2 * max_period)) {
    throw DomainError("detect_cycle: orbit must be longer than 2 * max_period");
  }
  const auto q = detect_period(orbit.points, eps, max_period);
  if (!q) return std::nullopt;

  const auto tail = std::span(orbit.points).last(static_cast<std::size_t>(*q));
  Cycle cycle;
  cycle.period = *q;
  cycle.points.reserve(tail.size());
  for (const auto& z : tail) cycle.points.push_back(polish_periodic_point(orbit.param, z, *q));

  MultiplierResult m{};
  try {
    m = cycle_multiplier(orbit.param, cycle.points);
  } catch (const DomainError&) {
    cycle.points.assign(tail.begin(), tail.end());
    m = cycle_multiplier(orbit.param, cycle.points);
  }
  cycle.multiplier = m.multiplier;
  cycle.stability = m.stability;
  return cycle;
}

std::vector<SpherePoint> find_periodic_points(const MapParam& param, int n, int max_order) {
  if (n < 1 || n > max_order) {
    throw DomainError("find_periodic_points: order must be in [1, " + std::to_string(max_order) + "]");
  }
  const cplx p = param.value();
  const cplx pc = std::conj(p);
  const std::string where = "p = (" + std::to_string(p.real()) + ", " + std::to_string(p.imag()) + ")";

  // Work in coordinates rotated by an isometry M of the sphere so that no
  // periodic point sits at infinity: the fixed-point polynomial of
  // M^-1 F^n M then has full degree 2^n + 1.
  constexpr std::array<std::array<double, 2>, 4> rotations{{{0.5377, 1.2345}, {1.1, 2.7}, {0.3, 4.0}, {0.9, 0.2}}};
  for (const auto& [theta, psi] : rotations) {
    const cplx a = std::cos(theta);
    const cplx b = std::sin(theta) * std::polar(1.0, psi);
    Poly num{b, a};
    Poly den{std::conj(a), -std::conj(b)};
    for (int k = 0; k < n; ++k) {
      const Poly n2 = multiply(num, num);
      const Poly d2 = multiply(den, den);
      num = combine(1.0, n2, p, d2);
      den = combine(1.0, d2, -pc, n2);
    }
    const Poly back_num = combine(std::conj(a), num, -b, den);
    const Poly back_den = combine(std::conj(b), num, a, den);
    // back_num(z) - z back_den(z)
    Poly fixed = combine(1.0, back_num, -1.0, multiply(Poly{0.0, 1.0}, back_den));

    double scale = 0.0;
    for (const auto& c : fixed) scale = std::max(scale, std::abs(c));
    if (std::abs(fixed.back()) < 1e-8 * scale) continue;

    std::vector<cplx> roots;
    try {
      roots = polynomial_roots(fixed);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " for " + where);
    }

    std::vector<SpherePoint> points;
    for (const cplx r : roots) {
      const SpherePoint z = polish_periodic_point(param, from_fraction(a * r + b, -std::conj(b) * r + std::conj(a)), n);
      if (periodic_residual(param, z, n) >= 1e-9) {
        throw NumericalError("find_periodic_points: periodic point failed verification for " + where);
      }
      const bool duplicate = std::any_of(points.begin(), points.end(),
                                         [&](const SpherePoint& y) { return approx_equal(y, z, kRootMergeTolerance); });
      if (!duplicate) points.push_back(z);
    }
    std::sort(points.begin(), points.end(), sphere_less);
    return points;
  }
  throw NumericalError("find_periodic_points: degenerate fixed-point polynomial for " + where);
}

std::vector<Cycle> find_cycles(const MapParam& param, int n, int max_order) {
  const auto points = find_periodic_points(param, n, max_order);
  std::vector<bool> assigned(points.size(), false);
  auto nearest = [&](const SpherePoint& y) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (approx_equal(points[i], y, kRootMergeTolerance)) return i;
    return std::nullopt;
  };

  std::vector<Cycle> cycles;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (assigned[i]) continue;
    Cycle cycle;
    cycle.points.push_back(points[i]);
    assigned[i] = true;
    SpherePoint y = points[i];
    for (int step = 1; step <= n; ++step) {
      y = apply_map(param, y);
      const auto j = nearest(y);
      if (!j) throw NumericalError("find_cycles: image of a periodic point is not periodic");
      if (*j == i) {
        cycle.period = step;
        break;
      }
      cycle.points.push_back(points[*j]);
      assigned[*j] = true;
    }
    if (cycle.period == 0) throw NumericalError("find_cycles: orbit did not close within the order");
    const auto m = cycle_multiplier(param, cycle.points);
    cycle.multiplier = m.multiplier;
    cycle.stability = m.stability;
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

bool same_cycle(const Cycle& a, const Cycle& b, double tolerance) {
  if (a.period != b.period) return false;
  return std::all_of(a.points.begin(), a.points.end(), [&](const SpherePoint& x) {
    return std::any_of(b.points.begin(), b.points.end(),
                       [&](const SpherePoint& y) { return approx_equal(x, y, tolerance); });
  });
}

int CriticalReport::attracting_or_neutral_count() const {
  return static_cast<int>(std::count_if(cycles.begin(), cycles.end(), [](const Cycle& c) {
    return is_attracting(c.stability) || is_neutral(c.stability);
  }));
}

CriticalReport critical_orbits(const MapParam& param, const CriticalOrbitOptions& options) {
  CriticalReport report{param, {}, {}, std::nullopt};
  const std::array<SpherePoint, 2> starts{SpherePoint{}, SpherePoint::infinity()};
  const int length = std::max(options.max_iter, 2 * options.max_period + 1);

  bool all_landed = true;
  bool all_attracting = true;
  for (std::size_t c = 0; c < starts.size(); ++c) {
    CriticalOrbit& entry = report.orbits[c];
    entry.start = starts[c];
    const Orbit orbit = iterate_orbit(param, starts[c], length);
    entry.landing = detect_cycle(orbit, options.eps, options.max_period);
    if (!entry.landing) {
      all_landed = false;
      continue;
    }
    const Cycle& cycle = *entry.landing;
    for (std::size_t k = 0; k < orbit.points.size() && !entry.transient; ++k) {
      for (const auto& y : cycle.points) {
        if (approx_equal(orbit.points[k], y, options.eps)) {
          entry.transient = static_cast<int>(k);
          break;
        }
      }
    }
    if (!entry.transient) entry.transient = static_cast<int>(orbit.points.size()) - cycle.period;
    all_attracting = all_attracting && is_attracting(cycle.stability);
    const bool seen = std::any_of(report.cycles.begin(), report.cycles.end(),
                                  [&](const Cycle& other) { return same_cycle(other, cycle); });
    if (!seen) report.cycles.push_back(cycle);
  }
  if (all_landed) report.hyperbolic = all_attracting;
  return report;
}

}  // namespace qdyn
