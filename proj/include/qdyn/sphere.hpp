#pragma once

#include <complex>

namespace qdyn {

using cplx = std::complex<double>;

/// Finite magnitudes above this are snapped to the point at infinity.
inline constexpr double kOverflowMagnitude = 1e150;

/// Default point-equality tolerance, in chordal units (square root of the
/// overlap distance).
inline constexpr double kPointTolerance = 1e-9;

/// A point of the extended complex plane, i.e. a qubit pure state
/// N (z|0> + |1>) up to global phase.
///
/// The point 0 is the basis state |1>, the point at infinity is |0>.
/// Finite values never carry NaN or infinite components, and magnitudes
/// above kOverflowMagnitude are stored as the infinity element instead.
/// Compare points with overlap_distance() or approx_equal(), not ==.
class SpherePoint {
 public:
  constexpr SpherePoint() = default;

  /// Throws DomainError on NaN input; infinite or huge input becomes infinity().
  static SpherePoint finite(cplx z);
  static constexpr SpherePoint infinity() { return SpherePoint(cplx{}, true); }

  constexpr bool is_infinity() const { return infinite_; }
  /// The finite coordinate. Must not be called on infinity().
  cplx value() const;
  /// |z|, or +inf for the point at infinity.
  double magnitude() const;
  SpherePoint conj() const;

  /// Bitwise identity of the representation (used for determinism checks only).
  constexpr bool identical(const SpherePoint& other) const {
    return infinite_ == other.infinite_ && z_ == other.z_;
  }

 private:
  constexpr SpherePoint(cplx z, bool infinite) : z_(z), infinite_(infinite) {}

  cplx z_{};
  bool infinite_ = false;
};

/// The complex parameter p = tan(x) e^{i phi} of the map family.
class MapParam {
 public:
  constexpr MapParam() = default;
  /// Throws DomainError if p is not finite.
  explicit MapParam(cplx p);

  /// Rotation angles of the local unitary. Throws DomainError when
  /// cos(x) vanishes (x = pi/2 mod pi has no finite p).
  static MapParam from_angles(double x, double phi);

  constexpr cplx value() const { return p_; }
  MapParam conj() const { return MapParam(std::conj(p_)); }

 private:
  cplx p_{};
};

/// The two affine charts of the sphere: u = z around the origin and
/// u = 1/z around infinity.
enum class Chart { origin, infinity };

/// Origin chart for |z| <= 1, infinity chart otherwise.
Chart chart_of(const SpherePoint& z);
/// Coordinate of z in the given chart; infinity has coordinate 0 in the
/// infinity chart. Throws DomainError if z is the excluded point of the chart.
cplx chart_coordinate(const SpherePoint& z, Chart chart);
SpherePoint from_chart(Chart chart, cplx u);

/// F_p(z) = (z^2 + p) / (1 - conj(p) z^2), total on the sphere.
SpherePoint apply_map(const MapParam& param, const SpherePoint& z);

/// Derivative of F_p at z, expressed from chart_of(z) to the target chart.
/// Products of these along a closed cycle give its multiplier.
cplx chart_derivative(const MapParam& param, const SpherePoint& z, Chart target);

/// 1 - |<psi_a|psi_b>|^2 = |a - b|^2 / ((1 + |a|^2)(1 + |b|^2)), in [0, 1].
double overlap_distance(const SpherePoint& a, const SpherePoint& b);

/// sqrt(overlap_distance): the chordal distance on a sphere of diameter 1.
double chordal_distance(const SpherePoint& a, const SpherePoint& b);

bool approx_equal(const SpherePoint& a, const SpherePoint& b, double eps = kPointTolerance);

/// Local expansion factor of F_p in the chordal metric,
/// |F'(z)| (1 + |z|^2) / (1 + |F(z)|^2). Zero exactly at the critical
/// points 0 and infinity.
double spherical_derivative(const MapParam& param, const SpherePoint& z);

}  // namespace qdyn
