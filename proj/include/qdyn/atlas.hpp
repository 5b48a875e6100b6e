#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qdyn/orbit.hpp"
#include "qdyn/sphere.hpp"

namespace qdyn {

/// Version tag of the grayscale transfer and period palette below; written
/// to every sidecar.
inline constexpr int kPaletteVersion = 1;

/// Rectangular region of the complex plane sampled on a cols x rows grid.
/// Row 0 is the top (largest imaginary part); the four corner pixels sit
/// exactly on center +- width/2 and center +- height/2.
struct Window {
  cplx center{};
  double width = 4.0;
  double height = 4.0;
  int cols = 1000;
  int rows = 1000;

  static Window from_bounds(double re_min, double re_max, double im_min, double im_max, int cols, int rows);

  /// Throws DomainError unless width, height > 0 and resolution >= 2x2.
  void validate() const;
  cplx point(int row, int col) const;
  std::size_t size() const { return static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows); }
};

struct PixelOutcome {
  bool converged = false;
  int steps = 0;
  int period = 0;  // 0 when no cycle was reached

  friend bool operator==(const PixelOutcome&, const PixelOutcome&) = default;
};

struct Raster {
  Window window;
  std::vector<PixelOutcome> pixels;  // row-major

  const PixelOutcome& at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * window.cols + col];
  }
};

struct JuliaOptions {
  int max_iter = 200;
  double eps = kPointTolerance;
  /// Attracting cycles to converge to; discovered from the critical orbits
  /// when empty.
  std::vector<Cycle> targets;
};

/// Escape-to-cycle render of the dynamical plane: steps until the orbit of
/// each pixel comes within eps of an attracting cycle point. Throws
/// DomainError when no attracting cycle is known or can be found.
Raster render_julia(const MapParam& param, const Window& window, const JuliaOptions& options = {});
Raster render_julia_serial(const MapParam& param, const Window& window, const JuliaOptions& options = {});

/// options.targets if given, else the attracting cycles reached by the
/// critical orbits. Throws DomainError when there are none.
std::vector<Cycle> attracting_targets(const MapParam& param, const JuliaOptions& options);

/// The per-pixel kernel of render_julia for a single starting point.
/// Requires options.targets (see attracting_targets).
PixelOutcome julia_pixel(const MapParam& param, const SpherePoint& z, const JuliaOptions& options);

struct ParameterSpaceOptions {
  SpherePoint z0{};
  int transient = 1000;
  int max_period = kDefaultMaxPeriod;
  double eps = kPointTolerance;
};

/// Period of the cycle reached from z0 for every p of the window, after a
/// transient and a detection window of 2 * max_period + 1 points.
Raster render_parameter_space(const Window& window, const ParameterSpaceOptions& options = {});
Raster render_parameter_space_serial(const Window& window, const ParameterSpaceOptions& options = {});

/// Period detected at a single parameter value (the per-pixel kernel).
PixelOutcome parameter_pixel(cplx p, const ParameterSpaceOptions& options);

struct SweepOptions {
  cplx from{0.0, 0.0};
  cplx to{0.0, 2.0};
  int samples = 800;
  int transient = 10000;
  int record = 50;
  SpherePoint z0{};
};

struct SweepRow {
  cplx p;
  long step;      // iteration index of z
  SpherePoint z;
};

/// For each p sampled evenly on [from, to], the points z_{transient+1} ..
/// z_{transient+record} of the orbit of z0. Rows are ordered by sample, then step.
std::vector<SweepRow> bifurcation_sweep(const SweepOptions& options = {});
std::vector<SweepRow> bifurcation_sweep_serial(const SweepOptions& options = {});

/// floor(255 * steps / (max_iter + 1)) for converged pixels (dark = fast),
/// 255 (white) otherwise.
std::uint8_t gray_level(const PixelOutcome& pixel, int max_iter);

/// HSV color with hue period / (max_period + 1), full saturation and value;
/// white when no cycle was reached.
std::array<std::uint8_t, 3> period_color(int period, int max_period);

std::vector<std::uint8_t> grayscale_image(const Raster& raster, int max_iter);
std::vector<std::uint8_t> period_image(const Raster& raster, int max_period);

}  // namespace qdyn
