#include "qdyn/atlas.hpp"

#include <algorithm>
#include <cmath>

#include "qdyn/error.hpp"

namespace qdyn {

namespace {

struct Target {
  SpherePoint point;
  int period;
};

std::vector<Target> julia_targets(const MapParam& param, const JuliaOptions& options) {
  const std::vector<Cycle> cycles = attracting_targets(param, options);
  std::vector<Target> targets;
  for (const auto& c : cycles)
    for (const auto& z : c.points) targets.push_back({z, c.period});
  return targets;
}

PixelOutcome escape_to_cycle(const MapParam& param, SpherePoint z, int max_iter, double threshold,
                         const std::vector<Target>& targets) {
  for (int step = 0;; ++step) {
    for (const auto& t : targets) {
      if (overlap_distance(z, t.point) < threshold) return {true, step, t.period};
    }
    if (step == max_iter) break;
    z = apply_map(param, z);
  }
  return {false, max_iter, 0};
}

void check_julia(const Window& window, const JuliaOptions& options) {
  window.validate();
  if (options.max_iter < 0) throw DomainError("render_julia: max_iter must be non-negative");
}

void check_parameter_space(const Window& window, const ParameterSpaceOptions& options) {
  window.validate();
  if (options.max_period < 1) throw DomainError("render_parameter_space: max_period must be positive");
  if (options.transient < 2 * options.max_period) {
    throw DomainError("render_parameter_space: transient must be at least 2 * max_period");
  }
}

std::vector<cplx> sweep_parameters(const SweepOptions& options) {
  if (options.samples < 1) throw DomainError("bifurcation_sweep: samples must be at least 1");
  if (options.transient < 0 || options.record < 0) {
    throw DomainError("bifurcation_sweep: transient and record must be non-negative");
  }
  std::vector<cplx> ps(static_cast<std::size_t>(options.samples));
  for (int k = 0; k < options.samples; ++k) {
    const double t = options.samples == 1 ? 0.0 : static_cast<double>(k) / (options.samples - 1);
    ps[k] = options.from + (options.to - options.from) * t;
  }
  return ps;
}

void sweep_sample(cplx p, const SweepOptions& options, SweepRow* out) {
  const MapParam param(p);
  SpherePoint z = options.z0;
  for (int i = 0; i < options.transient; ++i) z = apply_map(param, z);
  for (int r = 0; r < options.record; ++r) {
    z = apply_map(param, z);
    out[r] = {p, static_cast<long>(options.transient) + r + 1, z};
  }
}

}  // namespace

Window Window::from_bounds(double re_min, double re_max, double im_min, double im_max, int cols, int rows) {
  Window w{{0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}, re_max - re_min, im_max - im_min, cols, rows};
  w.validate();
  return w;
}

void Window::validate() const {
  if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height)) {
    throw DomainError("Window: width and height must be positive and finite");
  }
  if (cols < 2 || rows < 2) throw DomainError("Window: resolution must be at least 2x2");
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag())) throw DomainError("Window: center must be finite");
}

cplx Window::point(int row, int col) const {
  // Integer numerators keep the grid exactly antisymmetric about the center.
  const double sx = static_cast<double>(2 * col - (cols - 1)) / (cols - 1);
  const double sy = static_cast<double>((rows - 1) - 2 * row) / (rows - 1);
  return {center.real() + 0.5 * width * sx, center.imag() + 0.5 * height * sy};
}

std::vector<Cycle> attracting_targets(const MapParam& param, const JuliaOptions& options) {
  std::vector<Cycle> cycles = options.targets;
  if (cycles.empty()) {
    for (const auto& c : critical_orbits(param).cycles) {
      if (is_attracting(c.stability)) cycles.push_back(c);
    }
  }
  if (cycles.empty()) throw DomainError("render_julia: no attracting cycle known for this parameter");
  return cycles;
}

PixelOutcome julia_pixel(const MapParam& param, const SpherePoint& z, const JuliaOptions& options) {
  if (options.targets.empty()) throw DomainError("julia_pixel: no target cycles given");
  return escape_to_cycle(param, z, options.max_iter, options.eps * options.eps, julia_targets(param, options));
}

Raster render_julia(const MapParam& param, const Window& window, const JuliaOptions& options) {
  check_julia(window, options);
  const auto targets = julia_targets(param, options);
  const double threshold = options.eps * options.eps;
  Raster raster{window, std::vector<PixelOutcome>(window.size())};
#pragma omp parallel for schedule(dynamic, 1)
  for (int row = 0; row < window.rows; ++row) {
    for (int col = 0; col < window.cols; ++col) {
      raster.pixels[static_cast<std::size_t>(row) * window.cols + col] =
          escape_to_cycle(param, SpherePoint::finite(window.point(row, col)), options.max_iter, threshold, targets);
    }
  }
  return raster;
}

Raster render_julia_serial(const MapParam& param, const Window& window, const JuliaOptions& options) {
  check_julia(window, options);
  const auto targets = julia_targets(param, options);
  const double threshold = options.eps * options.eps;
  Raster raster{window, {}};
  raster.pixels.reserve(window.size());
  for (int row = 0; row < window.rows; ++row)
    for (int col = 0; col < window.cols; ++col)
      raster.pixels.push_back(
          escape_to_cycle(param, SpherePoint::finite(window.point(row, col)), options.max_iter, threshold, targets));
  return raster;
}

PixelOutcome parameter_pixel(cplx p, const ParameterSpaceOptions& options) {
  const MapParam param(p);
  SpherePoint z = options.z0;
  for (int i = 0; i < options.transient; ++i) z = apply_map(param, z);
  std::vector<SpherePoint> tail(static_cast<std::size_t>(2 * options.max_period + 1));
  tail[0] = z;
  for (std::size_t i = 1; i < tail.size(); ++i) tail[i] = apply_map(param, tail[i - 1]);
  const int steps = options.transient + 2 * options.max_period;
  if (const auto q = detect_period(tail, options.eps, options.max_period)) return {true, steps, *q};
  return {false, steps, 0};
}

Raster render_parameter_space(const Window& window, const ParameterSpaceOptions& options) {
  check_parameter_space(window, options);
  Raster raster{window, std::vector<PixelOutcome>(window.size())};
#pragma omp parallel for schedule(dynamic, 1)
  for (int row = 0; row < window.rows; ++row) {
    for (int col = 0; col < window.cols; ++col) {
      raster.pixels[static_cast<std::size_t>(row) * window.cols + col] =
          parameter_pixel(window.point(row, col), options);
    }
  }
  return raster;
}

Raster render_parameter_space_serial(const Window& window, const ParameterSpaceOptions& options) {
  check_parameter_space(window, options);
  Raster raster{window, {}};
  raster.pixels.reserve(window.size());
  for (int row = 0; row < window.rows; ++row)
    for (int col = 0; col < window.cols; ++col)
      raster.pixels.push_back(parameter_pixel(window.point(row, col), options));
  return raster;
}

std::vector<SweepRow> bifurcation_sweep(const SweepOptions& options) {
  const auto ps = sweep_parameters(options);
  std::vector<SweepRow> rows(ps.size() * static_cast<std::size_t>(options.record));
  const int n = static_cast<int>(ps.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (int k = 0; k < n; ++k) {
    sweep_sample(ps[k], options, rows.data() + static_cast<std::size_t>(k) * options.record);
  }
  return rows;
}

std::vector<SweepRow> bifurcation_sweep_serial(const SweepOptions& options) {
  const auto ps = sweep_parameters(options);
  std::vector<SweepRow> rows(ps.size() * static_cast<std::size_t>(options.record));
  for (std::size_t k = 0; k < ps.size(); ++k) sweep_sample(ps[k], options, rows.data() + k * options.record);
  return rows;
}

std::uint8_t gray_level(const PixelOutcome& pixel, int max_iter) {
  if (!pixel.converged) return 255;
  const double v = std::floor(255.0 * pixel.steps / (static_cast<double>(max_iter) + 1.0));
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 254.0));
}

std::array<std::uint8_t, 3> period_color(int period, int max_period) {
  if (period <= 0) return {255, 255, 255};
  const double hue = 6.0 * static_cast<double>(period) / (max_period + 1);
  const int sector = static_cast<int>(std::floor(hue)) % 6;
  const double f = hue - std::floor(hue);
  const auto up = static_cast<std::uint8_t>(std::lround(255.0 * f));
  const auto down = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - f)));
  switch (sector) {
    case 0: return {255, up, 0};
    case 1: return {down, 255, 0};
    case 2: return {0, 255, up};
    case 3: return {0, down, 255};
    case 4: return {up, 0, 255};
    default: return {255, 0, down};
  }
}

std::vector<std::uint8_t> grayscale_image(const Raster& raster, int max_iter) {
  std::vector<std::uint8_t> out;
  out.reserve(raster.pixels.size());
  for (const auto& px : raster.pixels) out.push_back(gray_level(px, max_iter));
  return out;
}

std::vector<std::uint8_t> period_image(const Raster& raster, int max_period) {
  std::vector<std::uint8_t> out;
  out.reserve(3 * raster.pixels.size());
  for (const auto& px : raster.pixels) {
    const auto rgb = period_color(px.converged ? px.period : 0, max_period);
    out.insert(out.end(), rgb.begin(), rgb.end());
  }
  return out;
}

}  // namespace qdyn
