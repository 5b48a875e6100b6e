#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdyn/atlas.hpp"
#include "qdyn/lyapunov.hpp"
#include "qdyn/orbit.hpp"
#include "qdyn/two_qubit.hpp"

namespace qdyn::io {

using nlohmann::json;

/// Parses "a+bi", "a-bi", "a", "bi" or "i". Throws DomainError on anything
/// else, including non-finite components.
cplx parse_complex(std::string_view text);
/// As parse_complex, plus "inf" for the point at infinity.
SpherePoint parse_point(std::string_view text);
/// Shortest round-trip form "a+bi".
std::string format_complex(cplx z);
std::string format_point(const SpherePoint& z);

// JSON schema: complex numbers are [re, im]; sphere points are [re, im] or "inf".
json to_json(cplx z);
json to_json(const SpherePoint& z);
json to_json(const Cycle& cycle);
json to_json(const CriticalReport& report);
json to_json(const LyapunovEstimate& estimate);
json to_json(const Window& window);
cplx complex_from_json(const json& j);
SpherePoint point_from_json(const json& j);
Window window_from_json(const json& j);

/// Row-major 4x4 matrix, entries [re, im], either bare or under "rho".
/// Validated against the density-matrix invariants.
DensityMatrix4 density4_from_json(const json& j);
DensityMatrix4 load_density4(const std::filesystem::path& path);

/// Binary P5 (maxval 255), one byte per pixel.
void write_pgm(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> gray);
/// Binary P6 (maxval 255), three bytes per pixel.
void write_ppm(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> rgb);

/// Header p_re,p_im,step,abs_z,is_infinity; abs_z is empty for infinity.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
/// Header step,purity,fidelity,selection_prob.
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);
/// Header step,re,im,is_infinity.
void write_orbit_csv(std::ostream& out, const Orbit& orbit);

json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace qdyn::io
