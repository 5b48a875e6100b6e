#include "qdyn/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "qdyn/error.hpp"

namespace qdyn::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void malformed(std::string_view text) {
  throw DomainError("malformed complex literal '" + std::string(text) + "' (expected a+bi, a-bi or inf)");
}

double parse_real(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) malformed(whole);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) malformed(whole);
  return v;
}

// Coefficient of i: "", "+", "-" mean +-1.
double parse_imag(std::string_view s, std::string_view whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  return parse_real(s, whole);
}

std::string format_double(double v) {
  char buf[32];
  if (v == 0.0) v = 0.0;  // no "-0" in output
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void check_stream(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

cplx parse_complex(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) malformed(text);
  if (s.back() != 'i') return {parse_real(s, text), 0.0};
  const std::string_view body = s.substr(0, s.size() - 1);
  for (std::size_t k = body.size(); k-- > 1;) {
    const char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      return {parse_real(body.substr(0, k), text), parse_imag(body.substr(k), text)};
    }
  }
  return {0.0, parse_imag(body, text)};
}

SpherePoint parse_point(std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "inf" || s == "Inf" || s == "infinity") return SpherePoint::infinity();
  return SpherePoint::finite(parse_complex(s));
}

std::string format_complex(cplx z) {
  std::string im = format_double(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_double(z.real()) + im + "i";
}

std::string format_point(const SpherePoint& z) { return z.is_infinity() ? "inf" : format_complex(z.value()); }

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const SpherePoint& z) { return z.is_infinity() ? json("inf") : to_json(z.value()); }

json to_json(const Cycle& cycle) {
  json points = json::array();
  for (const auto& z : cycle.points) points.push_back(to_json(z));
  return {{"period", cycle.period},
          {"points", points},
          {"multiplier", to_json(cycle.multiplier)},
          {"class", std::string(to_string(cycle.stability))}};
}

json to_json(const CriticalReport& report) {
  json orbits = json::array();
  for (const auto& o : report.orbits) {
    json entry{{"start", to_json(o.start)}, {"converged", o.landing.has_value()}};
    entry["transient"] = o.transient ? json(*o.transient) : json(nullptr);
    entry["cycle"] = o.landing ? to_json(*o.landing) : json(nullptr);
    orbits.push_back(entry);
  }
  json cycles = json::array();
  for (const auto& c : report.cycles) cycles.push_back(to_json(c));
  return {{"p", to_json(report.param.value())},
          {"critical_orbits", orbits},
          {"cycles", cycles},
          {"attracting_or_neutral", report.attracting_or_neutral_count()},
          {"hyperbolic", report.hyperbolic ? json(*report.hyperbolic) : json(nullptr)}};
}

json to_json(const LyapunovEstimate& e) {
  return {{"value", e.value},
          {"method", e.method == LyapunovEstimate::Method::overlap ? "overlap" : "derivative"},
          {"steps", e.steps},
          {"excluded_steps", e.excluded_steps},
          {"saturated", e.saturated},
          {"reliable", e.reliable}};
}

json to_json(const Window& w) {
  return {{"center", to_json(w.center)}, {"width", w.width}, {"height", w.height}, {"cols", w.cols}, {"rows", w.rows}};
}

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw DomainError("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

SpherePoint point_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return SpherePoint::infinity();
  return SpherePoint::finite(complex_from_json(j));
}

Window window_from_json(const json& j) {
  Window w{complex_from_json(j.at("center")), j.at("width").get<double>(), j.at("height").get<double>(),
           j.at("cols").get<int>(), j.at("rows").get<int>()};
  w.validate();
  return w;
}

DensityMatrix4 density4_from_json(const json& j) {
  const json& m = j.is_object() ? j.at("rho") : j;
  if (!m.is_array() || m.size() != 4) throw DomainError("density matrix must have 4 rows");
  Eigen::Matrix4cd rho;
  for (int r = 0; r < 4; ++r) {
    if (!m[r].is_array() || m[r].size() != 4) throw DomainError("density matrix rows must have 4 entries");
    for (int c = 0; c < 4; ++c) rho(r, c) = complex_from_json(m[r][c]);
  }
  return DensityMatrix4(rho);
}

DensityMatrix4 load_density4(const std::filesystem::path& path) { return density4_from_json(read_json(path)); }

void write_pgm(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> gray) {
  if (gray.size() != static_cast<std::size_t>(width) * height) throw DomainError("write_pgm: size mismatch");
  std::ofstream out(path, std::ios::binary);
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
  check_stream(out, path);
}

void write_ppm(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> rgb) {
  if (rgb.size() != 3 * static_cast<std::size_t>(width) * height) throw DomainError("write_ppm: size mismatch");
  std::ofstream out(path, std::ios::binary);
  out << "P6\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
  check_stream(out, path);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "p_re,p_im,step,abs_z,is_infinity\n";
  for (const auto& r : rows) {
    out << format_double(r.p.real()) << ',' << format_double(r.p.imag()) << ',' << r.step << ',';
    if (r.z.is_infinity()) {
      out << ",1\n";
    } else {
      out << format_double(r.z.magnitude()) << ",0\n";
    }
  }
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << "step,purity,fidelity,selection_prob\n";
  for (const auto& r : rows) {
    out << r.step << ',' << format_double(r.purity) << ',' << format_double(r.fidelity) << ','
        << format_double(r.selection_probability) << '\n';
  }
}

void write_orbit_csv(std::ostream& out, const Orbit& orbit) {
  out << "step,re,im,is_infinity\n";
  for (std::size_t k = 0; k < orbit.points.size(); ++k) {
    const auto& z = orbit.points[k];
    out << k << ',';
    if (z.is_infinity()) {
      out << ",,1\n";
    } else {
      out << format_double(z.value().real()) << ',' << format_double(z.value().imag()) << ",0\n";
    }
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  check_stream(out, path);
}

}  // namespace qdyn::io
