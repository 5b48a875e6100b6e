#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "qdyn/error.hpp"
#include "qdyn/io.hpp"

using namespace qdyn;
using namespace qdyn::io;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "qdyn_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("parse_complex accepts the usual spellings") {
  CHECK(parse_complex("1+2i") == cplx(1, 2));
  CHECK(parse_complex("1-2i") == cplx(1, -2));
  CHECK(parse_complex("-0.5") == cplx(-0.5, 0));
  CHECK(parse_complex("3i") == cplx(0, 3));
  CHECK(parse_complex("-i") == cplx(0, -1));
  CHECK(parse_complex("i") == cplx(0, 1));
  CHECK(parse_complex("1e-3+2.5e2i") == cplx(1e-3, 250));
  CHECK(parse_complex("  2-i ") == cplx(2, -1));
  CHECK(parse_complex("0+0i") == cplx(0, 0));
  CHECK(parse_point("inf").is_infinity());
  CHECK(parse_point("0.25").value() == cplx(0.25, 0));
}

TEST_CASE("parse_complex rejects malformed input") {
  for (const char* bad : {"", "abc", "1+", "1+2", "1+2j", "1++2i", "nan", "inf", "1e999", "2ii", "1 2i"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_complex(bad), DomainError);
  }
}

TEST_CASE("format_complex round-trips") {
  for (cplx z : {cplx(0.1, -0.2), cplx(1.0 / 3, 1e-300), cplx(-7, 0), cplx(0, 2)}) {
    CHECK(parse_complex(format_complex(z)) == z);
  }
  CHECK(format_complex({1, 2}) == "1+2i");
  CHECK(format_point(SpherePoint::infinity()) == "inf");
}

TEST_CASE("cycle and critical report JSON") {
  const MapParam p({1, 0});
  const json j = to_json(critical_orbits(p));
  CHECK(j["p"] == json::array({1.0, 0.0}));
  CHECK(j["hyperbolic"] == true);
  CHECK(j["attracting_or_neutral"] == 1);
  REQUIRE(j["critical_orbits"].size() == 2);
  CHECK(j["critical_orbits"][1]["start"] == "inf");
  const json& cycle = j["critical_orbits"][0]["cycle"];
  CHECK(cycle["period"] == 2);
  CHECK(cycle["class"] == "superattracting");
  CHECK(cycle["points"].size() == 2);

  const json withheld = to_json(critical_orbits(MapParam({-1, 0.9})));
  CHECK(withheld["hyperbolic"].is_null());

  Cycle parabolic{1, {SpherePoint::finite(0.5)}, -1.0, Stability::neutral_irrational};
  CHECK(to_json(parabolic)["class"] == "neutral-irrational");
}

TEST_CASE("points and windows round-trip through JSON") {
  CHECK(point_from_json(to_json(SpherePoint::infinity())).is_infinity());
  CHECK(point_from_json(to_json(SpherePoint::finite({0.3, -4}))).value() == cplx(0.3, -4));
  CHECK_THROWS_AS(complex_from_json(json::array({1})), DomainError);
  CHECK_THROWS_AS(complex_from_json(json("1+2i")), DomainError);

  const Window w = Window::from_bounds(-1, 2, 0, 3, 30, 20);
  const Window r = window_from_json(to_json(w));
  CHECK(r.center == w.center);
  CHECK(r.width == w.width);
  CHECK(r.rows == 20);
}

TEST_CASE("density matrices load and validate") {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(json::array({r == c ? 0.25 : 0.0, 0.0}));
    rows.push_back(row);
  }
  CHECK(density4_from_json(rows).purity() == doctest::Approx(0.25));
  CHECK(density4_from_json(json{{"rho", rows}}).purity() == doctest::Approx(0.25));

  json bad_trace = rows;
  bad_trace[0][0] = json::array({0.5, 0.0});
  CHECK_THROWS_AS(density4_from_json(bad_trace), DomainError);
  json not_hermitian = rows;
  not_hermitian[0][1] = json::array({0.1, 0.0});
  CHECK_THROWS_AS(density4_from_json(not_hermitian), DomainError);
  json short_rows = rows;
  short_rows.erase(3);
  CHECK_THROWS_AS(density4_from_json(short_rows), DomainError);

  const auto path = scratch("rho.json");
  write_text(path, rows.dump());
  CHECK(load_density4(path).trace_error() < 1e-15);
}

TEST_CASE("PGM and PPM headers") {
  const auto pgm = scratch("a.pgm");
  write_pgm(pgm, 3, 2, std::vector<std::uint8_t>{0, 1, 2, 3, 4, 255});
  const std::string g = slurp(pgm);
  CHECK(g.substr(0, 11) == "P5\n3 2\n255\n");
  CHECK(g.size() == 11 + 6);
  CHECK(static_cast<unsigned char>(g.back()) == 255);

  const auto ppm = scratch("a.ppm");
  write_ppm(ppm, 2, 1, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
  CHECK(slurp(ppm).substr(0, 11) == "P6\n2 1\n255\n");
  CHECK(slurp(ppm).size() == 17);

  CHECK_THROWS_AS(write_pgm(pgm, 3, 3, std::vector<std::uint8_t>(4)), DomainError);
}

TEST_CASE("CSV writers") {
  std::ostringstream sweep;
  const std::vector<SweepRow> rows{{{0, 1.5}, 10001, SpherePoint::finite({3, 4})},
                                   {{0, 1.5}, 10002, SpherePoint::infinity()}};
  write_sweep_csv(sweep, rows);
  CHECK(sweep.str() == "p_re,p_im,step,abs_z,is_infinity\n0,1.5,10001,5,0\n0,1.5,10002,,1\n");

  std::ostringstream trace;
  write_trace_csv(trace, std::vector<TraceRow>{{1, 0.5, 0.25, 0.75}});
  CHECK(trace.str() == "step,purity,fidelity,selection_prob\n1,0.5,0.25,0.75\n");

  std::ostringstream orbit;
  write_orbit_csv(orbit, iterate_orbit(MapParam({1, 0}), SpherePoint::finite(0), 2));
  CHECK(orbit.str() == "step,re,im,is_infinity\n0,0,0,0\n1,1,0,0\n2,,,1\n");
}
