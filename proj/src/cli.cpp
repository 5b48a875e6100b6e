#include "qdyn/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qdyn/atlas.hpp"
#include "qdyn/channel.hpp"
#include "qdyn/error.hpp"
#include "qdyn/io.hpp"
#include "qdyn/lyapunov.hpp"
#include "qdyn/orbit.hpp"
#include "qdyn/two_qubit.hpp"

namespace qdyn::cli {

namespace {

using io::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

/// The numeric knobs of a subcommand. Every knob is written to the sidecar
/// and can be reloaded from it with --config; flags given explicitly on the
/// command line take precedence over the loaded values.
class Knobs {
 public:
  explicit Knobs(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& key, T& ref, const std::string& help) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    CLI::Option* opt = app_->add_option(flag, ref, help)->capture_default_str();
    entries_.push_back({key, opt, [&ref](const json& j) { ref = j.get<T>(); }, [&ref] { return json(ref); }});
    return opt;
  }

  void load(const json& config) {
    for (auto& e : entries_) {
      if (e.option->count() == 0 && config.contains(e.key)) e.load(config.at(e.key));
    }
  }

  json dump() const {
    json j = json::object();
    for (const auto& e : entries_) j[e.key] = e.save();
    return j;
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<void(const json&)> load;
    std::function<json()> save;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  std::unique_ptr<Knobs> knobs;
  std::string config_path;
  std::string out_prefix;
  std::function<json(Command&, std::ostream&)> body;  // returns the resolved config

  std::filesystem::path artifact(const std::string& ext) const { return out_prefix + ext; }
};

cplx parse_complex_arg(const std::string& name, const std::string& text) {
  try {
    return io::parse_complex(text);
  } catch (const DomainError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

SpherePoint parse_point_arg(const std::string& name, const std::string& text) {
  try {
    return io::parse_point(text);
  } catch (const DomainError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

Window parse_window(const std::string& text, int cols, int rows) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--window: '" + text + "' is not re_min,re_max,im_min,im_max");
    }
  }
  if (v.size() != 4) throw UsageError("--window: expected re_min,re_max,im_min,im_max");
  if (!(v[1] > v[0]) || !(v[3] > v[2])) throw UsageError("--window: bounds must be increasing");
  try {
    return Window::from_bounds(v[0], v[1], v[2], v[3], cols, rows > 0 ? rows : cols);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--window/--res: ") + e.what());
  }
}

void write_sidecar(const Command& cmd, const json& resolved) {
  json sidecar{{"command", cmd.name},
               {"config", cmd.knobs->dump()},
               {"resolved", resolved},
               {"palette_version", kPaletteVersion}};
  sidecar["config"]["out"] = cmd.out_prefix;
  io::write_text(cmd.artifact(".sidecar.json"), sidecar.dump(2) + "\n");
}

std::string default_prefix(const std::string& command) {
  const char* dir = std::getenv(kOutDirEnv);
  if (dir == nullptr || *dir == '\0') return command;
  return (std::filesystem::path(dir) / command).string();
}

// ---- subcommands ----------------------------------------------------------

struct JuliaKnobs {
  std::string p = "1+0i";
  std::string window = "-2,2,-2,2";
  int res = 1000;
  int res_y = 0;
  int max_iter = 200;
  double eps = kPointTolerance;
};

struct ParamsKnobs {
  std::string window = "0,3,0,3";
  int res = 500;
  int res_y = 0;
  std::string z0 = "0";
  int transient = 1000;
  int max_period = kDefaultMaxPeriod;
  double eps = kPointTolerance;
};

struct SweepKnobs {
  std::string from = "0+0i";
  std::string to = "0+2i";
  int samples = 800;
  int transient = 10000;
  int record = 50;
  std::string z0 = "0";
};

struct CyclesKnobs {
  std::string p = "0+0i";
  int n = 1;
  int max_order = kDefaultMaxPeriodicOrder;
  int max_iter = kDefaultCriticalIterations;
  int max_period = kDefaultMaxPeriod;
  double eps = kPointTolerance;
};

struct LyapunovKnobs {
  std::string p = "0+0i";
  std::string z0 = "1";
  std::string z1;
  double phi = 1e-8;
  int n_max = 100;
  int n = 0;
};

struct OrbitKnobs {
  std::string p = "1+0i";
  std::string z0 = "0";
  int n = 10;
};

struct TwoQubitKnobs {
  std::string rho0;
  std::string diag = "0.4,0.3,0.2,0.1";
  double x1 = 0.0, phi1 = 0.0, x2 = 0.0, phi2 = 0.0;
  int n = 50;
  std::string target;
};

json run_julia(Command& cmd, const JuliaKnobs& k, std::ostream& out) {
  const MapParam p(parse_complex_arg("p", k.p));
  const Window w = parse_window(k.window, k.res, k.res_y);
  JuliaOptions opt;
  opt.max_iter = k.max_iter;
  opt.eps = k.eps;
  const Raster r = render_julia(p, w, opt);
  const auto gray = grayscale_image(r, k.max_iter);
  io::write_pgm(cmd.artifact(".pgm"), w.cols, w.rows, gray);
  out << "wrote " << cmd.artifact(".pgm").string() << '\n';
  return {{"p", io::to_json(p.value())}, {"window", io::to_json(w)}, {"max_iter", k.max_iter}, {"eps", k.eps},
          {"transfer", "floor(255*steps/(max_iter+1)); no convergence = 255"}};
}

json run_params(Command& cmd, const ParamsKnobs& k, std::ostream& out) {
  const Window w = parse_window(k.window, k.res, k.res_y);
  ParameterSpaceOptions opt;
  opt.z0 = parse_point_arg("z0", k.z0);
  opt.transient = k.transient;
  opt.max_period = k.max_period;
  opt.eps = k.eps;
  const Raster r = render_parameter_space(w, opt);
  io::write_ppm(cmd.artifact(".ppm"), w.cols, w.rows, period_image(r, k.max_period));
  out << "wrote " << cmd.artifact(".ppm").string() << '\n';
  return {{"window", io::to_json(w)}, {"z0", io::to_json(opt.z0)}, {"transient", k.transient},
          {"max_period", k.max_period}, {"eps", k.eps},
          {"palette", "hue = period/(max_period+1), full saturation and value; no convergence = white"}};
}

json run_sweep(Command& cmd, const SweepKnobs& k, std::ostream& out) {
  SweepOptions opt;
  opt.from = parse_complex_arg("from", k.from);
  opt.to = parse_complex_arg("to", k.to);
  opt.samples = k.samples;
  opt.transient = k.transient;
  opt.record = k.record;
  opt.z0 = parse_point_arg("z0", k.z0);
  const auto rows = bifurcation_sweep(opt);
  std::ofstream csv(cmd.artifact(".csv"), std::ios::binary);
  io::write_sweep_csv(csv, rows);
  if (!csv) throw Error("cannot write " + cmd.artifact(".csv").string());
  out << "wrote " << cmd.artifact(".csv").string() << '\n';
  return {{"from", io::to_json(opt.from)}, {"to", io::to_json(opt.to)}, {"samples", k.samples},
          {"transient", k.transient}, {"record", k.record}, {"z0", io::to_json(opt.z0)}};
}

json run_cycles(Command& cmd, const CyclesKnobs& k, std::ostream& out) {
  const MapParam p(parse_complex_arg("p", k.p));
  const auto cycles = find_cycles(p, k.n, k.max_order);
  const auto report = critical_orbits(p, {k.max_iter, k.eps, k.max_period});
  json listing = json::array();
  for (const auto& c : cycles) listing.push_back(io::to_json(c));
  json points = json::array();
  for (const auto& c : cycles)
    for (const auto& z : c.points) points.push_back(io::to_json(z));
  const json result{{"p", io::to_json(p.value())}, {"n", k.n},          {"periodic_points", points},
                    {"cycles", listing},            {"critical", io::to_json(report)}};
  io::write_text(cmd.artifact(".json"), result.dump(2) + "\n");
  out << result.dump(2) << '\n';
  return {{"p", io::to_json(p.value())}, {"n", k.n}, {"max_order", k.max_order}, {"max_iter", k.max_iter},
          {"max_period", k.max_period}, {"eps", k.eps}};
}

json run_lyapunov(Command& cmd, const LyapunovKnobs& k, std::ostream& out) {
  const MapParam p(parse_complex_arg("p", k.p));
  const SpherePoint z0 = parse_point_arg("z0", k.z0);
  SpherePoint z1;
  if (!k.z1.empty()) {
    z1 = parse_point_arg("z1", k.z1);
  } else if (z0.is_infinity()) {
    z1 = SpherePoint::finite(1.0 / k.phi);
  } else if (z0.value() == cplx{}) {
    z1 = SpherePoint::finite(k.phi);
  } else {
    z1 = SpherePoint::finite(z0.value() * std::polar(1.0, k.phi));
  }
  const LyapunovEstimate overlap = lyapunov_overlap(p, z0, z1, k.n_max);
  const int n = k.n > 0 ? k.n : std::max(overlap.steps, 1);
  const LyapunovEstimate derivative = lyapunov_derivative(p, z0, n);
  const json result{{"p", io::to_json(p.value())},
                    {"z0", io::to_json(z0)},
                    {"z1", io::to_json(z1)},
                    {"overlap", io::to_json(overlap)},
                    {"derivative", io::to_json(derivative)}};
  io::write_text(cmd.artifact(".json"), result.dump(2) + "\n");
  out << result.dump(2) << '\n';
  return {{"p", io::to_json(p.value())}, {"z0", io::to_json(z0)}, {"z1", io::to_json(z1)},
          {"n_max", k.n_max}, {"n", n}};
}

json run_orbit(Command& cmd, const OrbitKnobs& k, std::ostream& out) {
  const MapParam p(parse_complex_arg("p", k.p));
  const SpherePoint z0 = parse_point_arg("z0", k.z0);
  if (k.n < 0) throw UsageError("--n must be non-negative");
  const Orbit orbit = iterate_orbit(p, z0, k.n);
  std::ostringstream csv;
  io::write_orbit_csv(csv, orbit);
  io::write_text(cmd.artifact(".csv"), csv.str());
  out << csv.str();
  return {{"p", io::to_json(p.value())}, {"z0", io::to_json(z0)}, {"n", k.n}};
}

json run_twoqubit(Command& cmd, const TwoQubitKnobs& k, std::ostream& out) {
  DensityMatrix4 rho0;
  if (!k.rho0.empty()) {
    rho0 = io::load_density4(k.rho0);
  } else {
    Eigen::Vector4d d;
    std::stringstream ss(k.diag);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
      if (i >= 4) throw UsageError("--diag: expected four populations");
      try {
        d[i++] = std::stod(item);
      } catch (const std::exception&) {
        throw UsageError("--diag: '" + item + "' is not a number");
      }
    }
    if (i != 4) throw UsageError("--diag: expected four populations");
    rho0 = DensityMatrix4(d.cast<std::complex<double>>().asDiagonal().toDenseMatrix());
  }
  std::optional<Eigen::Vector4cd> target;
  if (!k.target.empty()) {
    static const std::array<std::string, 4> labels{"00", "01", "10", "11"};
    const auto it = std::find(labels.begin(), labels.end(), k.target);
    if (it == labels.end()) throw UsageError("--target: expected one of 00, 01, 10, 11");
    target = Eigen::Vector4cd::Unit(it - labels.begin());
  }
  const auto rows = purification_trace(rho0, {k.x1, k.phi1}, {k.x2, k.phi2}, k.n, target);
  std::ostringstream csv;
  io::write_trace_csv(csv, rows);
  io::write_text(cmd.artifact(".csv"), csv.str());
  out << "wrote " << cmd.artifact(".csv").string() << '\n';
  json rho = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(io::to_json(rho0(r, c)));
    rho.push_back(row);
  }
  return {{"rho0", rho}, {"first", {k.x1, k.phi1}}, {"second", {k.x2, k.phi2}}, {"n", k.n},
          {"target", k.target.empty() ? "dominant basis state" : k.target}};
}

template <class K>
void register_command(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands, K& knobs,
                      const std::string& name, const std::string& help,
                      const std::function<void(Knobs&, K&)>& bind,
                      json (*body)(Command&, const K&, std::ostream&)) {
  auto cmd = std::make_unique<Command>();
  cmd->name = name;
  cmd->app = app.add_subcommand(name, help);
  cmd->knobs = std::make_unique<Knobs>(cmd->app);
  bind(*cmd->knobs, knobs);
  cmd->app->add_option("--config", cmd->config_path, "Reload knobs from a sidecar JSON file");
  cmd->app->add_option("--out", cmd->out_prefix, "Output path prefix (default $QDYN_OUT_DIR/<command>)");
  cmd->body = [&knobs, body](Command& c, std::ostream& out) { return body(c, knobs, out); };
  commands.push_back(std::move(cmd));
}

int dispatch(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands, std::ostream& out) {
  for (auto& cmd : commands) {
    if (!cmd->app->parsed()) continue;
    if (!cmd->config_path.empty()) {
      json sidecar;
      try {
        sidecar = io::read_json(cmd->config_path);
      } catch (const Error& e) {
        throw UsageError(std::string("--config: ") + e.what());
      }
      if (sidecar.value("command", cmd->name) != cmd->name) {
        throw UsageError("--config: sidecar belongs to command '" + sidecar.value("command", "") + "'");
      }
      const json config = sidecar.value("config", json::object());
      try {
        cmd->knobs->load(config);
      } catch (const json::exception& e) {
        throw UsageError(std::string("--config: ") + e.what());
      }
      if (cmd->out_prefix.empty() && config.contains("out")) cmd->out_prefix = config["out"].get<std::string>();
    }
    if (cmd->out_prefix.empty()) cmd->out_prefix = default_prefix(cmd->name);
    const std::filesystem::path parent = std::filesystem::path(cmd->out_prefix).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    const json resolved = cmd->body(*cmd, out);
    write_sidecar(*cmd, resolved);
    return kExitOk;
  }
  out << app.help();
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional qubit dynamics: the map F_p(z) = (z^2 + p)/(1 - conj(p) z^2) and its squaring channel"};
  app.name("qdyn");
  app.require_subcommand(0, 1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (does not affect output)");

  JuliaKnobs julia;
  ParamsKnobs params;
  SweepKnobs sweep;
  CyclesKnobs cycles;
  LyapunovKnobs lyap;
  OrbitKnobs orbit;
  TwoQubitKnobs two;
  std::vector<std::unique_ptr<Command>> commands;

  register_command<JuliaKnobs>(app, commands, julia, "julia", "Render the dynamical plane (PGM)",
      [](Knobs& b, JuliaKnobs& k) {
        b.add("p", k.p, "Map parameter a+bi");
        b.add("window", k.window, "re_min,re_max,im_min,im_max");
        b.add("res", k.res, "Horizontal resolution");
        b.add("res_y", k.res_y, "Vertical resolution (0: same as --res)");
        b.add("max_iter", k.max_iter, "Iteration cap per pixel");
        b.add("eps", k.eps, "Convergence radius (chordal)");
      }, &run_julia);
  register_command<ParamsKnobs>(app, commands, params, "params", "Render the parameter plane by cycle length (PPM)",
      [](Knobs& b, ParamsKnobs& k) {
        b.add("window", k.window, "re_min,re_max,im_min,im_max over p");
        b.add("res", k.res, "Horizontal resolution");
        b.add("res_y", k.res_y, "Vertical resolution (0: same as --res)");
        b.add("z0", k.z0, "Initial point (default: critical point 0)");
        b.add("transient", k.transient, "Iterations before cycle detection");
        b.add("max_period", k.max_period, "Longest period detected");
        b.add("eps", k.eps, "Cycle detection tolerance (chordal)");
      }, &run_params);
  register_command<SweepKnobs>(app, commands, sweep, "sweep", "Bifurcation sweep of |z| along a segment of p (CSV)",
      [](Knobs& b, SweepKnobs& k) {
        b.add("from", k.from, "Segment start a+bi");
        b.add("to", k.to, "Segment end a+bi");
        b.add("samples", k.samples, "Number of parameter samples");
        b.add("transient", k.transient, "Iterations discarded per sample");
        b.add("record", k.record, "Iterations recorded per sample");
        b.add("z0", k.z0, "Initial point");
      }, &run_sweep);
  register_command<CyclesKnobs>(app, commands, cycles, "cycles", "Periodic points, multipliers and critical orbits (JSON)",
      [](Knobs& b, CyclesKnobs& k) {
        b.add("p", k.p, "Map parameter a+bi");
        b.add("n", k.n, "Solve F^n(z) = z");
        b.add("max_order", k.max_order, "Largest n accepted (polynomial degree 2^n+1)");
        b.add("max_iter", k.max_iter, "Critical orbit length");
        b.add("max_period", k.max_period, "Longest period detected on critical orbits");
        b.add("eps", k.eps, "Cycle detection tolerance (chordal)");
      }, &run_cycles);
  register_command<LyapunovKnobs>(app, commands, lyap, "lyapunov", "Overlap and derivative Lyapunov estimates (JSON)",
      [](Knobs& b, LyapunovKnobs& k) {
        b.add("p", k.p, "Map parameter a+bi");
        b.add("z0", k.z0, "Reference state");
        b.add("z1", k.z1, "Perturbed state (default: z0 rotated by --phi)");
        b.add("phi", k.phi, "Perturbation used when --z1 is absent");
        b.add("n_max", k.n_max, "Longest overlap window");
        b.add("n", k.n, "Derivative estimator steps (0: overlap window length)");
      }, &run_lyapunov);
  register_command<OrbitKnobs>(app, commands, orbit, "orbit", "Print an orbit (CSV)",
      [](Knobs& b, OrbitKnobs& k) {
        b.add("p", k.p, "Map parameter a+bi");
        b.add("z0", k.z0, "Initial point (a+bi or inf)");
        b.add("n", k.n, "Number of iterations");
      }, &run_orbit);
  register_command<TwoQubitKnobs>(app, commands, two, "twoqubit", "Two-qubit purification trace (CSV)",
      [](Knobs& b, TwoQubitKnobs& k) {
        b.add("rho0", k.rho0, "Initial state JSON file (4x4, entries [re,im])");
        b.add("diag", k.diag, "Initial diagonal populations when --rho0 is absent");
        b.add("x1", k.x1, "Rotation angle x of qubit 1");
        b.add("phi1", k.phi1, "Rotation phase of qubit 1");
        b.add("x2", k.x2, "Rotation angle x of qubit 2");
        b.add("phi2", k.phi2, "Rotation phase of qubit 2");
        b.add("n", k.n, "Number of steps");
        b.add("target", k.target, "Fidelity target basis state 00|01|10|11");
      }, &run_twoqubit);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    return dispatch(app, commands, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace qdyn::cli
