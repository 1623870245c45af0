// specbox: configuration-driven driver for the spectral toolbox.
// Tasks: spectrum, heat-trace, fit, decompose, invariants, compare, verify.
// Exit codes: 0 success/pass, 1 usage or config error, 2 verification failure.
#include <Eigen/Core>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "CLI11.hpp"
#include "specbox/identities.hpp"
#include "specbox/invariants.hpp"
#include "specbox/version.hpp"

using json = nlohmann::json;
using namespace specbox;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// anchor semantic errors to the line of the offending key in the raw text
[[noreturn]] void config_fail(const std::string& path, const std::string& raw,
                              const std::string& anchor, const std::string& msg) {
  size_t pos = raw.find("\"" + anchor + "\"");
  int line = 1;
  if (pos != std::string::npos)
    for (size_t i = 0; i < pos; ++i) line += (raw[i] == '\n');
  throw ConfigError(path + ":" + std::to_string(line) + ": " + msg);
}

struct RunConfig {
  BoxProblem box;
  TrigPotential potential;
  CosineSpec potential_spec;
  json params;  // task-specific parameters, may be empty
  json echo;    // canonical config echo
};

uint64_t fnv_hash(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string raw = buf.str();

  json j;
  try {
    j = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }

  if (!j.contains("problem")) config_fail(path, raw, "problem", "missing required field \"problem\"");
  const json& prob = j["problem"];
  if (!prob.contains("sides"))
    config_fail(path, raw, "problem", "missing required field \"sides\" in \"problem\"");
  if (!prob["sides"].is_array() || prob["sides"].empty())
    config_fail(path, raw, "sides", "\"sides\" must be a nonempty array of positive lengths");

  RunConfig cfg;
  for (const auto& s : prob["sides"]) {
    if (!s.is_number() || s.get<double>() <= 0.0)
      config_fail(path, raw, "sides", "\"sides\" entries must be positive numbers");
    cfg.box.sides.push_back(s.get<double>());
  }
  int n = cfg.box.dim();
  if (prob.contains("bc")) {
    if (!prob["bc"].is_array() || static_cast<int>(prob["bc"].size()) != n)
      config_fail(path, raw, "bc", "\"bc\" must list one two-letter entry per dimension");
    for (const auto& e : prob["bc"]) {
      std::string s = e.get<std::string>();
      if (s.size() != 2) config_fail(path, raw, "bc", "each \"bc\" entry must be two of D/N");
      try {
        cfg.box.bc.push_back({bc_from_char(s[0]), bc_from_char(s[1])});
      } catch (const std::exception&) {
        config_fail(path, raw, "bc", "each \"bc\" entry must be two of D/N");
      }
    }
  } else {
    cfg.box.bc.assign(n, {Bc::Dirichlet, Bc::Dirichlet});
  }

  if (!j.contains("potential"))
    config_fail(path, raw, "potential", "missing required field \"potential\"");
  try {
    cfg.potential_spec = CosineSpec::from_json(j["potential"].dump());
    cfg.potential_spec.validate();
  } catch (const std::exception& e) {
    config_fail(path, raw, "potential", std::string("invalid \"potential\": ") + e.what());
  }
  if (cfg.potential_spec.sides != cfg.box.sides)
    config_fail(path, raw, "potential", "\"potential\" sides must match \"problem\" sides");
  cfg.potential = build_potential(cfg.potential_spec);

  cfg.params = j.value("params", json::object());
  if (cfg.params.contains("tolerance") && cfg.params["tolerance"].is_number() &&
      cfg.params["tolerance"].get<double>() <= 0.0)
    config_fail(path, raw, "tolerance", "\"tolerance\" must be positive");

  cfg.echo = json{{"problem", prob}, {"potential", j["potential"]}, {"params", cfg.params}};
  return cfg;
}

std::vector<int> k_vector(const RunConfig& cfg, int fallback) {
  std::vector<int> K(cfg.box.dim(), fallback);
  if (cfg.params.contains("K")) {
    const json& jk = cfg.params["K"];
    if (jk.is_number_integer())
      K.assign(cfg.box.dim(), jk.get<int>());
    else
      K = jk.get<std::vector<int>>();
  }
  return K;
}

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
  return buf;
}

json envelope(const std::string& task, const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["version"] = kVersion;
  j["task"] = task;
  j["config_hash"] = hex64(fnv_hash(cfg.echo.dump()));
  j["generated_at"] = timestamp();
  j["config"] = cfg.echo;
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// ---- tasks ----------------------------------------------------------------

struct Solved {
  std::vector<double> eigenvalues;
  int trusted;
  SpectrumInfo info;
};

Solved solve_from_config(const RunConfig& cfg) {
  Solved s;
  if (cfg.box.dim() == 1) {
    int K = k_vector(cfg, 128)[0];
    Kind1D kind = kind_from_bc(cfg.box.bc[0][0], cfg.box.bc[0][1]);
    Spectrum1D sp = solve_interval(cfg.potential, kind, cfg.box.sides[0], K, false);
    s.eigenvalues = sp.eigenvalues;
    s.trusted = sp.trusted();
    s.info = spectrum_info(sp);
  } else {
    std::vector<int> K = k_vector(cfg, 16);
    SpectrumND sp = solve_interval_nd(cfg.potential, cfg.box, K, false);
    s.eigenvalues = sp.eigenvalues;
    s.trusted = sp.trusted();
    s.info = spectrum_info(sp);
  }
  return s;
}

int task_spectrum(const RunConfig& cfg, const std::string& out_dir) {
  Solved s = solve_from_config(cfg);
  std::vector<double> trusted(s.eigenvalues.begin(), s.eigenvalues.begin() + s.trusted);
  json rep = envelope("spectrum", cfg);
  rep["result"] = {{"eigenvalues", trusted},
                   {"trusted", s.trusted},
                   {"computed", s.eigenvalues.size()}};
  write_file(out_dir + "/spectrum_report.json", rep.dump(2) + "\n");
  write_file(out_dir + "/spectrum.csv", spectrum_csv(trusted));
  std::cout << "spectrum: " << s.trusted << " trusted eigenvalues, lowest "
            << trusted.front() << "\n";
  return 0;
}

HeatTraceSeries series_from_config(const RunConfig& cfg, const Solved& s) {
  std::vector<double> grid;
  if (cfg.params.contains("t_grid"))
    grid = cfg.params["t_grid"].get<std::vector<double>>();
  else
    grid = fit_t_grid(s.info);
  return trace_series(s.info, grid);
}

int task_heat_trace(const RunConfig& cfg, const std::string& out_dir) {
  Solved s = solve_from_config(cfg);
  HeatTraceSeries series = series_from_config(cfg, s);
  json rep = envelope("heat-trace", cfg);
  json pts = json::array();
  for (const auto& p : series)
    pts.push_back({{"t", p.t}, {"value", p.value}, {"tail_bound", p.tail_bound},
                   {"flagged", p.flagged}});
  rep["result"] = {{"series", pts}};
  write_file(out_dir + "/heat_trace_report.json", rep.dump(2) + "\n");
  write_file(out_dir + "/heat_trace.csv", series_csv(series));
  std::cout << "heat-trace: " << series.size() << " points in ["
            << series.front().t << ", " << series.back().t << "]\n";
  return 0;
}

std::vector<double> default_exponents(int dim) {
  std::vector<double> e;
  for (double x = -0.5 * dim; x <= 1.0 + 1e-12; x += 0.5) e.push_back(x);
  return e;
}

int task_fit(const RunConfig& cfg, const std::string& out_dir) {
  Solved s = solve_from_config(cfg);
  HeatTraceSeries series = series_from_config(cfg, s);
  std::vector<double> exps = cfg.params.contains("exponents")
                                 ? cfg.params["exponents"].get<std::vector<double>>()
                                 : default_exponents(cfg.box.dim());
  AsymptoticFit fit = fit_expansion(series, exps);
  std::map<double, double> pred = predicted_coefficients(cfg.box, cfg.potential);

  json rep = envelope("fit", cfg);
  json table = json::array();
  std::ostringstream csv;
  csv.precision(12);
  csv << "exponent,fitted,predicted,deviation\n";
  for (double e : exps) {
    double f = fit.fitted.at(e);
    double p = pred.count(e) ? pred.at(e) : 0.0;
    table.push_back({{"exponent", e},
                     {"fitted", f},
                     {"stderr", fit.stderrs.at(e)},
                     {"predicted", p},
                     {"deviation", std::abs(f - p)}});
    csv << e << "," << f << "," << p << "," << std::abs(f - p) << "\n";
  }
  rep["result"] = {{"table", table}, {"residual", fit.residual}, {"condition", fit.condition}};
  write_file(out_dir + "/fit_report.json", rep.dump(2) + "\n");
  write_file(out_dir + "/fit.csv", csv.str());
  std::cout << "fit: " << exps.size() << " exponents, residual " << fit.residual << "\n";
  return 0;
}

int task_decompose(const RunConfig& cfg, const std::string& out_dir) {
  TrigPotential p0 = cfg.potential.subtract_mean();
  json rep = envelope("decompose", cfg);
  json comps = json::array();
  for (const auto& c : directional_decomposition(p0)) {
    comps.push_back({{"direction", c.direction},
                     {"dual_norm", c.dual_norm},
                     {"series", c.series}});
  }
  json coords = json::array();
  for (int i = 0; i < cfg.box.dim(); ++i) coords.push_back(coordinate_series(p0, i));
  IrrationalityReport ir = irrationality_scan(cfg.box, cfg.params.value("bound", 6));
  rep["result"] = {{"mean", cfg.potential.mean_value()},
                   {"components", comps},
                   {"coordinate_series", coords},
                   {"irrationality", json::parse(ir.to_json())}};
  write_file(out_dir + "/decompose_report.json", rep.dump(2) + "\n");
  std::cout << "decompose: " << comps.size() << " directional components\n";
  return 0;
}

BundleParams bundle_params(const RunConfig& cfg) {
  BundleParams bp;
  bp.J = cfg.params.value("J", bp.J);
  bp.K1d = cfg.params.value("K1d", bp.K1d);
  bp.K_heat = cfg.params.value("K_heat", bp.K_heat);
  bp.max_radii = cfg.params.value("max_radii", bp.max_radii);
  bp.with_heat_fit = cfg.params.value("with_heat_fit", cfg.box.dim() == 2);
  return bp;
}

int task_invariants(const RunConfig& cfg, const std::string& out_dir) {
  InvariantBundle b = bundle(cfg.potential, cfg.box, bundle_params(cfg));
  json rep = envelope("invariants", cfg);
  rep["result"] = {{"bundle", json::parse(b.to_json())},
                   {"separability", json::parse(separability_diagnosis(b).to_json())}};
  write_file(out_dir + "/invariants_report.json", rep.dump(2) + "\n");
  std::cout << "invariants: " << b.directional.size() << " directions, "
            << b.q_d_sums.size() << " radii\n";
  return 0;
}

int task_compare(const RunConfig& cfg, const std::string& path, const std::string& out_dir) {
  if (!cfg.params.contains("second_potential"))
    throw ConfigError(path + ": compare task needs params.second_potential");
  CosineSpec spec2 = CosineSpec::from_json(cfg.params["second_potential"].dump());
  spec2.validate();
  if (spec2.sides != cfg.box.sides)
    throw ConfigError(path + ": second_potential sides must match problem sides");
  BundleParams bp = bundle_params(cfg);
  InvariantBundle ba = bundle(cfg.potential, cfg.box, bp);
  InvariantBundle bb = bundle(build_potential(spec2), cfg.box, bp);
  ComparisonReport r = compare_bundles(ba, bb);
  json rep = envelope("compare", cfg);
  rep["result"] = json::parse(r.to_json());
  write_file(out_dir + "/compare_report.json", rep.dump(2) + "\n");
  std::cout << "compare: " << r.verdict << "\n";
  return 0;
}

int task_verify(const RunConfig& cfg, const std::string& out_dir, int seed) {
  std::vector<double> t_set = cfg.params.contains("t_grid")
                                  ? cfg.params["t_grid"].get<std::vector<double>>()
                                  : default_t_set();
  int points = cfg.params.value("points", 25);
  std::vector<IdentityReport> reports;
  if (cfg.box.dim() == 1) {
    double a = cfg.box.sides[0];
    int K = k_vector(cfg, 64)[0];
    for (Kind1D k : {Kind1D::DD, Kind1D::DN, Kind1D::ND, Kind1D::NN})
      reports.push_back(
          reflection_identity_1d(cfg.potential, a, k, t_set, points, K, 1e-7, seed));
    reports.push_back(trace_pairing_identity(cfg.potential, a, t_set, K));
    reports.push_back(telescoped_dirichlet_trace(cfg.potential, a, t_set, K));
  } else if (cfg.box.dim() == 2) {
    int K = k_vector(cfg, 12)[0];
    reports.push_back(
        torus_image_identity_2d(cfg.potential, cfg.box, t_set, points, K, 1e-6, seed));
    bool all_d = true;
    for (const auto& f : cfg.box.bc) all_d &= (f[0] == Bc::Dirichlet && f[1] == Bc::Dirichlet);
    if (all_d) reports.push_back(trace_quadrupling_2d(cfg.potential, cfg.box, t_set, K));
    reports.push_back(
        factorization_identity(cfg.potential, cfg.box, {1, 0}, t_set, points, K, 1e-8, seed));
    reports.push_back(
        factorization_identity(cfg.potential, cfg.box, {0, 1}, t_set, points, K, 1e-8, seed));
  } else {
    throw ConfigError("verify task supports 1D and 2D problems");
  }
  json rep = envelope("verify", cfg);
  rep["result"] = json::parse(suite_json(reports));
  write_file(out_dir + "/verify_report.json", rep.dump(2) + "\n");
  for (const auto& r : reports)
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  residual " << r.residual
              << " (tol " << r.tolerance << ")\n";
  return suite_pass(reports) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral toolbox for -Delta + q on boxes"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int threads = 0, seed = 1;
  app.add_option("--config", config_path, "path to a JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory for reports");
  app.add_option("--threads", threads, "Eigen thread count (0 = library default)");
  app.add_option("--seed", seed, "start index for sample-point sequences");

  const char* tasks[] = {"spectrum",   "heat-trace", "fit",    "decompose",
                         "invariants", "compare",    "verify"};
  for (const char* t : tasks) app.add_subcommand(t)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (threads > 0) Eigen::setNbThreads(threads);
  std::string task = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = load_config(config_path);
    if (task == "spectrum") return task_spectrum(cfg, out_dir);
    if (task == "heat-trace") return task_heat_trace(cfg, out_dir);
    if (task == "fit") return task_fit(cfg, out_dir);
    if (task == "decompose") return task_decompose(cfg, out_dir);
    if (task == "invariants") return task_invariants(cfg, out_dir);
    if (task == "compare") return task_compare(cfg, config_path, out_dir);
    if (task == "verify") return task_verify(cfg, out_dir, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
