#include "app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "bladegauge/darboux.hpp"
#include "bladegauge/dynamics.hpp"
#include "bladegauge/embedded.hpp"
#include "bladegauge/em.hpp"
#include "bladegauge_generated.hpp"
#include "scenario.hpp"

namespace bladegauge::app {

namespace {

std::string schema_key(std::string_view command) {
  std::string key(command);
  for (char& c : key)
    if (c == '-') c = '_';
  return key;
}

std::vector<Point> sample_box(int count, const std::vector<std::pair<double, double>>& box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    Point x(static_cast<Eigen::Index>(box.size()));
    for (std::size_t k = 0; k < box.size(); ++k)
      x(static_cast<Eigen::Index>(k)) = std::uniform_real_distribution<double>(box[k].first, box[k].second)(rng);
    out.push_back(x);
  }
  return out;
}

RVector to_vector(const json& a) {
  RVector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string Check::status() const {
  if (ok()) return expect_ok ? "pass" : "unexpected-pass";
  return expect_ok ? "fail" : "expected-fail";
}

Exit Outcome::exit() const {
  for (const Check& c : checks)
    if (!c.acceptable()) return Exit::check_failed;
  return Exit::ok;
}

std::string_view version() { return kVersion; }

const json& schema_for(std::string_view name) {
  static const std::map<std::string, json, std::less<>> parsed = [] {
    std::map<std::string, json, std::less<>> m;
    for (const auto& [key, text] : kSchemas) {
      json s = json::parse(text);
      check_schema_keywords(s, std::string(key));
      m.emplace(std::string(key), std::move(s));
    }
    return m;
  }();
  const auto it = parsed.find(schema_key(name));
  if (it == parsed.end()) throw std::logic_error("no schema named '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> schema_names() {
  std::vector<std::string> out;
  for (const auto& [key, text] : kSchemas) out.emplace_back(key);
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json defaults_for(std::string_view command) {
  const Tolerances d = default_tolerances();
  const json tol = {{"algebraic", d.algebraic}, {"analytic", d.analytic}, {"fd_factor", d.fd_factor},
                    {"nested_fd_factor", d.nested_fd_factor}};
  const std::string key = schema_key(command);
  json cfg;
  if (key == "verify") {
    cfg = {{"scenario", "all"}, {"g", 0.5}, {"seed", 1}, {"frames", 20}};
  } else if (key == "residuals") {
    cfg = {{"scenario", "planewave"}, {"eq", "ym"}, {"k", {1, 0, 0, 1}}, {"n", {0, 1, 0, 0}},
           {"g", 0.5}, {"points", 16}, {"seed", 1}};
  } else if (key == "sigma_flow") {
    cfg = {{"g", 0.5}, {"theta_cells", 12}, {"phi_cells", 16}, {"theta_band", {0.6, 2.5}}, {"steps", 500}, {"eta", 0.02}};
  } else if (key == "darboux") {
    cfg = json::object();
  } else if (key == "embedded") {
    cfg = {{"surface", "sphere"}, {"a", 1.0}, {"rmaj", 2.0}, {"rmin", 1.0}, {"samples", 8}};
  } else {
    throw UsageError("unknown command '" + std::string(command) + "'");
  }
  cfg["tolerances"] = tol;
  cfg["output"] = {{"report", "-"}};
  return cfg;
}

json resolve_config(std::string_view command, const std::string& config_path, const json& overrides) {
  json cfg = defaults_for(command);
  if (!config_path.empty()) {
    const json file = load_json_file(config_path);
    if (!file.is_object()) throw UsageError(config_path + ": top-level value must be an object");
    cfg.merge_patch(file);
  }
  cfg.merge_patch(overrides);
  const std::vector<SchemaViolation> bad = validate(schema_for(command), cfg);
  if (!bad.empty()) {
    std::string msg = "invalid configuration";
    for (const SchemaViolation& v : bad) msg += "\n  " + (v.pointer.empty() ? std::string("/") : v.pointer) + ": " + v.message;
    throw UsageError(msg);
  }
  return cfg;
}

Tolerances tolerances_from(const json& cfg) {
  Tolerances t = default_tolerances();
  const json tol = cfg.value("tolerances", json::object());
  t.algebraic = tol.value("algebraic", t.algebraic);
  t.analytic = tol.value("analytic", t.analytic);
  t.fd_factor = tol.value("fd_factor", t.fd_factor);
  t.nested_fd_factor = tol.value("nested_fd_factor", t.nested_fd_factor);
  return t;
}

namespace {

std::string canonical_equation(const std::string& eq) {
  if (eq == "maxmod") return "maxwmod";
  if (eq == "shape") return "shape-ym";
  return eq;
}

std::string dump_path(const json& cfg) { return cfg.at("output").value("dump", ""); }

// Residual of `eq` on a loaded scenario, as a function of (point, index).
std::function<CMatrix(const Point&, int)> scenario_equation(const Scenario& s, const std::string& eq, std::vector<int>& indices) {
  auto unavailable = [&](const std::string& why) {
    return UsageError("equation '" + eq + "' is not available for scenario '" + s.label + "' (" + why + ")");
  };
  if (s.spherical && eq != "veq") throw unavailable("monopole coordinates support veq only");
  std::vector<int> axes(static_cast<std::size_t>(s.dim));
  for (int i = 0; i < s.dim; ++i) axes[static_cast<std::size_t>(i)] = i;
  const Spacetime st = s.st;
  if (eq == "ym") {
    if (!s.potential && !s.frame) throw unavailable("needs a potential or a frame");
    const GaugePotential a = s.potential ? *s.potential : extract_potential(*s.frame);
    indices = axes;
    return [a, st](const Point& x, int nu) { return ym_residual(a, st, nu, x); };
  }
  if (eq == "maxwmod") {
    if (!s.em) throw unavailable("needs a closed-form N = 2 frame such as the plane wave");
    const EmFrameParams p = *s.em;
    return [p, st](const Point& x, int) { return maxwell_mod_residual(p, st, x); };
  }
  if (eq == "veq") {
    if (!s.frame || (!s.potential && !s.em)) throw unavailable("needs a frame and a potential to compare with");
    const GaugePotential lifted = extract_potential(*s.frame);
    const GaugePotential given = s.potential ? *s.potential : em_potential(*s.em);
    indices = axes;
    return [lifted, given](const Point& x, int mu) { return CMatrix(lifted.at(mu, x) - given.at(mu, x)); };
  }
  if (!s.frame) throw unavailable("needs a frame");
  const Frame v = *s.frame;
  if (eq == "modified") return [v, st](const Point& x, int) { return modified_eom_residual(v, st, x); };
  const RotatingBlade r = blade_from_frame(v);
  if (eq == "shape-ym") {
    indices = axes;
    return [r, st](const Point& x, int nu) { return shape_gauge_ym_residual(r, st, nu, x); };
  }
  return [r, st](const Point& x, int) { return sigma_eom_residual(r, st, x); };
}

}  // namespace

Outcome run_residuals(const json& cfg) {
  const Tolerances t = tolerances_from(cfg);
  const json& scenario = cfg.at("scenario");
  const std::string eq = canonical_equation(cfg.at("eq"));
  const int count = cfg.at("points");
  const std::uint64_t seed = cfg.at("seed");
  const double h2 = kDefaultStep * kDefaultStep;
  const std::string dump = dump_path(cfg);

  std::vector<Point> pts;
  std::vector<int> indices{-1};  // summed equations carry index -1
  std::function<CMatrix(const Point&, int)> fn;
  double tol = (eq == "modified" ? t.nested_fd_factor : t.fd_factor) * h2;
  std::string label;
  std::optional<RotatingBlade> blade;

  if (scenario == "monopole") {
    label = "monopole";
    if (eq != "veq") throw UsageError("equation '" + eq + "' is not available for scenario 'monopole' (available: veq)");
    const double g = cfg.at("g");
    pts = cfg.contains("grid") ? parse_grid(cfg.at("grid"), 3) : sample_box(count, {{0.5, 2.0}, {0.3, kPi - 0.3}, {0.0, 2 * kPi}}, seed);
    indices = {0, 1, 2};
    const GaugePotential ap = monopole_potential(g, Patch::plus);
    const GaugePotential am = monopole_potential(g, Patch::minus);
    const GaugePotential lp = extract_potential(em_frame(monopole_params(g, Patch::plus)));
    const GaugePotential lm = extract_potential(em_frame(monopole_params(g, Patch::minus)));
    fn = [ap, am, lp, lm](const Point& x, int mu) {
      return CMatrix(x(1) <= 0.5 * kPi ? lp.at(mu, x) - ap.at(mu, x) : lm.at(mu, x) - am.at(mu, x));
    };
    if (!dump.empty()) blade = monopole_blade_glue(g, 2).blade;
  } else {
    Scenario s;
    if (scenario.is_object()) {
      s = load_scenario(scenario, "scenario");
    } else if (scenario == "planewave") {
      s = plane_wave_scenario(to_vector(cfg.at("k")), to_vector(cfg.at("n")));
    } else {
      const std::string path = scenario;
      std::ifstream probe(path);
      if (!probe) throw UsageError("unknown scenario '" + path + "': not planewave, monopole or a readable file");
      s = load_scenario(load_json_file(path), path);
    }
    label = s.label;
    fn = scenario_equation(s, eq, indices);
    pts = cfg.contains("grid") ? parse_grid(cfg.at("grid"), s.dim) : sample_box(count, s.box, seed);
    if (!dump.empty()) {
      if (!s.frame) throw UsageError("--dump needs a scenario with a frame");
      blade = blade_from_frame(*s.frame);
    }
  }
  if (cfg.contains("tolerance")) tol = cfg.at("tolerance");

  const ResidualReport rep = collect_residuals(eq, pts, static_cast<int>(indices.size()), [&](const Point& x, int i) {
    return fn(x, indices[static_cast<std::size_t>(i)]);
  });
  Outcome out;
  out.checks.push_back({"residuals." + eq, rep.max, tol});
  if (blade) out.dump = blade_dump(*blade, pts);
  out.result = {{"equation", eq}, {"scenario", label}, {"points", pts.size()}, {"max", rep.max},
                {"mean", rep.mean}, {"tolerance", tol}};
  const int dim = pts.empty() ? 0 : static_cast<int>(pts.front().size());
  out.columns.push_back("point");
  for (int i = 0; i < dim; ++i) out.columns.push_back("x" + std::to_string(i));
  out.columns.push_back("index");
  out.columns.push_back("norm");
  for (std::size_t r = 0; r < rep.norms.size(); ++r) {
    const std::size_t p = r / indices.size();
    std::vector<double> row{static_cast<double>(p)};
    for (int i = 0; i < dim; ++i) row.push_back(pts[p](i));
    row.push_back(static_cast<double>(indices[static_cast<std::size_t>(rep.index[r])]));
    row.push_back(rep.norms[r]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

Outcome run_sigma_flow(const json& cfg) {
  const Tolerances t = tolerances_from(cfg);
  BladeLattice lat;
  if (cfg.contains("init")) {
    const std::string path = cfg.at("init");
    lat = load_lattice(load_json_file(path), path);
  } else {
    const json band = cfg.at("theta_band");
    if (band[0].get<double>() >= band[1].get<double>()) throw UsageError("/theta_band: lower edge must be below the upper edge");
    lat = monopole_band_lattice(cfg.at("g"), cfg.at("theta_cells"), cfg.at("phi_cells"), band[0], band[1]);
  }
  Outcome out;
  out.columns = {"step", "energy"};
  FlowResult res;
  try {
    res = sigma_flow(lat, cfg.at("steps"), cfg.at("eta"));
  } catch (const DivergenceError& e) {
    out.checks.push_back({"sigma_flow.no_divergence", 1.0, 0.0});
    out.result = {{"diverged", true}, {"message", e.what()}};
    return out;
  }
  double max_rise = 0.0;
  for (std::size_t i = 1; i < res.energy.size(); ++i) max_rise = std::max(max_rise, res.energy[i] - res.energy[i - 1]);
  for (std::size_t i = 0; i < res.energy.size(); ++i) out.rows.push_back({static_cast<double>(i), res.energy[i]});
  out.checks.push_back({"sigma_flow.monotone", max_rise, 0.0});
  out.checks.push_back({"sigma_flow.involution", res.max_involution_defect, t.algebraic});
  out.checks.push_back({"sigma_flow.hermitian", res.max_hermiticity_defect, t.algebraic});
  if (!dump_path(cfg).empty()) out.dump = lattice_to_json(res.final);
  out.result = {{"diverged", false}, {"sites", lat.size()}, {"initial_energy", res.energy.front()},
                {"final_energy", res.energy.back()}, {"max_rise", max_rise}};
  return out;
}

Outcome run_darboux(const json& cfg) {
  const Tolerances t = tolerances_from(cfg);
  const std::string path = cfg.at("input");
  const json input = load_json_file(path);
  require_valid("darboux_input", input, path);
  const int dim = input.at("dim");
  std::vector<std::pair<double, double>> box(static_cast<std::size_t>(dim), {-1.0, 1.0});
  if (input.contains("domain")) {
    const json& d = input.at("domain");
    if (static_cast<int>(d.size()) != dim) throw UsageError(path + ": /domain needs one [lo, hi] interval per coordinate");
    for (int i = 0; i < dim; ++i) {
      box[static_cast<std::size_t>(i)] = {d[static_cast<std::size_t>(i)][0], d[static_cast<std::size_t>(i)][1]};
      if (!(box[static_cast<std::size_t>(i)].first < box[static_cast<std::size_t>(i)].second))
        throw UsageError(path + ": /domain/" + std::to_string(i) + ": empty interval");
    }
  }
  DarbouxData data;
  DarbouxReport rep;
  try {
    data = darboux_from_json(dim, input.at("pairs"), "");
    rep = darboux_report(data, sample_box(input.value("samples", 32), box, input.value("seed", 1)));
  } catch (const UsageError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const ParameterError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const DimensionError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const DomainError& e) {
    throw UsageError(path + ": " + e.what());
  }
  Outcome out;
  out.checks.push_back({"darboux.frame_equation", rep.max_residual, t.fd_factor * kDefaultStep * kDefaultStep});
  out.checks.push_back({"darboux.normalization", rep.max_norm_defect, t.analytic});
  out.checks.push_back({"darboux.rank", static_cast<double>(rep.measured_rank), static_cast<double>(data.r()), "=="});
  out.result = {{"N", rep.big_n}, {"measured_rank", rep.measured_rank}, {"expected_rank", data.r()},
                {"max_residual", rep.max_residual}, {"max_norm_defect", rep.max_norm_defect},
                {"near_singular_points", rep.near_singular_points.size()}};
  return out;
}

Outcome run_embedded(const json& cfg) {
  const Tolerances t = tolerances_from(cfg);
  const std::string surface = cfg.at("surface");
  const double a = cfg.at("a");
  const double rmaj = cfg.at("rmaj");
  const double rmin = cfg.at("rmin");
  const int n = cfg.at("samples");
  Embedding e;
  try {
    e = builtin_embedding(surface, a, rmaj, rmin);
  } catch (const ParameterError& err) {
    throw UsageError(err.what());
  }
  std::pair<double, double> u{-1.0, 1.0}, v{-1.0, 1.0};
  if (surface == "sphere") {
    u = {0.2, kPi - 0.2};
    v = {0.0, 2 * kPi};
  } else if (surface == "torus") {
    u = {0.0, 2 * kPi};
    v = {0.0, 2 * kPi};
  }
  auto expected = [&](const Point& x) {
    if (surface == "sphere") return 1.0 / (a * a);
    if (surface == "torus") return std::cos(x(1)) / (rmin * (rmaj + rmin * std::cos(x(1))));
    return 0.0;
  };
  Outcome out;
  out.columns = {"u", "v", "g00", "g01", "g11", "riemann_0101", "gauss_curvature", "expected_curvature",
                 "shape_identity_residual", "curvature_gap"};
  double err = 0.0, shape = 0.0, gap = 0.0, mean = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Point x(2);
      x << u.first + (u.second - u.first) * (i + 0.5) / n, v.first + (v.second - v.first) * (j + 0.5) / n;
      const RMatrix g = induced_metric(e, x);
      const double k = gauss_curvature(e, x);
      const double s01 = embedded_shape_identity_residual(e, x, 0, 1);
      const double gp = curvature_discrepancy(e, x, 0, 1);
      err = std::max(err, std::abs(k - expected(x)));
      shape = std::max(shape, s01);
      gap = std::max(gap, gp);
      mean += k / (n * n);
      out.rows.push_back({x(0), x(1), g(0, 0), g(0, 1), g(1, 1), riemann_component(e, x, 0, 1, 0, 1), k, expected(x), s01, gp});
    }
  }
  const double fd = t.fd_factor * kDefaultStep * kDefaultStep;
  out.checks.push_back({"embedded.curvature_error", err, 1e-6});
  out.checks.push_back({"embedded.shape_identity", shape, fd});
  out.checks.push_back({"embedded.curvature_expressions", gap, fd});
  out.result = {{"surface", surface}, {"mean_gauss_curvature", mean}, {"max_curvature_error", err}};
  return out;
}

Outcome run_command(std::string_view command, const json& cfg) {
  const std::string key = schema_key(command);
  if (key == "verify") return run_verify(cfg);
  if (key == "residuals") return run_residuals(cfg);
  if (key == "sigma_flow") return run_sigma_flow(cfg);
  if (key == "darboux") return run_darboux(cfg);
  if (key == "embedded") return run_embedded(cfg);
  throw UsageError("unknown command '" + std::string(command) + "'");
}

json make_report(std::string_view command, const json& cfg, const Outcome& out) {
  json checks = json::array();
  std::vector<std::string> failing;
  for (const Check& c : out.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"relation", c.relation},
                      {"expected", c.expect_ok ? "pass" : "fail"}, {"status", c.status()}});
    if (!c.acceptable()) failing.push_back(c.name);
  }
  json report = {{"tool", "bladegauge"},
                 {"version", std::string(version())},
                 {"command", std::string(command)},
                 {"config", cfg},
                 {"fd_step", kDefaultStep},
                 {"checks", checks},
                 {"failing", failing},
                 {"passed", failing.empty()},
                 {"result", out.result}};
  if (!out.columns.empty()) report["table"] = {{"columns", out.columns}, {"rows", out.rows}};
  return report;
}

void stamp_report(json& report) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  report["run"] = {{"timestamp", buf}, {"threads", thread_count()}};
}

std::string to_csv(const Outcome& out) {
  std::string s;
  for (std::size_t i = 0; i < out.columns.size(); ++i) s += (i ? "," : "") + out.columns[i];
  s += "\n";
  for (const std::vector<double>& row : out.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_number(row[i]);
    s += "\n";
  }
  return s;
}

}  // namespace bladegauge::app
