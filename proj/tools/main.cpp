#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "app.hpp"

using namespace bladegauge::app;

namespace {

struct Flags {
  std::string config;
  std::string report;
  std::string csv;
  std::string scenario;
  std::string eq;
  std::string input;
  std::string surface;
  std::string grid;
  std::string init;
  std::string dump;
  std::vector<double> k, n, band;
  double g = 0, tolerance = 0, eta = 0, a = 0, rmaj = 0, rmin = 0;
  long long seed = 0, frames = 0, points = 0, theta_cells = 0, phi_cells = 0, steps = 0, samples = 0;
};

// Options the user did not pass stay out of the overrides, so config files
// and defaults show through.
template <typename T>
void take(json& into, const CLI::Option* opt, const std::string& key, const T& value) {
  if (opt != nullptr && opt->count() > 0) into[key] = value;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError(path + ": cannot write");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotating-blade gauge theory checks"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1, 1);
  Flags f;

  std::map<std::string, std::map<std::string, CLI::Option*>> opts;
  auto common = [&](CLI::App* sub, bool table) {
    auto& o = opts[sub->get_name()];
    o["config"] = sub->add_option("--config", f.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
    o["report"] = sub->add_option("--report", f.report, "JSON report path, - for stdout (default)");
    if (table) o["csv"] = sub->add_option("--csv", f.csv, "CSV table path, - for stdout");
  };

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suites");
  common(verify, false);
  opts["verify"]["scenario"] = verify->add_option("scenario", f.scenario, "all, monopole, frames, planewave, darboux or embedded");
  opts["verify"]["g"] = verify->add_option("--g", f.g, "Monopole charge");
  opts["verify"]["seed"] = verify->add_option("--seed", f.seed);
  opts["verify"]["frames"] = verify->add_option("--frames", f.frames, "Number of random frames");

  CLI::App* residuals = app.add_subcommand("residuals", "Dump equation residuals at sample points");
  common(residuals, true);
  auto& ro = opts["residuals"];
  ro["scenario"] = residuals->add_option("--scenario", f.scenario, "planewave, monopole or a scenario JSON file");
  ro["eq"] = residuals->add_option("--eq", f.eq, "ym, modified, maxwmod (maxmod), veq, shape-ym (shape) or sigma");
  ro["grid"] = residuals->add_option("--grid", f.grid, "lo:hi:n per axis, comma separated; replaces random points");
  ro["dump"] = residuals->add_option("--dump", f.dump, "Write R at the sample points as JSON");
  ro["k"] = residuals->add_option("--k", f.k, "Wave covector k_mu")->delimiter(',');
  ro["n"] = residuals->add_option("--n", f.n, "Polarization n_mu")->delimiter(',');
  ro["g"] = residuals->add_option("--g", f.g);
  ro["points"] = residuals->add_option("--points", f.points);
  ro["seed"] = residuals->add_option("--seed", f.seed);
  ro["tolerance"] = residuals->add_option("--tolerance", f.tolerance, "Pass threshold for the max residual");

  CLI::App* flow = app.add_subcommand("sigma-flow", "Gradient flow of the lattice sigma model on a monopole band");
  common(flow, true);
  auto& fo = opts["sigma-flow"];
  fo["g"] = flow->add_option("--g", f.g);
  fo["theta_cells"] = flow->add_option("--theta-cells", f.theta_cells);
  fo["phi_cells"] = flow->add_option("--phi-cells", f.phi_cells);
  fo["theta_band"] = flow->add_option("--theta-band", f.band, "lo,hi")->delimiter(',');
  fo["steps"] = flow->add_option("--steps", f.steps);
  fo["eta"] = flow->add_option("--eta", f.eta);
  fo["init"] = flow->add_option("--init", f.init, "Initial lattice JSON; replaces the monopole band");
  fo["dump"] = flow->add_option("--dump", f.dump, "Write the final lattice as JSON");

  CLI::App* darboux = app.add_subcommand("darboux", "Build the Darboux frame for an abelian potential");
  common(darboux, false);
  opts["darboux"]["input"] = darboux->add_option("--input", f.input, "Pairs file (see schemas/darboux_input.schema.json)");

  CLI::App* embedded = app.add_subcommand("embedded", "Curvature table for a builtin surface");
  common(embedded, true);
  auto& eo = opts["embedded"];
  eo["surface"] = embedded->add_option("--surface", f.surface, "plane, sphere, cylinder or torus");
  eo["a"] = embedded->add_option("--a", f.a, "Sphere radius");
  eo["rmaj"] = embedded->add_option("--rmaj", f.rmaj, "Torus major radius");
  eo["rmin"] = embedded->add_option("--rmin", f.rmin, "Torus minor radius");
  eo["samples"] = embedded->add_option("--samples", f.samples, "Grid points per chart axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(Exit::usage);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  auto& o = opts[command];
  auto opt = [&o](const std::string& key) -> const CLI::Option* {
    const auto it = o.find(key);
    return it == o.end() ? nullptr : it->second;
  };
  json over = json::object();
  take(over, opt("scenario"), "scenario", f.scenario);
  take(over, opt("eq"), "eq", f.eq);
  take(over, opt("k"), "k", f.k);
  take(over, opt("n"), "n", f.n);
  take(over, opt("g"), "g", f.g);
  take(over, opt("seed"), "seed", f.seed);
  take(over, opt("frames"), "frames", f.frames);
  take(over, opt("points"), "points", f.points);
  take(over, opt("tolerance"), "tolerance", f.tolerance);
  take(over, opt("theta_cells"), "theta_cells", f.theta_cells);
  take(over, opt("phi_cells"), "phi_cells", f.phi_cells);
  take(over, opt("theta_band"), "theta_band", f.band);
  take(over, opt("steps"), "steps", f.steps);
  take(over, opt("eta"), "eta", f.eta);
  take(over, opt("input"), "input", f.input);
  take(over, opt("grid"), "grid", f.grid);
  take(over, opt("init"), "init", f.init);
  take(over, opt("surface"), "surface", f.surface);
  take(over, opt("a"), "a", f.a);
  take(over, opt("rmaj"), "rmaj", f.rmaj);
  take(over, opt("rmin"), "rmin", f.rmin);
  take(over, opt("samples"), "samples", f.samples);
  json output = json::object();
  take(output, opt("report"), "report", f.report);
  take(output, opt("csv"), "csv", f.csv);
  take(output, opt("dump"), "dump", f.dump);
  if (!output.empty()) over["output"] = output;

  try {
    const json cfg = resolve_config(command, f.config, over);
    const std::string report_path = cfg.at("output").value("report", "-");
    const std::string csv_path = cfg.at("output").value("csv", "");
    const std::string dump_path = cfg.at("output").value("dump", "");
    if (report_path == "-" && csv_path == "-") throw UsageError("--csv - needs --report FILE (both would go to stdout)");
    if (dump_path == "-" && (report_path == "-" || csv_path == "-")) throw UsageError("--dump - needs the report and CSV in files");

    const Outcome out = run_command(command, cfg);
    json report = make_report(command, cfg, out);
    stamp_report(report);
    write_text(report_path, report.dump(2) + "\n");
    if (!csv_path.empty()) write_text(csv_path, to_csv(out));
    if (!dump_path.empty() && !out.dump.is_null()) write_text(dump_path, out.dump.dump() + "\n");

    int failing = 0;
    for (const Check& c : out.checks) {
      if (c.acceptable()) continue;
      ++failing;
      std::cerr << "FAILED " << c.name << ": " << c.value << " (threshold " << c.threshold << ")\n";
    }
    std::cerr << command << ": " << out.checks.size() << " checks, " << failing << " failing\n";
    return static_cast<int>(out.exit());
  } catch (const UsageError& e) {
    std::cerr << "bladegauge: " << e.what() << "\n";
    return static_cast<int>(Exit::usage);
  } catch (const std::invalid_argument& e) {
    std::cerr << "bladegauge: " << e.what() << "\n";
    return static_cast<int>(Exit::usage);
  } catch (const std::exception& e) {
    std::cerr << "bladegauge: error: " << e.what() << "\n";
    return static_cast<int>(Exit::check_failed);
  }
}
