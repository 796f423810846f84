#include <cmath>
#include <random>

#include "app.hpp"
#include "bladegauge/darboux.hpp"
#include "bladegauge/dynamics.hpp"
#include "bladegauge/embedded.hpp"
#include "bladegauge/em.hpp"

namespace bladegauge::app {

namespace {

std::vector<Point> box_points(int count, const std::vector<std::pair<double, double>>& box, std::uint64_t seed) {
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

RVector vec4(double a, double b, double c, double d) {
  RVector v(4);
  v << a, b, c, d;
  return v;
}

void monopole_suite(Outcome& out, double g, const Tolerances& t) {
  const double flux = monopole_flux(g, 16);
  const double expected = 4.0 * kPi * g;
  if (g == 0.0) {
    out.checks.push_back({"monopole.flux_abs_error", std::abs(flux), t.algebraic});
  } else {
    out.checks.push_back({"monopole.flux_rel_error", std::abs(flux - expected) / std::abs(expected), 0.005});
  }
  const MonopoleGlue glue = monopole_blade_glue(g);
  out.checks.push_back({"monopole.overlap_agreement", glue.max_overlap_diff, 1e-10});
  Check single{"monopole.single_valued", glue.max_period_diff, 1e-10};
  single.expect_ok = quantization_satisfied(g);
  out.checks.push_back(single);

  double frame_eq = 0.0;
  for (Patch patch : {Patch::plus, Patch::minus}) {
    const GaugePotential a = monopole_potential(g, patch);
    const GaugePotential lifted = extract_potential(em_frame(monopole_params(g, patch)));
    const double lo = patch == Patch::plus ? 0.2 : kPi / 2;
    const double hi = patch == Patch::plus ? kPi / 2 : kPi - 0.2;
    for (const Point& x : box_points(8, {{0.5, 2.0}, {lo, hi}, {0.0, 2 * kPi}}, 7))
      for (int mu = 0; mu < 3; ++mu) frame_eq = std::max(frame_eq, max_abs(lifted.at(mu, x) - a.at(mu, x)));
  }
  out.checks.push_back({"monopole.frame_equation", frame_eq, t.analytic});
  out.result["monopole"] = {{"g", g},
                            {"flux", flux},
                            {"expected_flux", expected},
                            {"quantization_satisfied", quantization_satisfied(g)},
                            {"single_valued", glue.single_valued}};
}

void frames_suite(Outcome& out, std::uint64_t seed, int count, const Tolerances& t) {
  const int shapes[][2] = {{2, 1}, {4, 1}, {4, 2}};
  const double fd = t.fd_factor * kDefaultStep * kDefaultStep;
  double involution = 0, hermitian = 0, trace = 0, anti = 0, constancy = 0, curvature = 0, gauge = 0;
  for (int i = 0; i < count; ++i) {
    const int big_n = shapes[i % 3][0];
    const int n = shapes[i % 3][1];
    const Frame v = random_smooth_frame(big_n, n, 3, seed + static_cast<std::uint64_t>(i));
    const RotatingBlade r = blade_from_frame(v);
    const ShapeOperator s = shape_operator(r);
    const RotatingBlade moved = blade_from_frame(transform_frame(v, random_gauge_map(n, 3, seed + 1000 + static_cast<std::uint64_t>(i))));
    const CMatrix id = CMatrix::Identity(big_n, big_n);
    for (const Point& x : box_points(3, {{-1, 1}, {-1, 1}, {-1, 1}}, seed + 77 + static_cast<std::uint64_t>(i))) {
      const CMatrix rx = r.field()(x);
      involution = std::max(involution, max_abs(rx * rx - id));
      hermitian = std::max(hermitian, hermiticity_defect(rx));
      trace = std::max(trace, std::abs(rx.trace() - Complex(2.0 * n - big_n)));
      gauge = std::max(gauge, max_abs(moved.field()(x) - rx));
      for (int mu = 0; mu < 3; ++mu) {
        const CMatrix sm = s[mu](x);
        anti = std::max(anti, max_abs(rx * sm + sm * rx));
        constancy = std::max(constancy, max_abs(lifted_covariant_derivative_matrix(r, r.field(), mu, x)));
        for (int nu = mu + 1; nu < 3; ++nu) curvature = std::max(curvature, curvature_expressions(r, mu, nu, x).max_discrepancy());
      }
    }
  }
  out.checks.push_back({"frames.involution", involution, t.analytic});
  out.checks.push_back({"frames.hermitian", hermitian, t.analytic});
  out.checks.push_back({"frames.trace", trace, t.analytic});
  out.checks.push_back({"frames.shape_anticommutes", anti, t.analytic});
  out.checks.push_back({"frames.covariant_constancy", constancy, t.analytic});
  out.checks.push_back({"frames.curvature_four_way", curvature, fd});
  out.checks.push_back({"frames.gauge_elimination", gauge, t.analytic});
  out.result["frames"] = {{"count", count}, {"seed", seed}};
}

void planewave_suite(Outcome& out, const Tolerances& t) {
  const Spacetime st = Spacetime::minkowski();
  const double h2 = kDefaultStep * kDefaultStep;
  const std::vector<Point> pts = box_points(6, std::vector<std::pair<double, double>>(4, {-1.0, 1.0}), 3);
  struct Case {
    const char* tag;
    RVector k, n;
    bool condition, maxwell;
  };
  const Case design[] = {{"maxwell", vec4(1, 0, 0, 1), vec4(0, 1, 0, 0), true, true},
                         {"satisfying", vec4(0, 0, 1, 0), vec4(1, 1, 0, 0), true, false},
                         {"violating_a", vec4(1, 0, 0, 0), vec4(0, 1, 0, 0), false, false},
                         {"violating_b", vec4(2, 1, 0, 0), vec4(1, 1, 0, 0), false, false}};
  json cases = json::array();
  for (const Case& c : design) {
    const EmFrameParams p = plane_wave_params(c.k, c.n);
    const Frame v = em_frame(p);
    const GaugePotential lifted = extract_potential(v);
    const GaugePotential closed = em_potential(p);
    const GaugePotential wave = plane_wave_potential(c.k, c.n);
    double veq = 0, ym = 0, mod = 0, maxwmod = 0;
    for (const Point& x : pts) {
      for (int mu = 0; mu < 4; ++mu) {
        veq = std::max(veq, max_abs(lifted.at(mu, x) - closed.at(mu, x)));
        ym = std::max(ym, max_abs(ym_residual(wave, st, mu, x)));
      }
      mod = std::max(mod, max_abs(modified_eom_residual(v, st, x)));
      maxwmod = std::max(maxwmod, max_abs(maxwell_mod_residual(p, st, x)));
    }
    const std::string base = std::string("planewave.") + c.tag;
    out.checks.push_back({base + ".frame_equation", veq, t.fd_factor * h2});
    Check maxwell{base + ".maxwell", ym, t.fd_factor * h2};
    maxwell.expect_ok = c.maxwell;
    out.checks.push_back(maxwell);
    Check mm{base + ".maxwmod", maxwmod, t.fd_factor * h2};
    mm.expect_ok = c.condition;
    out.checks.push_back(mm);
    Check me{base + ".modified_eom", mod, t.nested_fd_factor * h2};
    me.expect_ok = c.condition;
    out.checks.push_back(me);
    cases.push_back({{"case", c.tag},
                     {"k", std::vector<double>(c.k.data(), c.k.data() + 4)},
                     {"n", std::vector<double>(c.n.data(), c.n.data() + 4)},
                     {"condition_defect", plane_wave_condition_defect(st, c.k, c.n)}});
  }
  out.result["planewave"] = cases;
}

void darboux_suite(Outcome& out, const Tolerances& t) {
  const double fd = t.fd_factor * kDefaultStep * kDefaultStep;
  struct Fixture {
    const char* tag;
    DarbouxData data;
    std::vector<std::pair<double, double>> box;
  };
  const Fixture fixtures[] = {
      {"two_pair", darboux_from_expressions(4, {{"x0", "x1"}, {"x2", "x3"}}), std::vector<std::pair<double, double>>(4, {-0.9, 0.9})},
      {"single_pair", darboux_from_expressions(4, {{"sin(0.3*x0 + 0.1*x1 + 0.2*x3)", "0.5*x0 - 0.4*x1 + 0.9*x2"}}),
       std::vector<std::pair<double, double>>(4, {-1.0, 1.0})}};
  json res = json::object();
  for (const Fixture& f : fixtures) {
    const DarbouxReport rep = darboux_report(f.data, box_points(12, f.box, 5));
    const std::string base = std::string("darboux.") + f.tag;
    out.checks.push_back({base + ".frame_equation", rep.max_residual, fd});
    out.checks.push_back({base + ".normalization", rep.max_norm_defect, t.analytic});
    out.checks.push_back({base + ".rank", static_cast<double>(rep.measured_rank), static_cast<double>(f.data.r()), "=="});
    res[f.tag] = {{"N", rep.big_n}, {"measured_rank", rep.measured_rank}};
  }
  out.result["darboux"] = res;
}

void embedded_suite(Outcome& out, const Tolerances& t) {
  const double fd = t.fd_factor * kDefaultStep * kDefaultStep;
  double sphere = 0, sphere2 = 0, torus = 0, shape = 0, gap = 0;
  const Embedding s1 = sphere_embedding(1.0);
  const Embedding s2 = sphere_embedding(2.0);
  const Embedding tor = torus_embedding(2.0, 0.7);
  for (const Point& x : box_points(10, {{0.3, kPi - 0.3}, {0.0, 2 * kPi}}, 11)) {
    sphere = std::max(sphere, std::abs(gauss_curvature(s1, x) - 1.0));
    sphere2 = std::max(sphere2, std::abs(gauss_curvature(s2, x) - 0.25));
    const double cv = std::cos(x(1));
    torus = std::max(torus, std::abs(gauss_curvature(tor, x) - cv / (0.7 * (2.0 + 0.7 * cv))));
    for (const Embedding* e : {&s1, &tor}) {
      shape = std::max(shape, embedded_shape_identity_residual(*e, x, 0, 1));
      gap = std::max(gap, curvature_discrepancy(*e, x, 0, 1));
    }
  }
  out.checks.push_back({"embedded.unit_sphere_curvature", sphere, 1e-6});
  out.checks.push_back({"embedded.sphere_radius_2_curvature", sphere2, 1e-6});
  out.checks.push_back({"embedded.torus_curvature", torus, 1e-6});
  out.checks.push_back({"embedded.shape_identity", shape, fd});
  out.checks.push_back({"embedded.curvature_expressions", gap, fd});
}

}  // namespace

Outcome run_verify(const json& cfg) {
  const Tolerances t = tolerances_from(cfg);
  const std::string scenario = cfg.at("scenario");
  const bool all = scenario == "all";
  Outcome out;
  if (all || scenario == "monopole") monopole_suite(out, cfg.at("g"), t);
  if (all || scenario == "frames") frames_suite(out, cfg.at("seed"), cfg.at("frames"), t);
  if (all || scenario == "planewave") planewave_suite(out, t);
  if (all || scenario == "darboux") darboux_suite(out, t);
  if (all || scenario == "embedded") embedded_suite(out, t);
  return out;
}

}  // namespace bladegauge::app
