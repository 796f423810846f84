// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Reference values come from tests/support/oracle.hpp or closed forms written
// out here, never from the library routine under test.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bladegauge/darboux.hpp"
#include "bladegauge/dynamics.hpp"
#include "bladegauge/em.hpp"
#include "bladegauge/embedded.hpp"
#include "../support/oracle.hpp"

using namespace bladegauge;

namespace {

constexpr double kH = 1e-3;
constexpr double kFd = 10 * kH * kH;
constexpr double kNestedFd = 100 * kH * kH;
constexpr double kAnalytic = 1e-9;

// Named measurements of one criterion; the criterion passes when all do.
class Tally {
 public:
  void below(const std::string& what, double value, double limit) { add(what, value, limit, value <= limit, "<="); }
  void above(const std::string& what, double value, double limit) { add(what, value, limit, value > limit, ">"); }
  void within(const std::string& what, double value, double lo, double hi) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3g in [%g, %g]", what.c_str(), value, lo, hi);
    push(buf, value >= lo && value <= hi);
  }
  // Reported but not gating.
  void note(const std::string& what, double value) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "(%s=%.3g)", what.c_str(), value);
    push(buf, true);
  }
  bool ok() const { return ok_; }
  const std::string& detail() const { return detail_; }

 private:
  void add(const std::string& what, double value, double limit, bool ok, const char* rel) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3g %s %.3g", what.c_str(), value, rel, limit);
    push(buf, ok);
  }
  void push(const std::string& text, bool ok) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += ok ? text : "!" + text;
    ok_ = ok_ && ok;
  }
  std::string detail_;
  bool ok_ = true;
};

oracle::Fn<CMatrix> values_of(const MatrixField& f) {
  return [f](const Point& x) { return f(x); };
}

oracle::Fn<CMatrix> reflection_of(const MatrixField& v) {
  return [v](const Point& x) {
    const CMatrix m = v(x);
    return CMatrix(2.0 * m * m.adjoint() - CMatrix::Identity(m.rows(), m.rows()));
  };
}

// -i V^dag dV from stencils of the frame values.
CMatrix oracle_potential(const MatrixField& v, int mu, const Point& x) {
  return Complex(0, -1) * v(x).adjoint() * oracle::d(values_of(v), mu, x);
}

std::vector<Point> box(int count, const std::vector<std::pair<double, double>>& ranges, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    Point x(static_cast<Eigen::Index>(ranges.size()));
    for (std::size_t k = 0; k < ranges.size(); ++k)
      x(static_cast<Eigen::Index>(k)) = std::uniform_real_distribution<double>(ranges[k].first, ranges[k].second)(rng);
    out.push_back(x);
  }
  return out;
}

RVector vec4(double a, double b, double c, double d) {
  RVector v(4);
  v << a, b, c, d;
  return v;
}

double minkowski(const RVector& a, const RVector& b) { return a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3); }

ScalarField wave(int dim, std::mt19937_64& rng, double offset) {
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  RVector w(dim);
  for (int mu = 0; mu < dim; ++mu) w(mu) = u(rng);
  const double c = u(rng);
  return ScalarField::analytic(dim, 2, [w, c, offset](const Point& y, int order) {
    Jet<double> arg = constant_jet(c, static_cast<int>(y.size()), order);
    for (int mu = 0; mu < y.size(); ++mu) arg = arg + w(mu) * coordinate_jet(y, mu, order);
    return offset + 0.6 * sin(arg);
  });
}

EmFrameParams random_em(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ScalarField a = wave(dim, rng, 0.3);
  ScalarField b = wave(dim, rng, -0.2);
  ScalarField r = wave(dim, rng, 0.7);
  return EmFrameParams{a, b, r};
}

struct PlaneWave {
  const char* tag;
  RVector k, n;
};

const std::vector<PlaneWave>& plane_wave_design() {
  static const std::vector<PlaneWave> d = {{"maxwell", vec4(1, 0, 0, 1), vec4(0, 1, 0, 0)},
                                           {"satisfying", vec4(0, 0, 1, 0), vec4(1, 1, 0, 0)},
                                           {"violating_a", vec4(1, 0, 0, 0), vec4(0, 1, 0, 0)},
                                           {"violating_b", vec4(2, 1, 0, 0), vec4(1, 1, 0, 0)}};
  return d;
}

std::vector<Point> spacetime_points(int count, unsigned seed) {
  return box(count, std::vector<std::pair<double, double>>(4, {-1.0, 1.0}), seed);
}

// Blade fixtures shared by the curvature criteria.
struct BladeFixture {
  std::string tag;
  RotatingBlade blade;
  std::vector<Point> points;
};

std::vector<BladeFixture> blade_fixtures() {
  std::vector<BladeFixture> out;
  const int shapes[][2] = {{2, 1}, {4, 1}, {4, 2}};
  for (int i = 0; i < 3; ++i) {
    const Frame v = random_smooth_frame(shapes[i][0], shapes[i][1], 3, 500 + static_cast<std::uint64_t>(i));
    const RotatingBlade r = blade_from_frame(v);
    out.push_back({"random" + std::to_string(i), r, oracle::random_points(3, 3, 40 + static_cast<unsigned>(i))});
    out.push_back({"random_fd" + std::to_string(i), RotatingBlade(r.big_n(), r.field().finite_difference_only(kH)),
                   oracle::random_points(3, 3, 50 + static_cast<unsigned>(i))});
  }
  out.push_back({"em_random", em_blade(random_em(3, 9)), oracle::random_points(3, 3, 61)});
  for (const PlaneWave& p : plane_wave_design())
    out.push_back({std::string("plane_") + p.tag, em_blade(plane_wave_params(p.k, p.n)), spacetime_points(2, 62)});
  out.push_back({"monopole", monopole_blade_glue(0.5).blade, box(4, {{0.5, 2.0}, {0.3, kPi - 0.3}, {0.0, 2 * kPi}}, 63)});
  const DarbouxData two = darboux_from_expressions(4, {{"x0", "x1"}, {"x2", "x3"}});
  out.push_back({"darboux_two_pair", blade_from_frame(darboux_frame(two)),
                 box(3, std::vector<std::pair<double, double>>(4, {-0.9, 0.9}), 64)});
  return out;
}

Tally criterion1() {
  Tally t;
  const int shapes[][2] = {{2, 1}, {4, 1}, {4, 2}};
  double oracle_r = 0, oracle_s = 0, invol = 0, herm = 0, trace = 0, anti = 0, cov = 0, anti_fd = 0, cov_fd = 0;
  for (int i = 0; i < 20; ++i) {
    const int big_n = shapes[i % 3][0];
    const int n = shapes[i % 3][1];
    const Frame v = random_smooth_frame(big_n, n, 3, 1000 + static_cast<std::uint64_t>(i));
    const RotatingBlade r = blade_from_frame(v);
    const ShapeOperator s = shape_operator(r);
    const RotatingBlade rfd(big_n, r.field().finite_difference_only(kH));
    const ShapeOperator sfd = shape_operator(rfd);
    const oracle::Fn<CMatrix> ref = reflection_of(v.field());
    const CMatrix id = CMatrix::Identity(big_n, big_n);
    for (const Point& x : oracle::random_points(3, 3, 100 + static_cast<unsigned>(i))) {
      const CMatrix rx = r(x);
      oracle_r = std::max(oracle_r, max_abs(rx - ref(x)));
      invol = std::max(invol, max_abs(rx * rx - id));
      herm = std::max(herm, hermiticity_defect(rx));
      trace = std::max(trace, std::abs(rx.trace() - Complex(2.0 * n - big_n)));
      for (int mu = 0; mu < 3; ++mu) {
        const CMatrix sm = s[mu](x);
        const CMatrix expected = Complex(0, -0.5) * ref(x) * oracle::d(ref, mu, x);
        oracle_s = std::max(oracle_s, max_abs(sm - expected));
        anti = std::max(anti, max_abs(rx * sm + sm * rx));
        cov = std::max(cov, max_abs(lifted_covariant_derivative_matrix(r, r.field(), mu, x)));
        const CMatrix sf = sfd[mu](x);
        anti_fd = std::max(anti_fd, max_abs(rx * sf + sf * rx));
        cov_fd = std::max(cov_fd, max_abs(lifted_covariant_derivative_matrix(rfd, rfd.field(), mu, x)));
      }
    }
  }
  t.below("R-vs-oracle", oracle_r, kAnalytic);
  t.below("S-vs-oracle", oracle_s, kAnalytic);
  t.below("R^2-I", invol, kAnalytic);
  t.below("R-R^dag", herm, kAnalytic);
  t.below("trR-(2n-N)", trace, kAnalytic);
  t.below("{R,S}", anti, kAnalytic);
  t.below("DR", cov, kAnalytic);
  // Same identities with a finite-difference blade; the truncation constant
  // depends on the frame's third derivatives, so this is informational.
  t.note("{R,S}_fd/h^2", anti_fd / (kH * kH));
  t.note("DR_fd/h^2", cov_fd / (kH * kH));
  return t;
}

Tally criterion2(const std::vector<BladeFixture>& fixtures) {
  Tally t;
  double worst = 0, versus_oracle = 0;
  std::string where;
  for (const BladeFixture& f : fixtures) {
    const oracle::Fn<CMatrix> ref = values_of(f.blade.field());
    for (const Point& x : f.points)
      for (int mu = 0; mu < f.blade.dim(); ++mu)
        for (int nu = mu + 1; nu < f.blade.dim(); ++nu) {
          const CurvatureExpressions c = curvature_expressions(f.blade, mu, nu, x);
          if (c.max_discrepancy() > worst) {
            worst = c.max_discrepancy();
            where = f.tag;
          }
          const CMatrix expected = Complex(0, -0.25) * oracle::comm(oracle::d(ref, mu, x), oracle::d(ref, nu, x));
          versus_oracle = std::max(versus_oracle, max_abs(c.shape - expected));
        }
  }
  t.below("four-way(" + where + ")", worst, kFd);
  t.below("Omega-vs-oracle", versus_oracle, kFd);
  return t;
}

Tally criterion3() {
  Tally t;
  const Frame v = random_smooth_frame(4, 2, 3, 300);
  const RotatingBlade r = blade_from_frame(v);
  const ShapeOperator s = shape_operator(r);
  const BladeCurvature om = blade_curvature_form(r);
  const GaugePotential a = extract_potential(v);
  const FieldStrength f = field_strength(a);
  double dr = 0, ds = 0, dom = 0, dpot = 0, cov = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GaugeMap u = random_gauge_map(2, 3, 7000 + seed);
    const Frame vp = transform_frame(v, u);
    const RotatingBlade rp = blade_from_frame(vp);
    const ShapeOperator sp = shape_operator(rp);
    const BladeCurvature omp = blade_curvature_form(rp);
    const FieldStrength fp = field_strength(extract_potential(vp));
    const GaugePotential ap = extract_potential(vp);
    const oracle::Fn<CMatrix> uf = values_of(u.field());
    for (const Point& x : oracle::random_points(3, 3, static_cast<unsigned>(seed) + 200)) {
      const CMatrix ux = u(x);
      dr = std::max(dr, max_abs(r(x) - rp(x)));
      for (int mu = 0; mu < 3; ++mu) {
        ds = std::max(ds, max_abs(s[mu](x) - sp[mu](x)));
        // A' = u A u^dag - i u d(u^dag), d(u^dag) by stencil.
        const CMatrix dudag = oracle::d(uf, mu, x).adjoint();
        dpot = std::max(dpot, max_abs(ap.at(mu, x) - (ux * a.at(mu, x) * ux.adjoint() - Complex(0, 1) * ux * dudag)));
        for (int nu = mu + 1; nu < 3; ++nu) {
          dom = std::max(dom, max_abs(om.value(mu, nu, x) - omp.value(mu, nu, x)));
          cov = std::max(cov, max_abs(fp.value(mu, nu, x) - ux * f.value(mu, nu, x) * ux.adjoint()));
        }
      }
    }
  }
  t.below("R", dr, kAnalytic);
  t.below("S", ds, kAnalytic);
  t.below("Omega", dom, kAnalytic);
  t.below("A'-law", dpot, kFd);
  t.below("F'-uFu^dag", cov, kFd);
  return t;
}

Tally criterion4() {
  Tally t;
  struct Fixture {
    Frame v;
    MatrixField w;
    std::vector<Point> points;
  };
  std::vector<Fixture> fixtures;
  const int shapes[][2] = {{2, 1}, {3, 1}, {4, 1}, {4, 2}};
  for (int i = 0; i < 4; ++i) {
    const Frame v = random_smooth_frame(shapes[i][0], shapes[i][1], 3, 400 + static_cast<std::uint64_t>(i));
    fixtures.push_back({v, complement_frame_field(v), oracle::random_points(3, 3, 70 + static_cast<unsigned>(i))});
  }
  const EmFrameParams em = random_em(3, 11);
  fixtures.push_back({em_frame(em), em_complement(em), oracle::random_points(3, 3, 80)});
  const Frame dv = darboux_frame(darboux_from_expressions(4, {{"x0", "x1"}, {"x2", "x3"}}));
  fixtures.push_back({dv, complement_frame_field(dv), box(3, std::vector<std::pair<double, double>>(4, {-0.9, 0.9}), 81)});

  double fproj = 0, gproj = 0, f_oracle = 0;
  for (const Fixture& fx : fixtures) {
    for (const Point& x : fx.points) {
      const ShapeGaugeResiduals res = shape_gauge_residuals(fx.v, fx.w, x);
      fproj = std::max(fproj, res.f_projection);
      gproj = std::max(gproj, res.g_projection);
    }
  }
  // F = V^dag Omega V with both sides from stencils of V values.
  {
    const Fixture& fx = fixtures[3];
    const MatrixField vf = fx.v.field();
    const oracle::Fn<CMatrix> rr = reflection_of(vf);
    std::vector<oracle::Fn<CMatrix>> a;
    for (int mu = 0; mu < 3; ++mu) a.push_back([vf, mu](const Point& y) { return oracle_potential(vf, mu, y); });
    for (const Point& x : fx.points)
      for (int mu = 0; mu < 3; ++mu)
        for (int nu = mu + 1; nu < 3; ++nu) {
          const CMatrix f = oracle::d(a[static_cast<std::size_t>(nu)], mu, x) - oracle::d(a[static_cast<std::size_t>(mu)], nu, x) +
                            Complex(0, 1) * oracle::comm(a[static_cast<std::size_t>(mu)](x), a[static_cast<std::size_t>(nu)](x));
          const CMatrix omega = Complex(0, -0.25) * oracle::comm(oracle::d(rr, mu, x), oracle::d(rr, nu, x));
          f_oracle = std::max(f_oracle, max_abs(f - vf(x).adjoint() * omega * vf(x)));
        }
  }
  // N = 2: complementary connection and curvature flip sign.
  const auto em_pts = oracle::random_points(5, 3, 82);
  const ShapeGaugeDecomposition dec = shape_gauge_decompose(em_frame(em), em_complement(em), em_pts, 1e-6);
  const GaugePotential a = extract_potential(em_frame(em));
  const FieldStrength f = field_strength(a);
  double c_plus_a = 0, g_plus_f = 0;
  for (const Point& x : em_pts)
    for (int mu = 0; mu < 3; ++mu) {
      c_plus_a = std::max(c_plus_a, max_abs(dec.c.at(mu, x) + a.at(mu, x)));
      for (int nu = mu + 1; nu < 3; ++nu) g_plus_f = std::max(g_plus_f, max_abs(dec.g.value(mu, nu, x) + f.value(mu, nu, x)));
    }
  t.below("F-V^dagOmegaV", fproj, kFd);
  t.below("G-W^dagOmegaW", gproj, kFd);
  t.below("stencil-F-V^dagOmegaV", f_oracle, kFd);
  t.below("C+A", c_plus_a, kFd);
  t.below("G+F", g_plus_f, kFd);
  return t;
}

double maxwell_mod_oracle(const PlaneWave& p, const MatrixField& v, const Point& x) {
  const double kk = minkowski(p.k, p.k);
  const double kn = minkowski(p.k, p.n);
  const double sine = std::sin(p.k.dot(x));
  const oracle::Fn<CMatrix> r = reflection_of(v);
  const double sign[] = {1, -1, -1, -1};
  CMatrix out = CMatrix::Zero(2, 2);
  for (int nu = 0; nu < 4; ++nu) {
    const double j = -(kk * p.n(nu) - kn * p.k(nu)) * sine;
    out += sign[nu] * j * oracle::d(r, nu, x);
  }
  return max_abs(out);
}

Tally criterion5() {
  Tally t;
  const Spacetime st = Spacetime::minkowski();
  const auto pts = spacetime_points(6, 90);
  double veq = 0, maxwell = 0, versus_oracle = 0;
  int agree = 0;
  for (const PlaneWave& p : plane_wave_design()) {
    const EmFrameParams params = plane_wave_params(p.k, p.n);
    const Frame v = em_frame(params);
    const GaugePotential lifted = extract_potential(v);
    double mm = 0;
    for (const Point& x : pts) {
      for (int mu = 0; mu < 4; ++mu) veq = std::max(veq, std::abs(lifted.at(mu, x)(0, 0) - p.n(mu) * std::sin(p.k.dot(x))));
      const double value = max_abs(maxwell_mod_residual(params, st, x));
      mm = std::max(mm, value);
      versus_oracle = std::max(versus_oracle, std::abs(value - maxwell_mod_oracle(p, v.field(), x)));
    }
    const double cond = minkowski(p.k, p.k) * minkowski(p.n, p.n) - std::pow(minkowski(p.k, p.n), 2);
    if ((mm <= kFd) == (std::abs(cond) <= 1e-12)) ++agree;
  }
  for (const RVector& k : {vec4(1, 0, 0, 1), vec4(1, 0, 1, 0)}) {
    const RVector n = k(3) != 0 ? vec4(0, 1, 0, 0) : vec4(0, 0, 0, 1);
    const GaugePotential a = plane_wave_potential(k, n);
    for (const Point& x : pts)
      for (int nu = 0; nu < 4; ++nu) maxwell = std::max(maxwell, max_abs(ym_residual(a, st, nu, x)));
  }
  t.below("em-frame-eq", veq, kFd);
  t.below("null-transverse-YM", maxwell, 1e-10);
  t.below("modified-maxwell-vs-oracle", versus_oracle, kFd);
  t.within("design-agreement", agree, 4, 4);
  return t;
}

Tally criterion6() {
  Tally t;
  double flux = 0, overlap = 0, overlap_direct = 0;
  int matches = 0;
  for (double g : {0.0, 0.3, 0.5, 1.0}) {
    const double total = monopole_flux(g, 16);
    flux = std::max(flux, g == 0.0 ? std::abs(total) : std::abs(total - 4 * kPi * g) / (4 * kPi * g));
    const MonopoleGlue glue = monopole_blade_glue(g);
    overlap = std::max(overlap, glue.max_overlap_diff);
    const RotatingBlade plus = em_blade(monopole_params(g, Patch::plus));
    const RotatingBlade minus = em_blade(monopole_params(g, Patch::minus));
    double period = 0;
    for (const Point& x : box(8, {{0.5, 2.0}, {0.4, kPi - 0.4}, {0.0, 2 * kPi}}, 95)) {
      overlap_direct = std::max(overlap_direct, max_abs(plus(x) - minus(x)));
      Point y = x;
      y(2) += 2 * kPi;
      for (const RotatingBlade* r : {&plus, &minus}) period = std::max(period, max_abs((*r)(y) - (*r)(x)));
    }
    const bool integral = std::abs(2 * g - std::round(2 * g)) == 0.0;
    if (glue.single_valued == integral && (period <= 1e-10) == integral) ++matches;
  }
  t.below("flux-rel-error", flux, 0.005);
  t.below("overlap", overlap, 1e-10);
  t.below("overlap-direct", overlap_direct, 1e-10);
  t.within("single-valued-iff-2g-integer", matches, 4, 4);
  return t;
}

Tally criterion7() {
  Tally t;
  struct Fixture {
    DarbouxData data;
    std::vector<Point> points;
    std::function<RVector(const Point&)> a;
  };
  const std::vector<Fixture> fixtures = {
      {darboux_from_expressions(4, {{"x0", "x1"}, {"x2", "x3"}}), box(10, std::vector<std::pair<double, double>>(4, {-0.9, 0.9}), 21),
       [](const Point& x) { return vec4(0, x(0), 0, x(2)); }},
      {darboux_from_expressions(4, {{"sin(0.3*x0 + 0.1*x1 + 0.2*x3)", "0.5*x0 - 0.4*x1 + 0.9*x2"}}), spacetime_points(10, 22),
       [](const Point& x) { return RVector(std::sin(0.3 * x(0) + 0.1 * x(1) + 0.2 * x(3)) * vec4(0.5, -0.4, 0.9, 0)); }}};
  double residual = 0, stencil = 0, norm = 0;
  int rank_ok = 0, size_ok = 0;
  for (const Fixture& f : fixtures) {
    const DarbouxReport rep = darboux_report(f.data, f.points);
    residual = std::max(residual, rep.max_residual);
    norm = std::max(norm, rep.max_norm_defect);
    if (rep.measured_rank == static_cast<int>(f.data.pairs.size()) - 1) ++rank_ok;
    if (rep.big_n == 2 * static_cast<int>(f.data.pairs.size())) ++size_ok;
    const MatrixField v = darboux_frame(f.data).field();
    for (const Point& x : f.points) {
      const RVector a = f.a(x);
      for (int mu = 0; mu < 4; ++mu) stencil = std::max(stencil, std::abs(oracle_potential(v, mu, x)(0, 0) - a(mu)));
    }
  }
  t.below("frame-equation", residual, kFd);
  t.below("stencil-vs-closed-form", stencil, kFd);
  t.below("normalization", norm, kAnalytic);
  t.within("rank-matches", rank_ok, 2, 2);
  t.within("N=2(r+1)", size_ok, 2, 2);
  return t;
}

Tally criterion8() {
  Tally t;
  std::vector<Frame> frames;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) frames.push_back(random_smooth_frame(2, 1, 4, 800 + seed));
  for (std::uint64_t seed = 1; seed <= 3; ++seed) frames.push_back(em_frame(random_em(4, 900 + seed)));
  for (const PlaneWave& p : plane_wave_design()) frames.push_back(em_frame(plane_wave_params(p.k, p.n)));
  double worst = 0;
  unsigned seed = 0;
  for (const Frame& v : frames) {
    const FieldStrength f = field_strength(extract_potential(v));
    for (const Point& x : spacetime_points(100, 30 + seed++)) {
      auto c = [&](int mu, int nu) { return f.value(mu, nu, x)(0, 0); };
      // (F^F)_{0123} / 8 = F01 F23 - F02 F13 + F03 F12.
      worst = std::max(worst, std::abs(c(0, 1) * c(2, 3) - c(0, 2) * c(1, 3) + c(0, 3) * c(1, 2)));
    }
  }
  t.below("F^F(" + std::to_string(frames.size()) + " frames x 100 points)", worst, 1e-10);
  return t;
}

Tally criterion9() {
  Tally t;
  const auto pts = box(12, {{0.3, kPi - 0.3}, {0.0, 2 * kPi}}, 17);
  double unit = 0, unit_oracle = 0, radius = 0, shape = 0, commutator = 0;
  for (double a : {1.0, 2.0, 0.5}) {
    const Embedding e = sphere_embedding(a);
    const oracle::Fn<RMatrix> metric = [a](const Point& y) {
      RMatrix g = RMatrix::Zero(2, 2);
      g(0, 0) = a * a;
      g(1, 1) = a * a * std::sin(y(0)) * std::sin(y(0));
      return g;
    };
    for (const Point& x : pts) {
      const double k = gauss_curvature(e, x);
      if (a == 1.0) {
        unit = std::max(unit, std::abs(k - 1.0));
        unit_oracle = std::max(unit_oracle, std::abs(k - oracle::gauss_curvature(metric, x)));
      } else {
        radius = std::max(radius, std::abs(k - 1.0 / (a * a)));
      }
    }
  }
  for (const Embedding& e : {sphere_embedding(1.0), torus_embedding(2.0, 0.7)})
    for (const Point& x : pts) {
      shape = std::max(shape, embedded_shape_identity_residual(e, x, 0, 1));
      commutator = std::max(commutator, curvature_discrepancy(e, x, 0, 1));
    }
  t.below("K-1", unit, 1e-6);
  t.below("K-christoffel-oracle", unit_oracle, 1e-6);
  t.below("K-1/a^2", radius, 1e-6);
  t.below("shape-identity", shape, kFd);
  t.below("curvature-commutator", commutator, kFd);
  return t;
}

Tally criterion10() {
  Tally t;
  const BladeLattice lat = monopole_band_lattice(0.5, 12, 16);
  const std::vector<CMatrix> g = lattice_gradient(lat);
  std::mt19937_64 rng(123);
  std::normal_distribution<double> normal;
  double rel = 0;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<CMatrix> b;
    for (std::size_t s = 0; s < lat.size(); ++s) {
      CMatrix m(2, 2);
      for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(normal(rng), normal(rng));
      b.push_back(0.5 * (m + m.adjoint()));
    }
    double predicted = 0;
    for (std::size_t s = 0; s < lat.size(); ++s) predicted += (b[s] * g[s]).trace().real();
    const double eps = 1e-5;
    const double fd = (lattice_energy(conjugate_lattice(lat, b, eps)) - lattice_energy(conjugate_lattice(lat, b, -eps))) / (2 * eps);
    rel = std::max(rel, std::abs(fd - predicted) / std::abs(predicted));
  }
  const FlowResult flow = sigma_flow(lat, 500, 0.02);
  double rise = -1e300;
  for (std::size_t i = 1; i < flow.energy.size(); ++i) rise = std::max(rise, flow.energy[i] - flow.energy[i - 1]);
  t.below("gradient-rel-error", rel, 1e-6);
  t.below("max-energy-rise(500 steps)", rise, 0.0);
  t.below("R^2-I", flow.max_involution_defect, 1e-12);
  t.below("R-R^dag", flow.max_hermiticity_defect, 1e-12);
  return t;
}

Tally criterion11() {
  Tally t;
  const Spacetime st = Spacetime::minkowski();
  const auto pts = spacetime_points(4, 110);
  const std::vector<PlaneWave> maxwell = {{"z", vec4(1, 0, 0, 1), vec4(0, 1, 0, 0)},
                                          {"y", vec4(1, 0, 1, 0), vec4(0, 0, 0, 1)},
                                          {"x", vec4(2, 2, 0, 0), vec4(0, 0, 3, 0)}};
  auto worst = [&](const PlaneWave& p, bool modified) {
    double w = 0;
    const GaugePotential a = plane_wave_potential(p.k, p.n);
    const Frame v = em_frame(plane_wave_params(p.k, p.n));
    for (const Point& x : pts) {
      if (modified) {
        w = std::max(w, max_abs(modified_eom_residual(v, st, x)));
      } else {
        for (int nu = 0; nu < 4; ++nu) w = std::max(w, max_abs(ym_residual(a, st, nu, x)));
      }
    }
    return w;
  };
  double maxwell_ym = 0, maxwell_mod = 0;
  for (const PlaneWave& p : maxwell) {
    maxwell_ym = std::max(maxwell_ym, worst(p, false));
    maxwell_mod = std::max(maxwell_mod, worst(p, true));
  }
  const PlaneWave extra = plane_wave_design()[1];
  t.below("maxwell-YM", maxwell_ym, kFd);
  t.below("maxwell-modified", maxwell_mod, kNestedFd);
  t.below("non-maxwell-modified", worst(extra, true), kNestedFd);
  t.above("non-maxwell-YM", worst(extra, false), kFd);
  return t;
}

// Residual of the finite-difference route as a function of the step.
double fd_error(int which, double h) {
  const Point x = [] {
    Point p(3);
    p << 0.3, -0.2, 0.5;
    return p;
  }();
  const Frame v = random_smooth_frame(4, 2, 3, 1200);
  switch (which) {
    case 0: {  // shape operator
      const RotatingBlade r = blade_from_frame(v);
      const ShapeOperator s = shape_operator(r);
      const ShapeOperator sh = shape_operator(RotatingBlade(4, r.field().finite_difference_only(h)));
      double e = 0;
      for (int mu = 0; mu < 3; ++mu) e = std::max(e, max_abs(sh[mu](x) - s[mu](x)));
      return e;
    }
    case 1: {  // frame equation
      const GaugePotential a = extract_potential(v);
      const GaugePotential ah = extract_potential(Frame(4, 2, v.field().finite_difference_only(h)));
      double e = 0;
      for (int mu = 0; mu < 3; ++mu) e = std::max(e, max_abs(ah.at(mu, x) - a.at(mu, x)));
      return e;
    }
    default: {  // EM plane wave against A = n sin(k.x)
      const PlaneWave p = plane_wave_design()[1];
      const Frame em = em_frame(plane_wave_params(p.k, p.n));
      const GaugePotential ah = extract_potential(Frame(2, 1, em.field().finite_difference_only(h)));
      const Point y = vec4(0.1, 0.4, -0.3, 0.2);
      double e = 0;
      for (int mu = 0; mu < 4; ++mu) e = std::max(e, std::abs(ah.at(mu, y)(0, 0) - p.n(mu) * std::sin(p.k.dot(y))));
      return e;
    }
  }
}

Tally criterion12() {
  Tally t;
  const char* names[] = {"S", "A", "em-frame-eq"};
  for (int which = 0; which < 3; ++which) {
    double h = 1e-2;
    for (int halving = 0; halving < 2; ++halving, h /= 2) {
      const double ratio = fd_error(which, h) / fd_error(which, h / 2);
      t.within(std::string(names[which]) + "-ratio@h=" + std::to_string(h).substr(0, 7), ratio, 3.5, 4.5);
    }
  }
  return t;
}

}  // namespace

int main() {
  const std::vector<BladeFixture> fixtures = blade_fixtures();
  const std::vector<std::pair<const char*, std::function<Tally()>>> criteria = {
      {"blade identities on 20 random frames", criterion1},
      {"four-way curvature agreement", [&] { return criterion2(fixtures); }},
      {"gauge elimination and covariance", criterion3},
      {"shape-gauge projections; EM C = -A, G = -F", criterion4},
      {"plane wave: frame equation, Maxwell, modified-Maxwell design", criterion5},
      {"monopole flux, gluing, quantization", criterion6},
      {"Darboux frame equation and rank", criterion7},
      {"EM decomposability F^F = 0", criterion8},
      {"embedded sphere and torus", criterion9},
      {"sigma-model gradient and flow", criterion10},
      {"solution nesting", criterion11},
      {"finite-difference convergence", criterion12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string status, detail;
    try {
      const Tally t = criteria[i].second();
      status = t.ok() ? "PASS" : "FAIL";
      detail = t.detail();
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = std::string("exception: ") + e.what();
    }
    if (status == "FAIL") ++failed;
    std::printf("%s %2zu %s: %s\n", status.c_str(), i + 1, criteria[i].first, detail.c_str());
  }
  std::printf("%zu criteria, %d failing\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
