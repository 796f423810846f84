#include "doctest.h"

#include <cstdio>

#include "bladegauge/darboux.hpp"
#include "bladegauge/em.hpp"
#include "bladegauge/expr.hpp"
#include "../support/oracle.hpp"

using namespace bladegauge;

namespace {

DarbouxData two_pair() { return darboux_from_expressions(4, {{"x0", "x1"}, {"x2", "x3"}}); }

DarbouxData fd_only(DarbouxData d, double h) {
  for (auto& p : d.pairs) {
    p.pi = p.pi.finite_difference_only(h);
    p.phi = p.phi.finite_difference_only(h);
  }
  return d;
}

}  // namespace

TEST_CASE("expression parser: values and precedence") {
  Point x(3);
  x << 0.5, -2.0, 3.0;
  CHECK(Expression::parse("1 + 2 * 3")(x) == 7.0);
  CHECK(Expression::parse("-x0^2")(x) == -0.25);
  CHECK(Expression::parse("2^3^2")(x) == doctest::Approx(512.0));
  CHECK(Expression::parse("(1 + x1) / 4")(x) == -0.25);
  CHECK(Expression::parse("2 * pi")(x) == doctest::Approx(2 * kPi));
  CHECK(Expression::parse("arccos(x0) + arcsin(x0)")(x) == doctest::Approx(kPi / 2));
  CHECK(Expression::parse("tan(x0)")(x) == doctest::Approx(std::tan(0.5)));
  CHECK(Expression::parse("1e-3 * x2")(x) == doctest::Approx(3e-3));
  CHECK(Expression::parse("sqrt(x2) * exp(0) - log(1)")(x) == doctest::Approx(std::sqrt(3.0)));
  CHECK(Expression::parse("x2 ^ x0")(x) == doctest::Approx(std::sqrt(3.0)));
  CHECK(Expression::parse("3").max_coordinate() == -1);
  CHECK(Expression::parse("x0 * x2").max_coordinate() == 2);
}

TEST_CASE("expression parser: errors") {
  CHECK_THROWS_AS(Expression::parse("1 +"), ParameterError);
  CHECK_THROWS_AS(Expression::parse("foo(x0)"), ParameterError);
  CHECK_THROWS_AS(Expression::parse("sin x0"), ParameterError);
  CHECK_THROWS_AS(Expression::parse("(x0"), ParameterError);
  CHECK_THROWS_AS(Expression::parse("x0 x1"), ParameterError);
  CHECK_THROWS_AS(Expression::parse("x3").field(2), DimensionError);
  try {
    Expression::parse("x0 + $");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("position 5") != std::string::npos);
  }
}

TEST_CASE("expression derivatives against stencil oracle") {
  const ScalarField f = Expression::parse("sin(x0 * x1) / (2 + cos(x1)) + x0^3 - arccos(0.5 * x1)").field(2);
  oracle::Fn<RMatrix> plain = [f](const Point& y) {
    RMatrix m(1, 1);
    m(0, 0) = f(y);
    return m;
  };
  for (const Point& x : oracle::random_points(5, 2, 3)) {
    for (int mu = 0; mu < 2; ++mu) {
      CHECK(std::abs(f.partial(mu, x) - oracle::d(plain, mu, x)(0, 0)) < 1e-10);
      for (int nu = 0; nu < 2; ++nu)
        CHECK(std::abs(f.partial2(mu, nu, x) - oracle::d(oracle::d_fn(plain, nu), mu, x)(0, 0)) < 1e-7);
    }
  }
}

TEST_CASE("darboux potential examples") {
  Point x(4);
  x << 0.3, -0.2, 0.5, 0.7;
  const GaugePotential a1 = darboux_potential(darboux_from_expressions(4, {{"x0", "x1"}}));
  CHECK(a1.at(1, x)(0, 0).real() == doctest::Approx(0.3));
  CHECK(std::abs(a1.at(0, x)(0, 0)) == 0.0);
  const GaugePotential a2 = darboux_potential(two_pair());
  const FieldStrength f = field_strength(a2);
  CHECK(a2.at(3, x)(0, 0).real() == doctest::Approx(0.5));
  CHECK(f.value(0, 1, x)(0, 0).real() == doctest::Approx(1.0));
  CHECK(f.value(2, 3, x)(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(f.value(0, 2, x)(0, 0)) == 0.0);
  const TwoForm<double> fr = scalar_form(f);
  const FormValue fv = FormValue::from_two_form(4, [&](int mu, int nu) { return fr.value(mu, nu, x); });
  CHECK(wedge(fv, fv).component({0, 1, 2, 3}) == doctest::Approx(2.0));
  DarbouxData empty;
  empty.dim = 4;
  const GaugePotential a0 = darboux_potential(empty);
  for (int mu = 0; mu < 4; ++mu) CHECK(std::abs(a0.at(mu, x)(0, 0)) == 0.0);
}

TEST_CASE("darboux frame solves the frame equation") {
  const DarbouxData data = two_pair();
  const auto pts = oracle::random_points(50, 4, 11, -0.9, 0.9);
  const Frame v = darboux_frame(data);
  CHECK(v.big_n() == 4);
  const GaugePotential lhs = extract_potential(v);
  const GaugePotential rhs = darboux_potential(data);
  for (const Point& x : pts) {
    CHECK(std::abs(v(x).norm() - 1.0) < 1e-12);
    for (int mu = 0; mu < 4; ++mu) CHECK(max_abs(lhs.at(mu, x) - rhs.at(mu, x)) < 1e-12);
  }
  const DarbouxReport fd = darboux_report(fd_only(data, 1e-3), pts);
  CHECK(fd.max_residual <= 10 * 1e-6);
  CHECK(fd.max_norm_defect < 1e-12);
  CHECK(fd.measured_rank == 1);
}

TEST_CASE("printed appendix phases give A / (r + 1)") {
  // Oracle frame with alpha_k = -beta_k = phi_k: V^dag dV picks up the square of the prefactor.
  const DarbouxData data = two_pair();
  const Point x = oracle::random_points(1, 4, 2, -0.8, 0.8)[0];
  oracle::Fn<CMatrix> printed = [&](const Point& y) {
    CMatrix v(4, 1);
    for (int k = 0; k < 2; ++k) {
      const double rho = 0.5 * std::acos(data.pairs[static_cast<std::size_t>(k)].pi(y));
      const double phi = data.pairs[static_cast<std::size_t>(k)].phi(y);
      v(2 * k, 0) = std::exp(Complex(0, phi)) * std::cos(rho) / std::sqrt(2.0);
      v(2 * k + 1, 0) = std::exp(Complex(0, -phi)) * std::sin(rho) / std::sqrt(2.0);
    }
    return v;
  };
  const GaugePotential a = darboux_potential(data);
  for (int mu = 0; mu < 4; ++mu) {
    const Complex got = (printed(x).adjoint() * oracle::d(printed, mu, x))(0, 0) / kI;
    CHECK(std::abs(got - a.at(mu, x)(0, 0) / 2.0) < 1e-10);
  }
}

TEST_CASE("single block reproduces the EM parametrization") {
  const double rho_hat = 0.37;
  char pi_text[32];
  std::snprintf(pi_text, sizeof pi_text, "%.17g", std::cos(2 * rho_hat));
  const DarbouxData data = darboux_from_expressions(2, {{pi_text, "0.4 * x0 - 1.1 * x1"}});
  const Frame v = darboux_frame(data);
  const ScalarField phi = data.pairs[0].phi;
  const ScalarField minus_phi = ScalarField::analytic(2, 2, [phi](const Point& y, int o) { return -phi.jet(y, o); });
  const Frame em = em_frame({phi, minus_phi, ScalarField::constant(2, rho_hat)});
  for (const Point& x : oracle::random_points(5, 2, 1)) CHECK(max_abs(v(x) - em(x)) < 1e-12);
}

TEST_CASE("plane wave as one Darboux pair") {
  // A_mu = n_mu sin(k.x) = pi d phi with pi = sin(k.x), phi = n.x; |k.x| < pi/2 on the box.
  const DarbouxData data = darboux_from_expressions(4, {{"sin(0.3*x0 + 0.1*x1 + 0.2*x3)", "0.5*x0 - 0.4*x1 + 0.9*x2"}});
  const auto pts = oracle::random_points(50, 4, 5, -1.0, 1.0);
  const DarbouxReport rep = darboux_report(fd_only(data, 1e-3), pts);
  CHECK(rep.max_residual <= 10 * 1e-6);
  CHECK(rep.near_singular_points.empty());
  RVector k(4), n(4);
  k << 0.3, 0.1, 0.0, 0.2;
  n << 0.5, -0.4, 0.9, 0.0;
  const GaugePotential pw = plane_wave_potential(k, n);
  const GaugePotential a = darboux_potential(data);
  for (const Point& x : pts)
    for (int mu = 0; mu < 4; ++mu) CHECK(max_abs(pw.at(mu, x) - a.at(mu, x)) < 1e-14);
}

TEST_CASE("darboux domain errors") {
  const DarbouxData data = darboux_from_expressions(2, {{"0.5", "x0"}, {"2 * x1", "x0"}});
  Point x(2);
  x << 0.1, 0.8;
  try {
    darboux_frame(data)(x);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("pi_1") != std::string::npos);
    CHECK(msg.find("0.8") != std::string::npos);
  }
  CHECK_THROWS_AS(check_darboux(data, {x}), DomainError);
  DarbouxData none;
  CHECK_THROWS_AS(darboux_frame(none), ParameterError);
  const DarbouxData edge = darboux_from_expressions(1, {{"x0", "x0"}});
  Point one(1);
  one << 1.0;
  CHECK_THROWS_AS(extract_potential(darboux_frame(edge)).at(0, one), DomainError);
  const DarbouxDiagnostics diag = check_darboux(edge, {one});
  CHECK(diag.near_singular_points.size() == 1);
}

TEST_CASE("measured rank is the pair count minus one") {
  const auto pts = oracle::random_points(5, 4, 3, -0.9, 0.9);
  CHECK(verify_rank(two_pair(), pts) == 1);
  CHECK(verify_rank(darboux_from_expressions(4, {{"x0", "x1"}}), pts) == 0);
  CHECK(verify_rank(darboux_from_expressions(4, {{"0.7", "x1 + x2"}}), pts) == 0);
  CHECK_THROWS_AS(verify_rank(darboux_from_expressions(4, {{"x0", "x1"}, {"x0", "x1"}}), pts), RankError);
  CHECK_THROWS_AS(verify_rank(darboux_from_expressions(2, {{"x0", "x1"}, {"0.1", "x0"}}), pts), RankError);
  CHECK_FALSE(check_darboux(darboux_from_expressions(4, {{"x0", "x1"}, {"x0", "x1"}}), pts).gradients_independent);
}
