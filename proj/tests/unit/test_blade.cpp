#include "doctest.h"

#include "bladegauge/blade.hpp"
#include "../support/oracle.hpp"

using namespace bladegauge;

namespace {

struct Reference {
  oracle::Fn<CMatrix> r;
  oracle::Fn<CMatrix> s(int mu) const {
    auto rr = r;
    return [rr, mu](const Point& x) { return CMatrix(Complex(0, -0.5) * rr(x) * oracle::d(rr, mu, x)); };
  }
};

Reference reference(const Frame& v) {
  const MatrixField vf = v.field();
  const int big_n = v.big_n();
  return Reference{[vf, big_n](const Point& x) {
    const CMatrix m = vf(x);
    return CMatrix(2.0 * m * m.adjoint() - CMatrix::Identity(big_n, big_n));
  }};
}

}  // namespace

TEST_CASE("blade identities on random frames with analytic derivatives") {
  int count = 0;
  for (int big_n : {2, 4}) {
    for (int n : {1, 2}) {
      if (n == big_n) continue;
      for (std::uint64_t seed = 1; seed <= 3; ++seed, ++count) {
        const Frame v = random_smooth_frame(big_n, n, 3, seed * 31 + static_cast<std::uint64_t>(big_n));
        const RotatingBlade r = blade_from_frame(v);
        const ShapeOperator s = shape_operator(r);
        const Reference ref = reference(v);
        const CMatrix id = CMatrix::Identity(big_n, big_n);
        for (const Point& x : oracle::random_points(3, 3, static_cast<unsigned>(seed))) {
          const CMatrix rx = r(x);
          CHECK(max_abs(rx - ref.r(x)) < 1e-12);
          CHECK(max_abs(rx * rx - id) < 1e-12);
          CHECK(hermiticity_defect(rx) < 1e-12);
          CHECK(std::abs(rx.trace() - Complex(2 * n - big_n)) < 1e-12);
          for (int mu = 0; mu < 3; ++mu) {
            const CMatrix smu = s[mu](x);
            CHECK(max_abs(smu - ref.s(mu)(x)) < 1e-9);
            CHECK(max_abs(rx * smu + smu * rx) < 1e-12);
            CHECK(hermiticity_defect(smu) < 1e-12);
            CHECK(max_abs(lifted_covariant_derivative_matrix(r, r.field(), mu, x)) < 1e-12);
          }
        }
      }
    }
  }
  CHECK(count == 9);
}

TEST_CASE("lifted covariant derivative: frame route equals projector route") {
  const Frame v = random_smooth_frame(4, 2, 2, 5);
  const RotatingBlade r = blade_from_frame(v);
  const MatrixField psi = MatrixField::analytic(2, 2, [](const Point& y, int order) {
    const Jet<double> a = coordinate_jet(y, 0, order);
    const Jet<double> b = coordinate_jet(y, 1, order);
    return assemble(4, 1, {exp_i(a), to_complex(sin(b)), to_complex(a * b), exp_i(-1.0 * b)});
  });
  for (const Point& x : oracle::random_points(4, 2, 2))
    for (int mu = 0; mu < 2; ++mu)
      CHECK(max_abs(lifted_covariant_derivative(r, psi, mu, x) - lifted_covariant_derivative_projector(r, psi, mu, x)) < 1e-12);
}

TEST_CASE("lifted derivative maps the blade to itself") {
  // V A-covariant data: D_mu (V chi) = V (D_mu chi) with A = -i V^dag dV.
  const Frame v = random_smooth_frame(3, 1, 2, 8);
  const RotatingBlade r = blade_from_frame(v);
  const GaugePotential a = extract_potential(v);
  const MatrixField chi = MatrixField::analytic(2, 2, [](const Point& y, int order) {
    return assemble(1, 1, {exp_i(coordinate_jet(y, 0, order) * coordinate_jet(y, 1, order))});
  });
  const MatrixField vchi = MatrixField::analytic(2, 2, [v, chi](const Point& y, int order) {
    return v.field().jet(y, order) * chi.jet(y, order);
  });
  for (const Point& x : oracle::random_points(3, 2, 4))
    for (int mu = 0; mu < 2; ++mu)
      CHECK(max_abs(lifted_covariant_derivative(r, vchi, mu, x) - v(x) * covariant_derivative(a, chi, mu, x)) < 1e-12);
}

TEST_CASE("four curvature expressions agree") {
  const Frame v = random_smooth_frame(4, 2, 3, 17);
  const RotatingBlade r = blade_from_frame(v);
  const auto pts = oracle::random_points(3, 3, 6);
  const BladeCurvatureResult res = blade_curvature(r, pts, 1e-10);
  CHECK(res.max_discrepancy < 1e-10);
  const RotatingBlade fd(4, r.field().finite_difference_only(1e-3));
  CHECK(blade_curvature(fd, pts, 1e-5).max_discrepancy < 10 * 1e-6);
}

TEST_CASE("blade curvature against stencil oracle") {
  const Frame v = random_smooth_frame(3, 1, 2, 23);
  const Reference ref = reference(v);
  const BladeCurvature omega = blade_curvature_form(blade_from_frame(v));
  for (const Point& x : oracle::random_points(3, 2, 7)) {
    const CMatrix expected = Complex(0, -0.25) * oracle::comm(oracle::d(ref.r, 0, x), oracle::d(ref.r, 1, x));
    CHECK(max_abs(omega.value(0, 1, x) - expected) < 1e-9);
  }
}

TEST_CASE("shape identity") {
  const Frame v = random_smooth_frame(4, 1, 3, 2);
  const ShapeOperator s = shape_operator(blade_from_frame(v));
  for (const Point& x : oracle::random_points(3, 3, 9))
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu) CHECK(max_abs(shape_identity_residual(s, mu, nu, x)) < 1e-11);
}

TEST_CASE("gauge elimination") {
  const Frame v = random_smooth_frame(4, 2, 3, 40);
  const RotatingBlade r = blade_from_frame(v);
  const BladeCurvature om = blade_curvature_form(r);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const GaugeMap u = random_gauge_map(2, 3, seed);
    const Frame vp = transform_frame(v, u);
    const RotatingBlade rp = blade_from_frame(vp);
    const BladeCurvature omp = blade_curvature_form(rp);
    const GaugePotential a = extract_potential(v);
    const GaugePotential ap = extract_potential(vp);
    const GaugePotential at = gauge_transform(a, u);
    for (const Point& x : oracle::random_points(2, 3, static_cast<unsigned>(seed))) {
      CHECK(max_abs(r(x) - rp(x)) < 1e-12);
      CHECK(max_abs(om.value(0, 2, x) - omp.value(0, 2, x)) < 1e-10);
      for (int mu = 0; mu < 3; ++mu) CHECK(max_abs(ap.at(mu, x) - at.at(mu, x)) < 1e-10);
    }
  }
}

TEST_CASE("extracted potential reproduces the frame equation") {
  const Frame v = random_smooth_frame(3, 2, 2, 3);
  const GaugePotential a = extract_potential(v);
  const MatrixField vf = v.field();
  oracle::Fn<CMatrix> plain = [vf](const Point& x) { return vf(x); };
  for (const Point& x : oracle::random_points(3, 2, 1))
    for (int mu = 0; mu < 2; ++mu)
      CHECK(max_abs(vf(x).adjoint() * oracle::d(plain, mu, x) - kI * a.at(mu, x)) < 1e-10);
}

TEST_CASE("frame validation") {
  CMatrix bad(2, 1);
  bad << 1.0, 0.1;
  const Frame v(2, 1, MatrixField::constant(1, bad));
  CHECK_THROWS_AS(v(Point::Zero(1)), DomainError);
  CHECK_THROWS_AS(Frame(2, 3, MatrixField::constant(1, bad)), DimensionError);
  const MatrixField skew = MatrixField::analytic(1, 2, [](const Point& y, int order) {
    const Jet<double> t = coordinate_jet(y, 0, order);
    return assemble(2, 1, {to_complex(cos(t)), to_complex(1.0001 * sin(t))});
  });
  CHECK_THROWS(extract_potential(Frame(2, 1, skew)).at(0, Point::Ones(1)));
}

TEST_CASE("shape gauge decomposition") {
  const Frame v = random_smooth_frame(4, 2, 3, 12);
  const MatrixField w = complement_frame_field(v);
  const auto pts = oracle::random_points(3, 3, 2);
  const ShapeGaugeDecomposition dec = shape_gauge_decompose(v, w, pts, 1e-5);
  CHECK(dec.max_residual < 10 * 1e-6);
  for (const Point& x : pts) {
    const CMatrix u = [&] {
      CMatrix m(4, 4);
      m << v(x), w(x);
      return m;
    }();
    CHECK(unitarity_defect(u) < 1e-12);
  }
}

TEST_CASE("complement frame") {
  const CMatrix v = random_unitary(5, 3).leftCols(2);
  const CMatrix w = complement_frame(v);
  CHECK(w.cols() == 3);
  CHECK(max_abs(v.adjoint() * w) < 1e-13);
  CHECK(unitarity_defect(w) < 1e-13);
}

TEST_CASE("complement field carries analytic derivatives of the same branch") {
  const Frame v = random_smooth_frame(4, 1, 3, 14);
  const MatrixField w = complement_frame_field(v);
  CHECK(w.max_order() == 2);
  const oracle::Fn<CMatrix> plain = [w](const Point& y) { return w(y); };
  for (const Point& x : oracle::random_points(3, 3, 12)) {
    CHECK(max_abs(w(x) - complement_frame(v(x))) < 1e-13);
    for (int mu = 0; mu < 3; ++mu) {
      CHECK(max_abs(w.partial(mu, x) - oracle::d(plain, mu, x)) < 1e-9);
      CHECK(max_abs(w.partial2(mu, 2, x) - oracle::d(oracle::d_fn(plain, 2), mu, x)) < 1e-6);
    }
  }
  // Value-only frames keep the value-only completion.
  const Frame fd(4, 1, v.field().finite_difference_only(1e-3));
  CHECK(complement_frame_field(fd).max_order() == 0);
}

TEST_CASE("canonical frame is the direct rotation") {
  const CMatrix v0 = reference_frame(4, 2);
  const CMatrix r0 = reference_blade(4, 2);
  const CMatrix u = unitary_exp(0.3 * random_hermitian(4, 9));
  const CMatrix v = u * v0 * random_unitary(2, 4);
  const CMatrix r = 2.0 * v * v.adjoint() - CMatrix::Identity(4, 4);
  const CMatrix p = v * v.adjoint();
  const CMatrix vc = canonical_frame(p, v0);
  Eigen::ComplexEigenSolver<CMatrix> es(r * r0);
  const CMatrix sq = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().inverse();
  CHECK(max_abs(vc - sq * v0) < 1e-10);
  CHECK(max_abs(vc * vc.adjoint() - p) < 1e-12);
  const CMatrix u1 = canonical_rotation(p, v0);
  CHECK(unitarity_defect(u1) < 1e-12);
  CHECK(max_abs(u1 * r0 * u1.adjoint() - r) < 1e-12);
  CHECK(max_abs(u1 * r0 - r0 * u1.adjoint()) < 1e-12);
  CHECK(max_abs(vc.adjoint() * v0 - (vc.adjoint() * v0).adjoint()) < 1e-12);
}

TEST_CASE("canonical frame fails at a right principal angle") {
  const CMatrix v0 = reference_frame(2, 1);
  CMatrix p = CMatrix::Zero(2, 2);
  p(1, 1) = 1.0;
  CHECK_THROWS_AS(canonical_frame(p, v0), ChartError);
}
