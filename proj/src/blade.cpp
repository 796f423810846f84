#include "bladegauge/blade.hpp"

#include <algorithm>

namespace bladegauge {

Frame::Frame(int big_n, int n, MatrixField v) : big_n_(big_n), n_(n) {
  if (n < 1 || n > big_n) throw DimensionError("Frame: need 1 <= n <= N");
  const double tol = default_tolerances().algebraic;
  const MatrixField src = std::move(v);
  v_ = MatrixField::analytic(src.dim(), src.max_order(), [src, big_n, n, tol](const Point& x, int order) {
    Jet<CMatrix> j = src.jet(x, order);
    if (j.value.rows() != big_n || j.value.cols() != n)
      throw DimensionError("Frame: V(x) has shape " + std::to_string(j.value.rows()) + "x" +
                           std::to_string(j.value.cols()));
    const double defect = unitarity_defect(j.value);
    if (defect > tol)
      throw DomainError("Frame: V^dag V differs from I by " + std::to_string(defect));
    return j;
  }, src.step());
}

MatrixField RotatingBlade::projector() const {
  const MatrixField r = r_;
  const int big_n = big_n_;
  return MatrixField::analytic(r.dim(), r.max_order(), [r, big_n](const Point& x, int order) {
    const Jet<CMatrix> jr = r.jet(x, order);
    return 0.5 * (jr + constant_jet<CMatrix>(CMatrix::Identity(big_n, big_n), jr.dim, order));
  }, r.step());
}

GaugePotential extract_potential(const Frame& v) {
  const MatrixField vf = v.field();
  // With a finite-difference derivative the Hermitian part of V^dag dV is
  // itself an O(h^2) stencil error, so the guard widens to the FD budget.
  const Tolerances& t = default_tolerances();
  const double tol = vf.max_order() >= 1
                         ? t.frame_hermiticity
                         : std::max(t.frame_hermiticity, t.fd_factor * vf.step() * vf.step());
  std::vector<MatrixField> comps;
  for (int mu = 0; mu < v.dim(); ++mu) {
    comps.push_back(derived_field<CMatrix>(v.dim(), vf.max_order(), 1, vf.step(), [vf, mu, tol](const Point& x, int order) {
      const Jet<CMatrix> jv = vf.jet(x, order + 1);
      Jet<CMatrix> a = -kI * (adjoint(jv) * derivative(jv, mu));
      const double defect = hermiticity_defect(a.value);
      if (defect > tol)
        throw InconsistencyError("extract_potential: -i V^dag dV is not Hermitian (defect " +
                                 std::to_string(defect) + ")");
      return hermitian_part(a);
    }));
  }
  return GaugePotential(v.n(), std::move(comps));
}

RotatingBlade blade_from_frame(const Frame& v) {
  const MatrixField vf = v.field();
  const int big_n = v.big_n();
  return RotatingBlade(big_n, MatrixField::analytic(v.dim(), vf.max_order(), [vf, big_n](const Point& x, int order) {
    const Jet<CMatrix> jv = vf.jet(x, order);
    return 2.0 * (jv * adjoint(jv)) - constant_jet<CMatrix>(CMatrix::Identity(big_n, big_n), jv.dim, order);
  }, vf.step()));
}

ShapeOperator shape_operator(const RotatingBlade& r) {
  const MatrixField rf = r.field();
  std::vector<MatrixField> s;
  for (int mu = 0; mu < r.dim(); ++mu) {
    s.push_back(derived_field<CMatrix>(r.dim(), rf.max_order(), 1, rf.step(), [rf, mu](const Point& x, int order) {
      const Jet<CMatrix> jr = rf.jet(x, order + 1);
      return Complex(0.0, -0.5) * (jr * derivative(jr, mu));
    }));
  }
  return ShapeOperator(std::move(s));
}

BladeCurvature blade_curvature_form(const RotatingBlade& r) {
  const ShapeOperator s = shape_operator(r);
  const int d = r.dim();
  std::vector<MatrixField> upper;
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu + 1; nu < d; ++nu) {
      const MatrixField sm = s[mu];
      const MatrixField sn = s[nu];
      upper.push_back(derived_field<CMatrix>(d, sm.max_order(), 0, sm.step(), [sm, sn](const Point& x, int order) {
        return -kI * commutator(sm.jet(x, order), sn.jet(x, order));
      }));
    }
  }
  return BladeCurvature(d, std::move(upper));
}

double CurvatureExpressions::max_discrepancy() const {
  const CMatrix* all[] = {&probe, &shape, &blade, &projector};
  double m = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) m = std::max(m, max_abs(*all[i] - *all[j]));
  return m;
}

MatrixField lifted_covariant_derivative_field(const RotatingBlade& r, const MatrixField& psi, int mu) {
  const MatrixField s = shape_operator(r)[mu];
  const int src = std::min(psi.max_order(), s.max_order() + 1);
  return derived_field<CMatrix>(psi.dim(), src, 1, psi.step(), [s, psi, mu](const Point& x, int order) {
    const Jet<CMatrix> jp = psi.jet(x, order + 1);
    return derivative(jp, mu) + kI * (s.jet(x, order) * jp);
  });
}

CurvatureExpressions curvature_expressions(const RotatingBlade& r, int mu, int nu, const Point& x) {
  const int big_n = r.big_n();
  const ShapeOperator s = shape_operator(r);
  CurvatureExpressions out;

  // Probe fields: the constant basis vectors, i.e. the columns of I_N.
  const MatrixField probes = MatrixField::constant(r.dim(), CMatrix::Identity(big_n, big_n));
  const MatrixField dnu = lifted_covariant_derivative_field(r, probes, nu);
  const MatrixField dmu = lifted_covariant_derivative_field(r, probes, mu);
  const CMatrix dmu_dnu = lifted_covariant_derivative_field(r, dnu, mu)(x);
  const CMatrix dnu_dmu = lifted_covariant_derivative_field(r, dmu, nu)(x);
  out.probe = -kI * (dmu_dnu - dnu_dmu);

  out.shape = -kI * commutator(s[mu](x), s[nu](x));
  const CMatrix dr_mu = r.field().partial(mu, x);
  const CMatrix dr_nu = r.field().partial(nu, x);
  out.blade = Complex(0.0, -0.25) * commutator(dr_mu, dr_nu);
  const MatrixField p = r.projector();
  out.projector = -kI * commutator(p.partial(mu, x), p.partial(nu, x));
  return out;
}

BladeCurvatureResult blade_curvature(const RotatingBlade& r, const std::vector<Point>& samples, double tol) {
  BladeCurvatureResult result;
  result.omega = blade_curvature_form(r);
  for (const Point& x : samples) {
    for (int mu = 0; mu < r.dim(); ++mu) {
      for (int nu = mu + 1; nu < r.dim(); ++nu) {
        result.max_discrepancy =
            std::max(result.max_discrepancy, curvature_expressions(r, mu, nu, x).max_discrepancy());
      }
    }
  }
  if (result.max_discrepancy > tol) {
    throw InconsistencyError("blade_curvature: expressions disagree by " +
                             std::to_string(result.max_discrepancy));
  }
  return result;
}

CVector lifted_covariant_derivative(const RotatingBlade& r, const MatrixField& psi, int mu, const Point& x) {
  const CMatrix value = psi(x);
  if (value.rows() != r.big_n()) throw DimensionError("lifted_covariant_derivative: Psi has wrong length");
  const CMatrix s = shape_operator(r)[mu](x);
  return (psi.partial(mu, x) + kI * s * value).col(0);
}

CVector lifted_covariant_derivative_projector(const RotatingBlade& r, const MatrixField& psi, int mu,
                                              const Point& x) {
  const MatrixField p = r.projector();
  const int big_n = r.big_n();
  const MatrixField p_psi = MatrixField::analytic(psi.dim(), std::min(p.max_order(), psi.max_order()),
      [p, psi](const Point& y, int order) { return p.jet(y, order) * psi.jet(y, order); }, psi.step());
  const MatrixField q_psi = MatrixField::analytic(psi.dim(), std::min(p.max_order(), psi.max_order()),
      [p, psi, big_n](const Point& y, int order) {
        const Jet<CMatrix> jp = p.jet(y, order);
        const Jet<CMatrix> q = constant_jet<CMatrix>(CMatrix::Identity(big_n, big_n), jp.dim, order) - jp;
        return q * psi.jet(y, order);
      }, psi.step());
  const CMatrix pv = p(x);
  const CMatrix qv = CMatrix::Identity(big_n, big_n) - pv;
  return (pv * p_psi.partial(mu, x) + qv * q_psi.partial(mu, x)).col(0);
}

CMatrix lifted_covariant_derivative_matrix(const RotatingBlade& r, const MatrixField& m, int mu,
                                           const Point& x) {
  const CMatrix s = shape_operator(r)[mu](x);
  return m.partial(mu, x) + kI * commutator(s, m(x));
}

CMatrix shape_identity_residual(const ShapeOperator& s, int mu, int nu, const Point& x) {
  return s[nu].partial(mu, x) - s[mu].partial(nu, x) + 2.0 * kI * commutator(s[mu](x), s[nu](x));
}

CMatrix complement_frame(const CMatrix& v, double pivot) {
  const auto big_n = v.rows();
  const auto n = v.cols();
  CMatrix basis(big_n, big_n);
  basis.leftCols(n) = v;
  Eigen::Index filled = n;
  for (Eigen::Index k = 0; k < big_n && filled < big_n; ++k) {
    CVector w = CVector::Unit(big_n, k);
    for (int pass = 0; pass < 2; ++pass) {
      const auto b = basis.leftCols(filled);
      w -= b * (b.adjoint() * w);
    }
    const double norm = w.norm();
    if (norm < pivot) continue;
    basis.col(filled++) = w / norm;
  }
  if (filled != big_n) throw InconsistencyError("complement_frame: could not complete the basis");
  return basis.rightCols(big_n - n);
}

namespace {

Jet<CMatrix> hcat(const std::vector<Jet<CMatrix>>& cols) {
  const Jet<CMatrix>& c0 = cols.front();
  const auto rows = c0.value.rows();
  auto build = [&](auto get) {
    CMatrix m(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t a = 0; a < cols.size(); ++a) m.col(static_cast<Eigen::Index>(a)) = get(cols[a]);
    return m;
  };
  Jet<CMatrix> out;
  out.dim = c0.dim;
  out.order = c0.order;
  out.value = build([](const Jet<CMatrix>& c) { return c.value; });
  for (int mu = 0; out.order >= 1 && mu < out.dim; ++mu)
    out.d1.push_back(build([mu](const Jet<CMatrix>& c) { return c.first(mu); }));
  for (int mu = 0; out.order >= 2 && mu < out.dim; ++mu)
    for (int nu = 0; nu < out.dim; ++nu) out.d2.push_back(build([mu, nu](const Jet<CMatrix>& c) { return c.second(mu, nu); }));
  return out;
}

// The Gram-Schmidt completion carried through jets: the pivots are chosen
// from the values exactly as in complement_frame, so the values agree and
// the derivatives are those of that same (locally smooth) branch.
Jet<CMatrix> complement_jet(const Jet<CMatrix>& v, double pivot) {
  const auto big_n = v.value.rows();
  const auto n = v.value.cols();
  Jet<CMatrix> q = constant_jet<CMatrix>(CMatrix::Identity(big_n, big_n), v.dim, v.order) - v * adjoint(v);
  std::vector<Jet<CMatrix>> cols;
  for (Eigen::Index k = 0; k < big_n && n + static_cast<Eigen::Index>(cols.size()) < big_n; ++k) {
    const Jet<CMatrix> w = jet_map(q, [k](const CMatrix& m) { return CMatrix(m.col(k)); });
    const Jet<double> norm2 = jet_map(adjoint(w) * w, [](const CMatrix& m) { return m(0, 0).real(); });
    if (std::sqrt(norm2.value) < pivot) continue;
    const Jet<CMatrix> u = reciprocal(sqrt(norm2)) * w;
    q = q - u * adjoint(u);
    cols.push_back(u);
  }
  if (n + static_cast<Eigen::Index>(cols.size()) != big_n) throw InconsistencyError("complement_frame: could not complete the basis");
  return hcat(cols);
}

Jet<CMatrix> orthonormal_jet(const Jet<CMatrix>& v) {
  std::vector<Jet<CMatrix>> cols;
  for (Eigen::Index k = 0; k < v.value.cols(); ++k) {
    Jet<CMatrix> w = jet_map(v, [k](const CMatrix& m) { return CMatrix(m.col(k)); });
    for (const auto& u : cols) w = w - u * (adjoint(u) * w);
    const Jet<double> norm2 = jet_map(adjoint(w) * w, [](const CMatrix& m) { return m(0, 0).real(); });
    if (!(std::sqrt(norm2.value) > default_tolerances().pivot)) throw RankError("orthonormalized_frame: columns are linearly dependent");
    cols.push_back(reciprocal(sqrt(norm2)) * w);
  }
  return hcat(cols);
}

}  // namespace

Frame orthonormalized_frame(int big_n, int n, const MatrixField& v) {
  if (v.max_order() == 0) {
    return Frame(big_n, n, MatrixField(v.dim(), [v](const Point& x) {
      return orthonormal_jet(constant_jet<CMatrix>(v(x), v.dim(), 0)).value;
    }, v.step()));
  }
  return Frame(big_n, n, MatrixField::analytic(v.dim(), v.max_order(), [v](const Point& x, int order) {
    return orthonormal_jet(v.jet(x, order));
  }, v.step()));
}

MatrixField complement_frame_field(const Frame& v) {
  const MatrixField vf = v.field();
  const double pivot = default_tolerances().pivot;
  if (vf.max_order() == 0)
    return MatrixField(v.dim(), [vf, pivot](const Point& x) { return complement_frame(vf(x), pivot); }, vf.step());
  return MatrixField::analytic(v.dim(), vf.max_order(), [vf, pivot](const Point& x, int order) {
    return complement_jet(vf.jet(x, order), pivot);
  }, vf.step());
}

double ShapeGaugeResiduals::max() const {
  return std::max({shape, omega, f_projection, g_projection});
}

namespace {

GaugePotential complementary_connection(const MatrixField& w) {
  std::vector<MatrixField> comps;
  for (int mu = 0; mu < w.dim(); ++mu) {
    comps.push_back(derived_field<CMatrix>(w.dim(), w.max_order(), 1, w.step(), [w, mu](const Point& x, int order) {
      const Jet<CMatrix> jw = w.jet(x, order + 1);
      return -kI * (adjoint(jw) * derivative(jw, mu));
    }));
  }
  const Point origin = Point::Zero(w.dim());
  return GaugePotential(static_cast<int>(w(origin).cols()), std::move(comps));
}

CMatrix block_diag(const CMatrix& a, const CMatrix& c) {
  CMatrix out = CMatrix::Zero(a.rows() + c.rows(), a.cols() + c.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(c.rows(), c.cols()) = c;
  return out;
}

}  // namespace

ShapeGaugeResiduals shape_gauge_residuals(const Frame& v, const MatrixField& w, const Point& x) {
  const GaugePotential a = extract_potential(v);
  const GaugePotential c = complementary_connection(w);
  const FieldStrength f = field_strength(a);
  const FieldStrength g = field_strength(c);
  const RotatingBlade r = blade_from_frame(v);
  const ShapeOperator s = shape_operator(r);
  const BladeCurvature omega = blade_curvature_form(r);

  const CMatrix vx = v(x);
  const CMatrix wx = w(x);
  CMatrix u(vx.rows(), vx.rows());
  u << vx, wx;
  if (unitarity_defect(u) > default_tolerances().algebraic * 100)
    throw DomainError("shape_gauge_residuals: (V, W) is not unitary");

  ShapeGaugeResiduals res;
  for (int mu = 0; mu < v.dim(); ++mu) {
    CMatrix du(vx.rows(), vx.rows());
    du << v.field().partial(mu, x), w.partial(mu, x);
    const CMatrix rebuilt = u * block_diag(a.at(mu, x), c.at(mu, x)) * u.adjoint() - kI * u * du.adjoint();
    res.shape = std::max(res.shape, max_abs(s[mu](x) - rebuilt));
    for (int nu = mu + 1; nu < v.dim(); ++nu) {
      const CMatrix om = omega.value(mu, nu, x);
      const CMatrix fv = f.value(mu, nu, x);
      const CMatrix gv = g.value(mu, nu, x);
      res.omega = std::max(res.omega, max_abs(om - u * block_diag(fv, gv) * u.adjoint()));
      res.f_projection = std::max(res.f_projection, max_abs(fv - vx.adjoint() * om * vx));
      res.g_projection = std::max(res.g_projection, max_abs(gv - wx.adjoint() * om * wx));
    }
  }
  return res;
}

ShapeGaugeDecomposition shape_gauge_decompose(const Frame& v, const MatrixField& w,
                                              const std::vector<Point>& samples, double tol) {
  ShapeGaugeDecomposition out;
  out.c = complementary_connection(w);
  out.g = field_strength(out.c);
  for (const Point& x : samples) out.max_residual = std::max(out.max_residual, shape_gauge_residuals(v, w, x).max());
  if (out.max_residual > tol) {
    throw InconsistencyError("shape_gauge_decompose: reconstruction residual " +
                             std::to_string(out.max_residual));
  }
  return out;
}

namespace {

/// Orthonormal basis of the range of a rank-k Hermitian projector.
CMatrix range_basis(const CMatrix& p, Eigen::Index k) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(p));
  return eig.eigenvectors().rightCols(k);
}

/// p v0 (v0^dag p v0)^{-1/2}, computed through the SVD of the overlap.
CMatrix direct_image(const CMatrix& p, const CMatrix& v0) {
  const CMatrix basis = range_basis(p, v0.cols());
  const CMatrix overlap = basis.adjoint() * v0;
  Eigen::JacobiSVD<CMatrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smallest = svd.singularValues().minCoeff();
  if (smallest < 1e-8) {
    throw ChartError("canonical_frame: principal angle reaches pi/2 (smallest cosine " +
                     std::to_string(smallest) + ")");
  }
  return basis * svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

CMatrix canonical_frame(const CMatrix& p, const CMatrix& v0) {
  if (p.rows() != v0.rows()) throw DimensionError("canonical_frame: P and V0 differ in N");
  return direct_image(p, v0);
}

CMatrix canonical_rotation(const CMatrix& p, const CMatrix& v0) {
  const auto big_n = v0.rows();
  const auto n = v0.cols();
  const CMatrix v_can = canonical_frame(p, v0);
  if (n == big_n) return v_can * v0.adjoint();
  const CMatrix w0 = complement_frame(v0);
  const CMatrix q = CMatrix::Identity(big_n, big_n) - p;
  const CMatrix w_can = direct_image(q, w0);
  return v_can * v0.adjoint() + w_can * w0.adjoint();
}

Frame canonical_frame_field(const RotatingBlade& r, const CMatrix& v0) {
  const MatrixField p = r.projector();
  return Frame(static_cast<int>(v0.rows()), static_cast<int>(v0.cols()),
               MatrixField(r.dim(), [p, v0](const Point& x) { return canonical_frame(p(x), v0); }, p.step()));
}

MatrixField canonical_rotation_field(const RotatingBlade& r, const CMatrix& v0) {
  const MatrixField p = r.projector();
  return MatrixField(r.dim(), [p, v0](const Point& x) { return canonical_rotation(p(x), v0); }, p.step());
}

Frame transform_frame(const Frame& v, const GaugeMap& u) {
  const MatrixField vf = v.field();
  const MatrixField uf = u.field();
  return Frame(v.big_n(), v.n(), MatrixField::analytic(v.dim(), std::min(vf.max_order(), uf.max_order()),
      [vf, uf](const Point& x, int order) { return vf.jet(x, order) * adjoint(uf.jet(x, order)); }, vf.step()));
}

Frame random_smooth_frame(int big_n, int n, int dim, std::uint64_t seed) {
  const MatrixField u = random_smooth_unitary(big_n, dim, seed);
  const CMatrix v0 = reference_frame(big_n, n);
  return Frame(big_n, n, MatrixField::analytic(dim, 2, [u, v0](const Point& x, int order) {
    return jet_map(u.jet(x, order), [&v0](const CMatrix& m) { return CMatrix(m * v0); });
  }));
}

}  // namespace bladegauge
