#include "bladegauge/embedded.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

namespace bladegauge {

namespace {

// Stacks scalar jets into an N x 1 column jet.
Jet<RMatrix> column(const std::vector<Jet<double>>& comps) {
  const int n = static_cast<int>(comps.size());
  const int d = comps.front().dim;
  int order = 2;
  for (const Jet<double>& c : comps) order = std::min(order, c.order);
  auto build = [&](auto get) {
    RMatrix m(n, 1);
    for (int i = 0; i < n; ++i) m(i, 0) = get(comps[static_cast<std::size_t>(i)]);
    return m;
  };
  Jet<RMatrix> out;
  out.dim = d;
  out.order = order;
  out.value = build([](const Jet<double>& c) { return c.value; });
  for (int mu = 0; order >= 1 && mu < d; ++mu)
    out.d1.push_back(build([mu](const Jet<double>& c) { return c.first(mu); }));
  for (int mu = 0; order >= 2 && mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu)
      out.d2.push_back(build([mu, nu](const Jet<double>& c) { return c.second(mu, nu); }));
  return out;
}

// Places N x 1 column jets side by side.
Jet<RMatrix> hcat(const std::vector<Jet<RMatrix>>& cols) {
  const Jet<RMatrix>& c0 = cols.front();
  const auto rows = c0.value.rows();
  const auto n = static_cast<Eigen::Index>(cols.size());
  auto build = [&](auto get) {
    RMatrix m(rows, n);
    for (Eigen::Index a = 0; a < n; ++a) m.col(a) = get(cols[static_cast<std::size_t>(a)]);
    return m;
  };
  Jet<RMatrix> out;
  out.dim = c0.dim;
  out.order = c0.order;
  out.value = build([](const Jet<RMatrix>& c) { return c.value; });
  for (int mu = 0; out.order >= 1 && mu < out.dim; ++mu)
    out.d1.push_back(build([mu](const Jet<RMatrix>& c) { return c.first(mu); }));
  for (int mu = 0; out.order >= 2 && mu < out.dim; ++mu)
    for (int nu = 0; nu < out.dim; ++nu)
      out.d2.push_back(build([mu, nu](const Jet<RMatrix>& c) { return c.second(mu, nu); }));
  return out;
}

Jet<RMatrix> tangent_jet(const RealField& f, const Point& x, int order) {
  const Jet<RMatrix> fj = f.jet(x, order + 1);
  std::vector<Jet<RMatrix>> cols;
  for (int mu = 0; mu < f.dim(); ++mu) cols.push_back(derivative(fj, mu));
  return hcat(cols);
}

std::string format_coordinate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check_metric(const RMatrix& g, const Point& x) {
  const Eigen::SelfAdjointEigenSolver<RMatrix> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  const double limit = default_tolerances().metric_condition;
  if (!(lo > 0.0) || hi / lo > limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "degenerate chart: metric condition number %.3e exceeds %.1e at x = (",
                  lo > 0.0 ? hi / lo : INFINITY, limit);
    std::string msg = buf;
    for (Eigen::Index i = 0; i < x.size(); ++i) msg += (i ? ", " : "") + format_coordinate(x(i));
    throw ChartError(msg + ")");
  }
}

RMatrix blade_derivative(const Embedding& e, const Point& x, int mu) {
  if (mu < 0 || mu >= e.dim()) throw DimensionError("embedded: axis out of range");
  return 2.0 * e.projector().partial(mu, x);
}

RMatrix comm(const RMatrix& a, const RMatrix& b) { return a * b - b * a; }

RealField analytic_map(int dim, std::function<std::vector<Jet<double>>(const Point&, int)> comps) {
  return RealField::analytic(dim, 2, [comps](const Point& x, int order) { return column(comps(x, order)); });
}

}  // namespace

Embedding::Embedding(int dim, int ambient, RealField f) : dim_(dim), ambient_(ambient), f_(std::move(f)) {
  if (dim < 1 || ambient <= dim) throw DimensionError("Embedding: need 1 <= d < N");
  if (f_.dim() != dim) throw DimensionError("Embedding: map dimension differs from d");
  const RealField fm = f_;
  p_ = derived_field<RMatrix>(dim, f_.max_order(), 1, f_.step(), [fm](const Point& x, int order) {
    const Jet<RMatrix> big_f = tangent_jet(fm, x, order);
    const Jet<RMatrix> ft = adjoint(big_f);
    const Jet<RMatrix> g = ft * big_f;
    check_metric(g.value, x);
    return big_f * inverse(g) * ft;
  });
}

RMatrix Embedding::tangents(const Point& x) const { return tangent_jet(f_, x, 0).value; }

Embedding plane_embedding() {
  return Embedding(2, 3, analytic_map(2, [](const Point& x, int o) {
    return std::vector<Jet<double>>{coordinate_jet(x, 0, o), coordinate_jet(x, 1, o), constant_jet(0.0, 2, o)};
  }));
}

Embedding sphere_embedding(double a) {
  if (!(a > 0.0)) throw ParameterError("sphere_embedding: radius must be positive");
  return Embedding(2, 3, analytic_map(2, [a](const Point& x, int o) {
    const Jet<double> th = coordinate_jet(x, 0, o);
    const Jet<double> ph = coordinate_jet(x, 1, o);
    return std::vector<Jet<double>>{a * (sin(th) * cos(ph)), a * (sin(th) * sin(ph)), a * cos(th)};
  }));
}

Embedding cylinder_embedding() {
  return Embedding(2, 3, analytic_map(2, [](const Point& x, int o) {
    const Jet<double> u = coordinate_jet(x, 0, o);
    return std::vector<Jet<double>>{cos(u), sin(u), coordinate_jet(x, 1, o)};
  }));
}

Embedding torus_embedding(double rmaj, double rmin) {
  if (!(rmin > 0.0) || !(rmaj > rmin)) throw ParameterError("torus_embedding: need rmaj > rmin > 0");
  return Embedding(2, 3, analytic_map(2, [rmaj, rmin](const Point& x, int o) {
    const Jet<double> u = coordinate_jet(x, 0, o);
    const Jet<double> v = coordinate_jet(x, 1, o);
    const Jet<double> w = rmaj + rmin * cos(v);
    return std::vector<Jet<double>>{w * cos(u), w * sin(u), rmin * sin(v)};
  }));
}

Embedding builtin_embedding(const std::string& name, double a, double rmaj, double rmin) {
  if (name == "plane") return plane_embedding();
  if (name == "sphere") return sphere_embedding(a);
  if (name == "cylinder") return cylinder_embedding();
  if (name == "torus") return torus_embedding(rmaj, rmin);
  throw ParameterError("unknown surface '" + name + "' (expected plane, sphere, cylinder or torus)");
}

RMatrix induced_metric(const Embedding& e, const Point& x) {
  const RMatrix f = e.tangents(x);
  const RMatrix g = f.transpose() * f;
  check_metric(g, x);
  return g;
}

RMatrix embedded_blade(const Embedding& e, const Point& x) {
  return 2.0 * e.projector()(x) - RMatrix::Identity(e.ambient(), e.ambient());
}

RMatrix embedded_shape(const Embedding& e, const Point& x, int mu) {
  return 0.5 * embedded_blade(e, x) * blade_derivative(e, x, mu);
}

double curvature_discrepancy(const Embedding& e, const Point& x, int mu, int nu) {
  const RMatrix via_shape = -comm(embedded_shape(e, x, mu), embedded_shape(e, x, nu));
  const RMatrix via_blade = 0.25 * comm(blade_derivative(e, x, mu), blade_derivative(e, x, nu));
  return max_abs(via_shape - via_blade);
}

RMatrix embedded_curvature(const Embedding& e, const Point& x, int mu, int nu) {
  const RMatrix omega = -comm(embedded_shape(e, x, mu), embedded_shape(e, x, nu));
  const double gap = curvature_discrepancy(e, x, mu, nu);
  const double tol = 10.0 * default_tolerances().fd_tolerance();
  if (gap > tol) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "embedded_curvature: shape and blade expressions differ by %.3e (limit %.1e)", gap, tol);
    throw InconsistencyError(buf);
  }
  return omega;
}

double riemann_component(const Embedding& e, const Point& x, int rho, int sigma, int mu, int nu) {
  const RMatrix f = e.tangents(x);
  if (rho < 0 || rho >= e.dim() || sigma < 0 || sigma >= e.dim()) throw DimensionError("riemann_component: index out of range");
  return f.col(rho).dot(embedded_curvature(e, x, mu, nu) * f.col(sigma));
}

double gauss_curvature(const Embedding& e, const Point& x) {
  if (e.dim() != 2) throw DimensionError("gauss_curvature: surfaces only");
  return riemann_component(e, x, 0, 1, 0, 1) / induced_metric(e, x).determinant();
}

double embedded_shape_identity_residual(const Embedding& e, const Point& x, int mu, int nu) {
  auto shape_field = [&e](int k) {
    return RealField(e.dim(), [e, k](const Point& y) { return embedded_shape(e, y, k); }, e.map().step());
  };
  const RMatrix lhs = shape_field(nu).partial(mu, x) - shape_field(mu).partial(nu, x) +
                      2.0 * comm(embedded_shape(e, x, mu), embedded_shape(e, x, nu));
  return max_abs(lhs);
}

double tangent_derivative_defect(const Embedding& e, const Point& x, int mu, const RVector& coeffs) {
  if (coeffs.size() != e.dim()) throw DimensionError("tangent_derivative_defect: need d coefficients");
  const RMatrix f = e.tangents(x);
  const RVector v = f * coeffs;
  RVector dv = RVector::Zero(e.ambient());
  for (int a = 0; a < e.dim(); ++a) dv += coeffs(a) * e.map().partial2(mu, a, x).col(0);
  const RVector cov = dv + embedded_shape(e, x, mu) * v;
  return max_abs(e.projector()(x) * cov - cov);
}

double weingarten_defect(const Embedding& e, const Point& x, int mu, int nu) {
  const RMatrix p = e.projector()(x);
  const RMatrix perp = RMatrix::Identity(e.ambient(), e.ambient()) - p;
  const Eigen::SelfAdjointEigenSolver<RMatrix> es(perp);
  const RMatrix f = e.tangents(x);
  const RMatrix s = embedded_shape(e, x, mu);
  const RVector dfn = e.map().partial2(mu, nu, x).col(0);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    if (es.eigenvalues()(k) < 0.5) continue;
    const RVector n = es.eigenvectors().col(k);
    worst = std::max(worst, std::abs(f.col(nu).dot(s * n) - dfn.dot(n)));
  }
  return worst;
}

}  // namespace bladegauge
