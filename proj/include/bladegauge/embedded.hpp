#pragma once

#include <string>

#include "bladegauge/field.hpp"

namespace bladegauge {

using RealField = Field<RMatrix>;

/// Smooth map f: R^d -> R^N, stored as an N x 1 column field.
class Embedding {
 public:
  Embedding() = default;
  Embedding(int dim, int ambient, RealField f);

  int dim() const { return dim_; }
  int ambient() const { return ambient_; }
  const RealField& map() const { return f_; }

  /// N x d matrix whose columns are the tangent vectors f_mu.
  RMatrix tangents(const Point& x) const;
  /// Tangent projector F (F^T F)^-1 F^T; analytic to one order below f.
  const RealField& projector() const { return p_; }

 private:
  int dim_ = 0;
  int ambient_ = 0;
  RealField f_;
  RealField p_;
};

/// (u, v) -> (u, v, 0).
Embedding plane_embedding();
/// (theta, phi) -> a (sin theta cos phi, sin theta sin phi, cos theta).
Embedding sphere_embedding(double a = 1.0);
/// (u, v) -> (cos u, sin u, v).
Embedding cylinder_embedding();
/// (u, v) -> ((R + r cos v) cos u, (R + r cos v) sin u, r sin v).
Embedding torus_embedding(double rmaj, double rmin);

/// Lookup used by the CLI; throws ParameterError for unknown names.
Embedding builtin_embedding(const std::string& name, double a = 1.0, double rmaj = 2.0, double rmin = 1.0);

/// g_mu_nu = f_mu . f_nu; ChartError when the condition number exceeds the limit.
RMatrix induced_metric(const Embedding& e, const Point& x);

/// R = 2P - I.
RMatrix embedded_blade(const Embedding& e, const Point& x);
/// S_mu = R d_mu R / 2, skew-symmetric.
RMatrix embedded_shape(const Embedding& e, const Point& x, int mu);

/// Omega = -[S_mu, S_nu], cross-checked against [d_mu R, d_nu R] / 4.
RMatrix embedded_curvature(const Embedding& e, const Point& x, int mu, int nu);
/// max |-[S_mu, S_nu] - [d_mu R, d_nu R] / 4|.
double curvature_discrepancy(const Embedding& e, const Point& x, int mu, int nu);

/// R_rho sigma mu nu = f_rho . (Omega_mu nu f_sigma).
double riemann_component(const Embedding& e, const Point& x, int rho, int sigma, int mu, int nu);
/// R_0101 / det g; surfaces only.
double gauss_curvature(const Embedding& e, const Point& x);

/// max |d_mu S_nu - d_nu S_mu + 2[S_mu, S_nu]|, with dS by central differences of S.
double embedded_shape_identity_residual(const Embedding& e, const Point& x, int mu, int nu);

/// For v = sum_a c^a f_a: |P D_mu v - D_mu v| with D_mu v = d_mu v + S_mu v.
double tangent_derivative_defect(const Embedding& e, const Point& x, int mu, const RVector& coeffs);

/// max over unit normals n of |f_nu . S_mu n - (d_mu f_nu) . n|.
double weingarten_defect(const Embedding& e, const Point& x, int mu, int nu);

}  // namespace bladegauge
