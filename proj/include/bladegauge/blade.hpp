#pragma once

#include <cstdint>
#include <vector>

#include "bladegauge/gauge.hpp"

namespace bladegauge {

/// N x n matrix field with orthonormal columns, V^dag V = I_n. Evaluation
/// throws DomainError where the constraint is violated beyond 1e-10.
class Frame {
 public:
  Frame() = default;
  Frame(int big_n, int n, MatrixField v);

  int big_n() const { return big_n_; }
  int n() const { return n_; }
  int dim() const { return v_.dim(); }
  const MatrixField& field() const { return v_; }
  CMatrix operator()(const Point& x) const { return v_(x); }

 private:
  int big_n_ = 0;
  int n_ = 0;
  MatrixField v_;
};

/// Reflection R = 2 V V^dag - I onto the blade spanned by a frame.
class RotatingBlade {
 public:
  RotatingBlade() = default;
  RotatingBlade(int big_n, MatrixField r) : big_n_(big_n), r_(std::move(r)) {}

  int big_n() const { return big_n_; }
  int dim() const { return r_.dim(); }
  const MatrixField& field() const { return r_; }
  CMatrix operator()(const Point& x) const { return r_(x); }
  /// P = (R + I) / 2.
  MatrixField projector() const;

 private:
  int big_n_ = 0;
  MatrixField r_;
};

/// S_mu = -(i/2) R d_mu R, one Hermitian N x N field per axis.
class ShapeOperator {
 public:
  ShapeOperator() = default;
  explicit ShapeOperator(std::vector<MatrixField> s) : s_(std::move(s)) {}
  int dim() const { return static_cast<int>(s_.size()); }
  const MatrixField& operator[](int mu) const { return s_[static_cast<std::size_t>(mu)]; }

 private:
  std::vector<MatrixField> s_;
};

using BladeCurvature = TwoForm<CMatrix>;

/// A_mu = -i V^dag d_mu V. Throws InconsistencyError where the result is
/// non-Hermitian beyond 1e-6 (broken orthonormality or too coarse a step).
GaugePotential extract_potential(const Frame& v);

RotatingBlade blade_from_frame(const Frame& v);
ShapeOperator shape_operator(const RotatingBlade& r);

/// Omega_{mu nu} = -i [S_mu, S_nu] as a 2-form.
BladeCurvature blade_curvature_form(const RotatingBlade& r);

/// The four equal expressions for the blade curvature at one point.
struct CurvatureExpressions {
  CMatrix probe;      ///< -i [D_mu, D_nu] applied to the N basis vectors
  CMatrix shape;      ///< -i [S_mu, S_nu]
  CMatrix blade;      ///< -(i/4) [d_mu R, d_nu R]
  CMatrix projector;  ///< -i [d_mu P, d_nu P]
  double max_discrepancy() const;
};

CurvatureExpressions curvature_expressions(const RotatingBlade& r, int mu, int nu, const Point& x);

struct BladeCurvatureResult {
  BladeCurvature omega;
  double max_discrepancy = 0.0;
};

/// Evaluates all four expressions at the samples; throws InconsistencyError
/// if any pair differs by more than `tol`.
BladeCurvatureResult blade_curvature(const RotatingBlade& r, const std::vector<Point>& samples,
                                     double tol);

/// D_mu Psi = d_mu Psi + i S_mu Psi for C^N-valued (or N x k) fields.
CVector lifted_covariant_derivative(const RotatingBlade& r, const MatrixField& psi, int mu, const Point& x);
/// P d_mu (P Psi) + P_perp d_mu (P_perp Psi); the projector route.
CVector lifted_covariant_derivative_projector(const RotatingBlade& r, const MatrixField& psi, int mu,
                                              const Point& x);
MatrixField lifted_covariant_derivative_field(const RotatingBlade& r, const MatrixField& psi, int mu);
/// D_mu M = d_mu M + i [S_mu, M] for N x N fields.
CMatrix lifted_covariant_derivative_matrix(const RotatingBlade& r, const MatrixField& m, int mu,
                                           const Point& x);

/// d_mu S_nu - d_nu S_mu + 2i [S_mu, S_nu]; vanishes for S built from a blade.
CMatrix shape_identity_residual(const ShapeOperator& s, int mu, int nu, const Point& x);

/// Orthonormal completion W of the columns of v: Gram-Schmidt over
/// (v | e_0 ... e_{N-1}), skipping pivots with norm below `pivot`.
CMatrix complement_frame(const CMatrix& v, double pivot = 1e-8);
MatrixField complement_frame_field(const Frame& v);

/// Frame from a field whose columns are only close to orthonormal, such as
/// interpolated samples: Gram-Schmidt on the columns, carried through the
/// jets. Exactly orthonormal input comes back unchanged.
Frame orthonormalized_frame(int big_n, int n, const MatrixField& v);

struct ShapeGaugeResiduals {
  double shape = 0.0;          ///< S_mu vs U (A + C) U^dag - i U dU^dag
  double omega = 0.0;          ///< Omega vs U (F + G) U^dag
  double f_projection = 0.0;   ///< F vs V^dag Omega V
  double g_projection = 0.0;   ///< G vs W^dag Omega W
  double max() const;
};

struct ShapeGaugeDecomposition {
  GaugePotential c;  ///< complementary connection, -i W^dag dW
  FieldStrength g;
  double max_residual = 0.0;
};

ShapeGaugeResiduals shape_gauge_residuals(const Frame& v, const MatrixField& w, const Point& x);
ShapeGaugeDecomposition shape_gauge_decompose(const Frame& v, const MatrixField& w,
                                              const std::vector<Point>& samples, double tol);

/// Preferred frame of the blade with projector p relative to v0: the direct
/// rotation U1 (U1 R0 = R0 U1^dag) applied to v0. Throws ChartError when a
/// principal angle reaches pi/2.
CMatrix canonical_frame(const CMatrix& p, const CMatrix& v0);
/// The direct rotation U1 itself (N x N unitary with U1 R0 U1^dag = R).
CMatrix canonical_rotation(const CMatrix& p, const CMatrix& v0);
Frame canonical_frame_field(const RotatingBlade& r, const CMatrix& v0);
MatrixField canonical_rotation_field(const RotatingBlade& r, const CMatrix& v0);

/// V' = V u^dag.
Frame transform_frame(const Frame& v, const GaugeMap& u);

/// V(x) = U(x) (I, 0)^T for a smooth random unitary U(x); analytic to order 2.
Frame random_smooth_frame(int big_n, int n, int dim, std::uint64_t seed);

}  // namespace bladegauge
