#pragma once

#include <cstdint>
#include <vector>

#include "bladegauge/field.hpp"

namespace bladegauge {

/// U(n) gauge potential: d Hermitian n x n component fields A_mu.
class GaugePotential {
 public:
  GaugePotential() = default;
  /// Components are symmetrised to their Hermitian part on evaluation; a
  /// warning is logged if the correction ever exceeds the warning threshold.
  GaugePotential(int n, std::vector<MatrixField> components);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(components_.size()); }
  const MatrixField& operator[](int mu) const { return components_[static_cast<std::size_t>(mu)]; }
  const std::vector<MatrixField>& components() const { return components_; }
  CMatrix at(int mu, const Point& x) const { return (*this)[mu](x); }

 private:
  int n_ = 0;
  std::vector<MatrixField> components_;
};

using FieldStrength = TwoForm<CMatrix>;

/// U(n)-valued field; evaluation throws DomainError where u is not unitary.
class GaugeMap {
 public:
  GaugeMap() = default;
  explicit GaugeMap(MatrixField u);
  const MatrixField& field() const { return u_; }
  int n() const { return n_; }
  CMatrix operator()(const Point& x) const { return u_(x); }

 private:
  MatrixField u_;
  int n_ = 0;
};

/// D_mu psi = d_mu psi + i A_mu psi.
CVector covariant_derivative(const GaugePotential& a, const MatrixField& psi, int mu, const Point& x);

/// F_{mu nu} = d_mu A_nu - d_nu A_mu + i [A_mu, A_nu].
FieldStrength field_strength(const GaugePotential& a);

/// D_mu M = d_mu M + i [A_mu, M] for n x n matrix fields.
CMatrix covariant_derivative_matrix(const GaugePotential& a, const MatrixField& m, int mu, const Point& x);
MatrixField covariant_derivative_matrix_field(const GaugePotential& a, const MatrixField& m, int mu);

/// A'_mu = u A_mu u^dag - i u d_mu u^dag.
GaugePotential gauge_transform(const GaugePotential& a, const GaugeMap& u);
/// F' = u F u^dag.
FieldStrength gauge_transform_F(const FieldStrength& f, const GaugeMap& u);
/// psi' = u psi.
MatrixField gauge_transform_psi(const MatrixField& psi, const GaugeMap& u);

/// For n = 1: the real 1-form A_mu dx^mu.
OneForm<double> scalar_form(const GaugePotential& a);
/// For n = 1: the real 2-form F_{mu nu}.
TwoForm<double> scalar_form(const FieldStrength& f);

/// Pure gauge A_mu = -i u d_mu u^dag (flat).
GaugePotential pure_gauge_potential(const GaugeMap& u);

/// n = 1 potential A = b x^i dx^j with constant F_{ij} = b.
GaugePotential constant_field_potential(int dim, double b, int i, int j);

/// Smooth unitary field built as a product of exp(i sin(w.x + c) H) factors
/// with random Hermitian H; analytic to second order.
MatrixField random_smooth_unitary(int n, int dim, std::uint64_t seed, int factors = 3);
GaugeMap random_gauge_map(int n, int dim, std::uint64_t seed);

/// A_mu = H_mu0 + sum_k sin(w_k.x + c_k) H_muk with random Hermitian H.
GaugePotential random_smooth_potential(int n, int dim, std::uint64_t seed);

/// Jet of exp(i f(x) H) for a real scalar jet f and Hermitian H.
Jet<CMatrix> exp_i_jet(const Jet<double>& f, const CMatrix& h);

void log_warning(const std::string& message);
std::string format_sci(double v);

}  // namespace bladegauge
