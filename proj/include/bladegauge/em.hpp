#pragma once

#include "bladegauge/blade.hpp"

namespace bladegauge {

/// Angles of the N = 2, n = 1 frame V = (e^{i alpha} cos rho, e^{i beta} sin rho)^T.
struct EmFrameParams {
  ScalarField alpha;
  ScalarField beta;
  ScalarField rho;
  int dim() const { return alpha.dim(); }
};

Frame em_frame(const EmFrameParams& params);

/// Closed-form blade [[cos 2rho, e^{i(a-b)} sin 2rho], [e^{-i(a-b)} sin 2rho, -cos 2rho]].
CMatrix em_blade_value(double alpha, double beta, double rho);
RotatingBlade em_blade(const EmFrameParams& params);

/// A = cos^2 rho d alpha + sin^2 rho d beta.
GaugePotential em_potential(const EmFrameParams& params);
/// |cos^2 rho d_mu alpha + sin^2 rho d_mu beta - A_mu| at x.
double em_potential_residual(const EmFrameParams& params, const GaugePotential& a, int mu, const Point& x);

/// F = d(cos^2 rho) ^ d(alpha - beta).
TwoForm<double> em_faraday(const EmFrameParams& params);

/// Orthogonal complement W = (-e^{-i beta} sin rho, e^{-i alpha} cos rho)^T.
MatrixField em_complement(const EmFrameParams& params);

/// k and n are covariant components; k.x = k_mu x^mu.
EmFrameParams plane_wave_params(const RVector& k, const RVector& n);
/// A_mu = n_mu sin(k.x).
GaugePotential plane_wave_potential(const RVector& k, const RVector& n);
/// |(k.k)(n.n) - (k.n)^2| with the Minkowski products of `st`.
double plane_wave_condition_defect(const Spacetime& st, const RVector& k, const RVector& n);

enum class Patch { plus, minus };

/// Monopole fields live on the (r, theta, phi) chart.
GaugePotential monopole_potential(double g, Patch patch, double pole_guard = 1e-6);
EmFrameParams monopole_params(double g, Patch patch, double pole_guard = 1e-6);
bool in_patch(Patch patch, double theta, double pole_guard = 1e-6);

/// B = g x / r^3 in Cartesian coordinates.
RVector monopole_magnetic_field(double g, const RVector& cartesian);

/// Total flux of the patched monopole F through the unit sphere.
double monopole_flux(double g, int quadrature_order);

struct MonopoleGlue {
  RotatingBlade blade;
  bool overlap_agree = false;
  bool periodic = false;
  bool single_valued = false;
  double max_overlap_diff = 0.0;
  double max_period_diff = 0.0;
};

/// Builds the monopole blade from both patches and checks R+ = R- on the
/// overlap and R(theta, phi + 2pi) = R(theta, phi) on `theta_samples` rings.
MonopoleGlue monopole_blade_glue(double g, int theta_samples = 32, double tol = 1e-10);

bool quantization_satisfied(double g);

}  // namespace bladegauge
