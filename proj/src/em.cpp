#include "bladegauge/em.hpp"

#include <algorithm>
#include <cmath>

namespace bladegauge {

namespace {

int min_order(const EmFrameParams& p) {
  return std::min({p.alpha.max_order(), p.beta.max_order(), p.rho.max_order()});
}

Jet<CMatrix> scalar_to_matrix(const Jet<double>& s) {
  return jet_map(s, [](double v) {
    CMatrix m(1, 1);
    m(0, 0) = v;
    return m;
  });
}

ScalarField linear_field(const RVector& coeffs, double offset) {
  const int dim = static_cast<int>(coeffs.size());
  return ScalarField::analytic(dim, 2, [coeffs, offset, dim](const Point& x, int order) {
    Jet<double> s = constant_jet(offset, dim, order);
    for (int mu = 0; mu < dim; ++mu) s = s + coeffs(mu) * coordinate_jet(x, mu, order);
    return s;
  });
}

}  // namespace

Frame em_frame(const EmFrameParams& params) {
  const EmFrameParams p = params;
  return Frame(2, 1, MatrixField::analytic(p.dim(), min_order(p), [p](const Point& x, int order) {
    const Jet<double> rho = p.rho.jet(x, order);
    const Jet<Complex> c0 = exp_i(p.alpha.jet(x, order)) * to_complex(cos(rho));
    const Jet<Complex> c1 = exp_i(p.beta.jet(x, order)) * to_complex(sin(rho));
    return assemble(2, 1, {c0, c1});
  }, p.rho.step()));
}

CMatrix em_blade_value(double alpha, double beta, double rho) {
  const Complex phase = std::exp(kI * (alpha - beta));
  CMatrix r(2, 2);
  r << std::cos(2.0 * rho), phase * std::sin(2.0 * rho), std::conj(phase) * std::sin(2.0 * rho),
      -std::cos(2.0 * rho);
  return r;
}

RotatingBlade em_blade(const EmFrameParams& params) {
  const EmFrameParams p = params;
  return RotatingBlade(2, MatrixField::analytic(p.dim(), min_order(p), [p](const Point& x, int order) {
    const Jet<double> two_rho = 2.0 * p.rho.jet(x, order);
    const Jet<double> gamma = p.alpha.jet(x, order) - p.beta.jet(x, order);
    const Jet<Complex> c = to_complex(cos(two_rho));
    const Jet<Complex> s = to_complex(sin(two_rho));
    const Jet<Complex> off = exp_i(gamma) * s;
    return assemble(2, 2, {c, off, exp_i(-gamma) * s, -c});
  }, p.rho.step()));
}

GaugePotential em_potential(const EmFrameParams& params) {
  const EmFrameParams p = params;
  std::vector<MatrixField> comps;
  for (int mu = 0; mu < p.dim(); ++mu) {
    comps.push_back(derived_field<CMatrix>(p.dim(), min_order(p), 1, p.rho.step(), [p, mu](const Point& x, int order) {
      const Jet<double> rho = p.rho.jet(x, order);
      const Jet<double> c = cos(rho);
      const Jet<double> s = sin(rho);
      const Jet<double> a = c * c * derivative(p.alpha.jet(x, order + 1), mu) +
                            s * s * derivative(p.beta.jet(x, order + 1), mu);
      return scalar_to_matrix(a);
    }));
  }
  return GaugePotential(1, std::move(comps));
}

double em_potential_residual(const EmFrameParams& params, const GaugePotential& a, int mu, const Point& x) {
  const double rho = params.rho(x);
  const double c = std::cos(rho);
  const double s = std::sin(rho);
  const double lhs = c * c * params.alpha.partial(mu, x) + s * s * params.beta.partial(mu, x);
  return std::abs(Complex(lhs) - a.at(mu, x)(0, 0));
}

TwoForm<double> em_faraday(const EmFrameParams& params) {
  const EmFrameParams p = params;
  const int d = p.dim();
  std::vector<ScalarField> upper;
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu + 1; nu < d; ++nu) {
      upper.push_back(derived_field<double>(d, min_order(p), 1, p.rho.step(), [p, mu, nu](const Point& x, int order) {
        const Jet<double> c = cos(p.rho.jet(x, order + 1));
        const Jet<double> c2 = c * c;
        const Jet<double> gamma = p.alpha.jet(x, order + 1) - p.beta.jet(x, order + 1);
        return derivative(c2, mu) * derivative(gamma, nu) - derivative(c2, nu) * derivative(gamma, mu);
      }));
    }
  }
  return TwoForm<double>(d, std::move(upper));
}

MatrixField em_complement(const EmFrameParams& params) {
  const EmFrameParams p = params;
  return MatrixField::analytic(p.dim(), min_order(p), [p](const Point& x, int order) {
    const Jet<double> rho = p.rho.jet(x, order);
    const Jet<Complex> w0 = -(exp_i(-p.beta.jet(x, order)) * to_complex(sin(rho)));
    const Jet<Complex> w1 = exp_i(-p.alpha.jet(x, order)) * to_complex(cos(rho));
    return assemble(2, 1, {w0, w1});
  }, p.rho.step());
}

EmFrameParams plane_wave_params(const RVector& k, const RVector& n) {
  if (k.size() != n.size()) throw DimensionError("plane_wave_params: k and n differ in length");
  return EmFrameParams{linear_field(n, 0.0), linear_field(-n, 0.0), linear_field(0.5 * k, -0.25 * kPi)};
}

GaugePotential plane_wave_potential(const RVector& k, const RVector& n) {
  if (k.size() != n.size()) throw DimensionError("plane_wave_potential: k and n differ in length");
  const ScalarField phase = linear_field(k, 0.0);
  std::vector<MatrixField> comps;
  for (int mu = 0; mu < k.size(); ++mu) {
    const double nm = n(mu);
    comps.push_back(MatrixField::analytic(static_cast<int>(k.size()), 2, [phase, nm](const Point& x, int order) {
      return scalar_to_matrix(nm * sin(phase.jet(x, order)));
    }));
  }
  return GaugePotential(1, std::move(comps));
}

double plane_wave_condition_defect(const Spacetime& st, const RVector& k, const RVector& n) {
  const double kk = metric_dot(st, k, k);
  const double nn = metric_dot(st, n, n);
  const double kn = metric_dot(st, k, n);
  return std::abs(kk * nn - kn * kn);
}

bool in_patch(Patch patch, double theta, double pole_guard) {
  return patch == Patch::plus ? theta < kPi - pole_guard : theta > pole_guard;
}

namespace {

void check_patch(Patch patch, const Point& x, double guard) {
  if (x.size() != 3) throw DimensionError("monopole: expects (r, theta, phi) coordinates");
  if (!in_patch(patch, x(1), guard)) {
    throw ChartError(std::string("monopole: theta = ") + std::to_string(x(1)) + " is outside the " +
                     (patch == Patch::plus ? "plus" : "minus") + " patch");
  }
}

}  // namespace

GaugePotential monopole_potential(double g, Patch patch, double pole_guard) {
  const double sign = patch == Patch::plus ? 1.0 : -1.0;
  std::vector<MatrixField> comps;
  comps.push_back(MatrixField::constant(3, CMatrix::Zero(1, 1)));
  comps.push_back(MatrixField::constant(3, CMatrix::Zero(1, 1)));
  comps.push_back(MatrixField::analytic(3, 2, [g, sign, patch, pole_guard](const Point& x, int order) {
    check_patch(patch, x, pole_guard);
    const Jet<double> theta = coordinate_jet(x, 1, order);
    return scalar_to_matrix(g * (constant_jet(sign, 3, order) - cos(theta)));
  }));
  return GaugePotential(1, std::move(comps));
}

EmFrameParams monopole_params(double g, Patch patch, double pole_guard) {
  auto guarded = [patch, pole_guard](RVector coeffs) {
    const ScalarField lin = linear_field(coeffs, 0.0);
    return ScalarField::analytic(3, 2, [lin, patch, pole_guard](const Point& x, int order) {
      check_patch(patch, x, pole_guard);
      return lin.jet(x, order);
    });
  };
  RVector winding = RVector::Zero(3);
  winding(2) = 2.0 * g;
  RVector half_theta = RVector::Zero(3);
  half_theta(1) = 0.5;
  const RVector zero = RVector::Zero(3);
  if (patch == Patch::plus) return EmFrameParams{guarded(zero), guarded(winding), guarded(half_theta)};
  return EmFrameParams{guarded(-winding), guarded(zero), guarded(half_theta)};
}

RVector monopole_magnetic_field(double g, const RVector& cartesian) {
  const double r = cartesian.norm();
  if (r == 0.0) throw ChartError("monopole_magnetic_field: undefined at the origin");
  return g * cartesian / (r * r * r);
}

double monopole_flux(double g, int quadrature_order) {
  const TwoForm<double> f_plus = scalar_form(field_strength(monopole_potential(g, Patch::plus)));
  const TwoForm<double> f_minus = scalar_form(field_strength(monopole_potential(g, Patch::minus)));
  return sphere_flux([&](double theta, double phi) {
    Point x(3);
    x << 1.0, theta, phi;
    return theta < 0.5 * kPi ? f_plus.value(1, 2, x) : f_minus.value(1, 2, x);
  }, quadrature_order);
}

bool quantization_satisfied(double g) {
  return std::abs(2.0 * g - std::round(2.0 * g)) < 1e-12;
}

MonopoleGlue monopole_blade_glue(double g, int theta_samples, double tol) {
  const double guard = default_tolerances().pole_guard;
  const RotatingBlade plus = blade_from_frame(em_frame(monopole_params(g, Patch::plus, guard)));
  const RotatingBlade minus = blade_from_frame(em_frame(monopole_params(g, Patch::minus, guard)));

  MonopoleGlue out;
  // Each patch covers its hemisphere plus the equator band; both poles are reached.
  const MatrixField rp = plus.field();
  const MatrixField rm = minus.field();
  out.blade = RotatingBlade(2, MatrixField::analytic(3, 2, [rp, rm](const Point& x, int order) {
    return x(1) <= 0.5 * kPi ? rp.jet(x, order) : rm.jet(x, order);
  }));

  const double phis[] = {0.0, 0.7, 1.9, 3.1, 4.4, 5.6};
  for (int i = 0; i < theta_samples; ++i) {
    const double theta = guard + (kPi - 2.0 * guard) * (i + 0.5) / theta_samples;
    for (double phi : phis) {
      Point x(3);
      x << 1.0, theta, phi;
      out.max_overlap_diff = std::max(out.max_overlap_diff, max_abs(rp(x) - rm(x)));
    }
    Point a(3);
    Point b(3);
    a << 1.0, theta, 0.0;
    b << 1.0, theta, 2.0 * kPi;
    out.max_period_diff = std::max(out.max_period_diff, max_abs(out.blade(a) - out.blade(b)));
  }
  out.overlap_agree = out.max_overlap_diff <= tol;
  out.periodic = out.max_period_diff <= tol;
  out.single_valued = out.overlap_agree && out.periodic;
  return out;
}

}  // namespace bladegauge
