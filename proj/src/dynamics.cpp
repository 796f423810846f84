#include "bladegauge/dynamics.hpp"

#include <cmath>

namespace bladegauge {

MatrixField ym_residual_field(const GaugePotential& a, const Spacetime& st, int nu) {
  const int d = a.dim();
  if (st.dim != d) throw DimensionError("ym_residual: spacetime and potential differ in dimension");
  if (nu < 0 || nu >= d) throw DimensionError("ym_residual: index out of range");
  const FieldStrength f = field_strength(a);
  std::vector<MatrixField> f_nu;
  std::vector<MatrixField> a_mu;
  int src = 2;
  for (int mu = 0; mu < d; ++mu) {
    f_nu.push_back(f.component(mu, nu));
    a_mu.push_back(a[mu]);
    src = std::min({src, f_nu.back().max_order(), a_mu.back().max_order() + 1});
  }
  const std::vector<int> sign = st.signature;
  return derived_field<CMatrix>(d, src, 1, a[0].step(), [f_nu, a_mu, sign, d](const Point& x, int order) {
    Jet<CMatrix> out;
    for (int mu = 0; mu < d; ++mu) {
      const Jet<CMatrix> fj = f_nu[static_cast<std::size_t>(mu)].jet(x, order + 1);
      const Jet<CMatrix> term = derivative(fj, mu) + kI * commutator(a_mu[static_cast<std::size_t>(mu)].jet(x, order), truncated(fj, order));
      const Jet<CMatrix> signed_term = static_cast<double>(sign[static_cast<std::size_t>(mu)]) * term;
      out = mu == 0 ? signed_term : out + signed_term;
    }
    return out;
  });
}

CMatrix ym_residual(const GaugePotential& a, const Spacetime& st, int nu, const Point& x) {
  return ym_residual_field(a, st, nu)(x);
}

double ym_action(const GaugePotential& a, const Spacetime& st, const Grid& grid) {
  const int d = a.dim();
  if (st.dim != d || grid.dim() != d) throw DimensionError("ym_action: dimension mismatch");
  const FieldStrength f = field_strength(a);
  return lattice_integral([&](const Point& x) {
    double density = 0.0;
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = mu + 1; nu < d; ++nu) {
        const CMatrix fv = f.value(mu, nu, x);
        density += st.sign(mu) * st.sign(nu) * (fv * fv).trace().real();
      }
    }
    return -0.5 * density;
  }, grid);
}

double sigma_action(const RotatingBlade& r, const Spacetime& st, const Grid& grid) {
  const int d = r.dim();
  if (st.dim != d || grid.dim() != d) throw DimensionError("sigma_action: dimension mismatch");
  const MatrixField rf = r.field();
  return lattice_integral([&](const Point& x) {
    double density = 0.0;
    for (int mu = 0; mu < d; ++mu) {
      const CMatrix dr = rf.partial(mu, x);
      density += st.sign(mu) * (dr * dr).trace().real();
    }
    return -0.25 * density;
  }, grid);
}

CMatrix modified_eom_residual(const Frame& v, const GaugePotential& a, const Spacetime& st, const Point& x) {
  const int d = v.dim();
  const MatrixField vf = v.field();
  CMatrix out = CMatrix::Zero(v.big_n(), v.big_n());
  for (int nu = 0; nu < d; ++nu) {
    const MatrixField y = ym_residual_field(a, st, nu);
    const MatrixField m = derived_field<CMatrix>(d, std::min(vf.max_order(), y.max_order()), 0, y.step(),
                                                 [vf, y](const Point& p, int order) {
                                                   const Jet<CMatrix> jv = vf.jet(p, order);
                                                   return jv * y.jet(p, order) * adjoint(jv);
                                                 });
    out += static_cast<double>(st.sign(nu)) * m.partial(nu, x);
  }
  return out;
}

CMatrix modified_eom_residual(const Frame& v, const Spacetime& st, const Point& x) {
  return modified_eom_residual(v, extract_potential(v), st, x);
}

CMatrix maxwell_mod_residual(const EmFrameParams& params, const Spacetime& st, const Point& x) {
  const int d = params.dim();
  if (st.dim != d) throw DimensionError("maxwell_mod_residual: dimension mismatch");
  const TwoForm<double> f = em_faraday(params);
  const MatrixField r = em_blade(params).field();
  CMatrix out = CMatrix::Zero(2, 2);
  for (int nu = 0; nu < d; ++nu) {
    double j = 0.0;
    for (int mu = 0; mu < d; ++mu) j += st.sign(mu) * f.partial(mu, mu, nu, x);
    out += (st.sign(nu) * j) * r.partial(nu, x);
  }
  return out;
}

CMatrix shape_gauge_ym_residual(const RotatingBlade& r, const Spacetime& st, int nu, const Point& x) {
  const int d = r.dim();
  if (st.dim != d) throw DimensionError("shape_gauge_ym_residual: dimension mismatch");
  const ShapeOperator s = shape_operator(r);
  const BladeCurvature omega = blade_curvature_form(r);
  CMatrix sum = CMatrix::Zero(r.big_n(), r.big_n());
  for (int mu = 0; mu < d; ++mu) {
    if (mu == nu) continue;
    sum += static_cast<double>(st.sign(mu)) *
           (omega.partial(mu, mu, nu, x) + kI * commutator(s[mu](x), omega.value(mu, nu, x)));
  }
  return r.projector()(x) * sum;
}

double shape_gauge_ym_equivalence(const Frame& v, const Spacetime& st, int nu, const Point& x) {
  const CMatrix vx = v(x);
  const CMatrix lifted = vx.adjoint() * shape_gauge_ym_residual(blade_from_frame(v), st, nu, x) * vx;
  return max_abs(lifted - ym_residual(extract_potential(v), st, nu, x));
}

CMatrix sigma_eom_residual(const RotatingBlade& r, const Spacetime& st, const Point& x) {
  if (st.dim != r.dim()) throw DimensionError("sigma_eom_residual: dimension mismatch");
  const ShapeOperator s = shape_operator(r);
  CMatrix out = CMatrix::Zero(r.big_n(), r.big_n());
  for (int mu = 0; mu < r.dim(); ++mu) out += static_cast<double>(st.sign(mu)) * s[mu].partial(mu, x);
  return out;
}

ResidualReport collect_residuals(const std::string& equation, const std::vector<Point>& points, int indices,
                                 const std::function<CMatrix(const Point&, int)>& fn) {
  ResidualReport rep;
  rep.equation = equation;
  const int per_point = indices > 0 ? indices : 1;
  const std::size_t total = points.size() * static_cast<std::size_t>(per_point);
  rep.norms.assign(total, 0.0);
  for (const Point& p : points) {
    for (int k = 0; k < per_point; ++k) {
      rep.points.push_back(p);
      rep.index.push_back(indices > 0 ? k : -1);
    }
  }
  parallel_for(total, [&](std::size_t i) { rep.norms[i] = max_abs(fn(rep.points[i], rep.index[i])); });
  double sum = 0.0;
  for (double v : rep.norms) {
    rep.max = std::max(rep.max, v);
    sum += v;
  }
  rep.mean = total ? sum / static_cast<double>(total) : 0.0;
  return rep;
}

std::vector<int> BladeLattice::shape() const {
  std::vector<int> out;
  for (const auto& a : axes) out.push_back(a.periodic ? a.cells : a.cells + 1);
  return out;
}

namespace {

std::vector<int> unravel(std::size_t site, const std::vector<int>& shape) {
  std::vector<int> idx(shape.size());
  for (std::size_t k = shape.size(); k-- > 0;) {
    idx[k] = static_cast<int>(site % static_cast<std::size_t>(shape[k]));
    site /= static_cast<std::size_t>(shape[k]);
  }
  return idx;
}

std::size_t ravel(const std::vector<int>& idx, const std::vector<int>& shape) {
  std::size_t site = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) site = site * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(idx[k]);
  return site;
}

double cell_volume(const std::vector<GridAxis>& axes) {
  double v = 1.0;
  for (const auto& a : axes) v *= a.spacing();
  return v;
}

}  // namespace

Point BladeLattice::position(std::size_t site) const {
  const std::vector<int> idx = unravel(site, shape());
  Point p(dim());
  for (int k = 0; k < dim(); ++k) {
    const auto& a = axes[static_cast<std::size_t>(k)];
    p(k) = a.lower + idx[static_cast<std::size_t>(k)] * a.spacing();
  }
  return p;
}

std::size_t BladeLattice::neighbour(std::size_t site, int axis, int step) const {
  const std::vector<int> sh = shape();
  std::vector<int> idx = unravel(site, sh);
  int& i = idx[static_cast<std::size_t>(axis)];
  const int n = sh[static_cast<std::size_t>(axis)];
  i += step;
  if (axes[static_cast<std::size_t>(axis)].periodic) {
    i = ((i % n) + n) % n;
  } else if (i < 0 || i >= n) {
    return npos;
  }
  return ravel(idx, sh);
}

BladeLattice lattice_from_sites(const std::vector<GridAxis>& axes, std::vector<CMatrix> sites, double tol) {
  BladeLattice lat;
  lat.axes = axes;
  const std::vector<int> sh = lat.shape();
  std::size_t total = 1;
  for (int n : sh) total *= static_cast<std::size_t>(n);
  if (sites.size() != total)
    throw DimensionError("lattice: expected " + std::to_string(total) + " sites, got " + std::to_string(sites.size()));
  lat.big_n = static_cast<int>(sites.front().rows());
  const CMatrix id = CMatrix::Identity(lat.big_n, lat.big_n);
  for (std::size_t s = 0; s < total; ++s) {
    const CMatrix& r = sites[s];
    if (r.rows() != lat.big_n || r.cols() != lat.big_n) throw DimensionError("lattice: site " + std::to_string(s) + " has the wrong shape");
    if (max_abs(r * r - id) > tol || hermiticity_defect(r) > tol)
      throw DomainError("lattice: site " + std::to_string(s) + " is not a Hermitian involution");
  }
  lat.sites = std::move(sites);
  lat.fixed.assign(total, 0);
  for (std::size_t s = 0; s < total; ++s) {
    const std::vector<int> idx = unravel(s, sh);
    for (std::size_t k = 0; k < axes.size(); ++k)
      if (!axes[k].periodic && (idx[k] == 0 || idx[k] == sh[k] - 1)) lat.fixed[s] = 1;
  }
  return lat;
}

BladeLattice sample_lattice(const RotatingBlade& r, const std::vector<GridAxis>& axes) {
  if (static_cast<int>(axes.size()) != r.dim()) throw DimensionError("sample_lattice: axis count differs from chart dimension");
  BladeLattice shell;
  shell.axes = axes;
  std::size_t total = 1;
  for (int n : shell.shape()) total *= static_cast<std::size_t>(n);
  std::vector<CMatrix> sites(total);
  const MatrixField rf = r.field();
  parallel_for(total, [&](std::size_t s) { sites[s] = rf(shell.position(s)); });
  return lattice_from_sites(axes, std::move(sites));
}

double lattice_energy(const BladeLattice& lat) {
  std::vector<double> part(lat.size(), 0.0);
  parallel_for(lat.size(), [&](std::size_t s) {
    for (int k = 0; k < lat.dim(); ++k) {
      const std::size_t t = lat.neighbour(s, k, 1);
      if (t == BladeLattice::npos) continue;
      const double a = lat.axes[static_cast<std::size_t>(k)].spacing();
      const CMatrix diff = lat.sites[t] - lat.sites[s];
      part[s] += (diff * diff).trace().real() / (a * a);
    }
  });
  double sum = 0.0;
  for (double p : part) sum += p;
  return 0.25 * cell_volume(lat.axes) * sum;
}

std::vector<CMatrix> lattice_gradient(const BladeLattice& lat) {
  const double vol = cell_volume(lat.axes);
  std::vector<CMatrix> g(lat.size());
  parallel_for(lat.size(), [&](std::size_t s) {
    CMatrix acc = CMatrix::Zero(lat.big_n, lat.big_n);
    if (!lat.fixed[s]) {
      const CMatrix& rs = lat.sites[s];
      for (int k = 0; k < lat.dim(); ++k) {
        const double a = lat.axes[static_cast<std::size_t>(k)].spacing();
        for (int step : {-1, 1}) {
          const std::size_t t = lat.neighbour(s, k, step);
          if (t == BladeLattice::npos) continue;
          acc += (kI / (a * a)) * commutator(rs, lat.sites[t]);
        }
      }
      acc *= -0.5 * vol;
    }
    g[s] = hermitian_part(acc);
  });
  return g;
}

BladeLattice conjugate_lattice(const BladeLattice& lat, const std::vector<CMatrix>& b, double eps) {
  if (b.size() != lat.size()) throw DimensionError("conjugate_lattice: generator count differs from site count");
  BladeLattice out = lat;
  parallel_for(lat.size(), [&](std::size_t s) {
    if (lat.fixed[s]) return;
    const CMatrix u = unitary_exp(b[s], eps);
    out.sites[s] = u * lat.sites[s] * u.adjoint();
  });
  return out;
}

FlowResult sigma_flow(const BladeLattice& initial, int steps, double eta) {
  if (steps < 0) throw ParameterError("sigma_flow: negative step count");
  if (!(eta > 0.0)) throw ParameterError("sigma_flow: eta must be positive");
  FlowResult res;
  res.final = initial;
  res.energy.push_back(lattice_energy(initial));
  const CMatrix id = CMatrix::Identity(initial.big_n, initial.big_n);
  int rising = 0;
  for (int step = 0; step < steps; ++step) {
    const std::vector<CMatrix> g = lattice_gradient(res.final);
    res.final = conjugate_lattice(res.final, g, -eta);
    const double e = lattice_energy(res.final);
    for (const CMatrix& r : res.final.sites) {
      res.max_involution_defect = std::max(res.max_involution_defect, max_abs(r * r - id));
      res.max_hermiticity_defect = std::max(res.max_hermiticity_defect, hermiticity_defect(r));
    }
    rising = e > res.energy.back() ? rising + 1 : 0;
    res.energy.push_back(e);
    if (rising >= 10) {
      throw DivergenceError("sigma_flow: energy rose for 10 consecutive steps at step " + std::to_string(step) +
                            " with eta = " + std::to_string(eta) + "; try a smaller eta");
    }
  }
  return res;
}

BladeLattice monopole_band_lattice(double g, int theta_cells, int phi_cells, double theta_lo, double theta_hi) {
  if (theta_lo <= 0.0 || theta_hi >= kPi || theta_lo >= theta_hi) throw ParameterError("monopole_band_lattice: bad theta band");
  const std::vector<GridAxis> axes = {GridAxis{theta_lo, theta_hi, theta_cells, false},
                                      GridAxis{0.0, 2.0 * kPi, phi_cells, true}};
  const RotatingBlade glued = monopole_blade_glue(g, 2).blade;
  const MatrixField r3 = glued.field();
  const RotatingBlade chart(2, MatrixField(2, [r3](const Point& x) {
    Point y(3);
    y << 1.0, x(0), x(1);
    return r3(y);
  }));
  return sample_lattice(chart, axes);
}

}  // namespace bladegauge
