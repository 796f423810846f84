#include "bladegauge/gauge.hpp"

#include <atomic>
#include <cstdio>
#include <iostream>
#include <memory>
#include <mutex>
#include <random>

namespace bladegauge {

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void log_warning(const std::string& message) {
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  std::cerr << "[bladegauge] warning: " << message << '\n';
}

GaugePotential::GaugePotential(int n, std::vector<MatrixField> components) : n_(n) {
  const double warn = default_tolerances().hermiticity_warning;
  for (std::size_t mu = 0; mu < components.size(); ++mu) {
    const MatrixField src = components[mu];
    auto warned = std::make_shared<std::atomic<bool>>(false);
    components_.push_back(MatrixField::analytic(
        src.dim(), src.max_order(),
        [src, warned, warn, mu, n](const Point& x, int order) {
          Jet<CMatrix> j = src.jet(x, order);
          if (j.value.rows() != n || j.value.cols() != n)
            throw DimensionError("GaugePotential: component is not n x n");
          const double defect = hermiticity_defect(j.value);
          if (defect > warn && !warned->exchange(true)) {
            log_warning("gauge potential component " + std::to_string(mu) +
                        " symmetrised; Hermiticity defect " + format_sci(defect));
          }
          return hermitian_part(j);
        },
        src.step()));
  }
}

GaugeMap::GaugeMap(MatrixField u) {
  const double tol = default_tolerances().algebraic;
  const MatrixField src = std::move(u);
  u_ = MatrixField::analytic(src.dim(), src.max_order(), [src, tol](const Point& x, int order) {
    Jet<CMatrix> j = src.jet(x, order);
    const double defect = unitarity_defect(j.value);
    if (defect > tol) throw DomainError("GaugeMap: u(x) is not unitary (defect " + std::to_string(defect) + ")");
    return j;
  }, src.step());
  const Point origin = Point::Zero(src.dim());
  n_ = static_cast<int>(u_(origin).rows());
}

CVector covariant_derivative(const GaugePotential& a, const MatrixField& psi, int mu, const Point& x) {
  const CMatrix dpsi = psi.partial(mu, x);
  const CMatrix value = psi(x);
  if (value.rows() != a.n()) throw DimensionError("covariant_derivative: psi has wrong length");
  return (dpsi + kI * a.at(mu, x) * value).col(0);
}

FieldStrength field_strength(const GaugePotential& a) {
  const int d = a.dim();
  std::vector<MatrixField> upper;
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu + 1; nu < d; ++nu) {
      const MatrixField am = a[mu];
      const MatrixField an = a[nu];
      const int src = std::min(am.max_order(), an.max_order());
      upper.push_back(derived_field<CMatrix>(d, src, 1, am.step(), [am, an, mu, nu](const Point& x, int order) {
        const Jet<CMatrix> jm = am.jet(x, order + 1);
        const Jet<CMatrix> jn = an.jet(x, order + 1);
        return derivative(jn, mu) - derivative(jm, nu) + kI * commutator(jm, jn);
      }));
    }
  }
  return FieldStrength(d, std::move(upper));
}

MatrixField covariant_derivative_matrix_field(const GaugePotential& a, const MatrixField& m, int mu) {
  const MatrixField am = a[mu];
  const int src = std::min(am.max_order() + 1, m.max_order());
  return derived_field<CMatrix>(m.dim(), src, 1, m.step(), [am, m, mu](const Point& x, int order) {
    const Jet<CMatrix> jm = m.jet(x, order + 1);
    const Jet<CMatrix> ja = am.jet(x, order);
    return derivative(jm, mu) + kI * commutator(ja, jm);
  });
}

CMatrix covariant_derivative_matrix(const GaugePotential& a, const MatrixField& m, int mu, const Point& x) {
  const CMatrix value = m(x);
  if (value.rows() != a.n() || value.cols() != a.n())
    throw DimensionError("covariant_derivative_matrix: M is not n x n");
  return m.partial(mu, x) + kI * commutator(a.at(mu, x), value);
}

GaugePotential gauge_transform(const GaugePotential& a, const GaugeMap& u) {
  if (u.n() != a.n()) throw DimensionError("gauge_transform: gauge map rank differs from potential");
  const MatrixField uf = u.field();
  std::vector<MatrixField> out;
  for (int mu = 0; mu < a.dim(); ++mu) {
    const MatrixField am = a[mu];
    const int src = std::min(am.max_order() + 1, uf.max_order());
    out.push_back(derived_field<CMatrix>(a.dim(), src, 1, am.step(), [am, uf, mu](const Point& x, int order) {
      const Jet<CMatrix> ju = uf.jet(x, order + 1);
      const Jet<CMatrix> ja = am.jet(x, order);
      const Jet<CMatrix> ud = adjoint(ju);
      return ju * ja * ud - kI * (ju * derivative(ud, mu));
    }));
  }
  return GaugePotential(a.n(), std::move(out));
}

FieldStrength gauge_transform_F(const FieldStrength& f, const GaugeMap& u) {
  const MatrixField uf = u.field();
  const int d = f.dim();
  std::vector<MatrixField> upper;
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu + 1; nu < d; ++nu) {
      const MatrixField c = f.upper(mu, nu);
      const int src = std::min(c.max_order(), uf.max_order());
      upper.push_back(derived_field<CMatrix>(d, src, 0, c.step(), [c, uf](const Point& x, int order) {
        const Jet<CMatrix> ju = uf.jet(x, order);
        return ju * c.jet(x, order) * adjoint(ju);
      }));
    }
  }
  return FieldStrength(d, std::move(upper));
}

MatrixField gauge_transform_psi(const MatrixField& psi, const GaugeMap& u) {
  const MatrixField uf = u.field();
  const int src = std::min(psi.max_order(), uf.max_order());
  return derived_field<CMatrix>(psi.dim(), src, 0, psi.step(), [psi, uf](const Point& x, int order) {
    return uf.jet(x, order) * psi.jet(x, order);
  });
}

OneForm<double> scalar_form(const GaugePotential& a) {
  if (a.n() != 1) throw DimensionError("scalar_form: requires a U(1) potential");
  OneForm<double> out;
  for (const auto& c : a.components()) out.components.push_back(as_scalar_field(c));
  return out;
}

TwoForm<double> scalar_form(const FieldStrength& f) {
  std::vector<ScalarField> upper;
  for (int mu = 0; mu < f.dim(); ++mu)
    for (int nu = mu + 1; nu < f.dim(); ++nu) upper.push_back(as_scalar_field(f.upper(mu, nu)));
  return TwoForm<double>(f.dim(), std::move(upper));
}

GaugePotential pure_gauge_potential(const GaugeMap& u) {
  const MatrixField uf = u.field();
  std::vector<MatrixField> out;
  for (int mu = 0; mu < uf.dim(); ++mu) {
    out.push_back(derived_field<CMatrix>(uf.dim(), uf.max_order(), 1, uf.step(), [uf, mu](const Point& x, int order) {
      const Jet<CMatrix> ju = uf.jet(x, order + 1);
      return -kI * (ju * derivative(adjoint(ju), mu));
    }));
  }
  return GaugePotential(u.n(), std::move(out));
}

GaugePotential constant_field_potential(int dim, double b, int i, int j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j)
    throw DimensionError("constant_field_potential: bad axes");
  std::vector<MatrixField> comps;
  for (int mu = 0; mu < dim; ++mu) {
    if (mu != j) {
      comps.push_back(MatrixField::constant(dim, CMatrix::Zero(1, 1)));
      continue;
    }
    comps.push_back(MatrixField::analytic(dim, 2, [b, i](const Point& x, int order) {
      const Jet<double> xi = coordinate_jet(x, i, order);
      return jet_map(b * xi, [](double v) {
        CMatrix m(1, 1);
        m(0, 0) = v;
        return m;
      });
    }));
  }
  return GaugePotential(1, std::move(comps));
}

Jet<CMatrix> exp_i_jet(const Jet<double>& f, const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  const CVector phases = (kI * f.value * eig.eigenvalues().cast<Complex>()).array().exp().matrix();
  const CMatrix e = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  Jet<CMatrix> out;
  out.dim = f.dim;
  out.order = f.order;
  out.value = e;
  const CMatrix he = h * e;
  const CMatrix hhe = h * he;
  for (int mu = 0; f.order >= 1 && mu < f.dim; ++mu) out.d1.push_back(kI * f.first(mu) * he);
  for (int mu = 0; f.order >= 2 && mu < f.dim; ++mu)
    for (int nu = 0; nu < f.dim; ++nu)
      out.d2.push_back(kI * f.second(mu, nu) * he - f.first(mu) * f.first(nu) * hhe);
  return out;
}

namespace {

struct Wave {
  RVector w;
  double phase = 0.0;
  double amplitude = 1.0;
};

Jet<double> wave_jet(const Wave& wave, const Point& x, int order) {
  Jet<double> arg = constant_jet(wave.phase, static_cast<int>(x.size()), order);
  for (int mu = 0; mu < x.size(); ++mu) arg = arg + wave.w(mu) * coordinate_jet(x, mu, order);
  return wave.amplitude * sin(arg);
}

Wave random_wave(int dim, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Wave w;
  w.w.resize(dim);
  for (int mu = 0; mu < dim; ++mu) w.w(mu) = dist(rng);
  w.phase = kPi * dist(rng);
  w.amplitude = amplitude;
  return w;
}

}  // namespace

MatrixField random_smooth_unitary(int n, int dim, std::uint64_t seed, int factors) {
  std::mt19937_64 rng(seed);
  std::vector<Wave> waves;
  std::vector<CMatrix> gens;
  for (int k = 0; k < factors; ++k) {
    waves.push_back(random_wave(dim, rng, 1.0));
    gens.push_back(random_hermitian(n, rng()));
  }
  return MatrixField::analytic(dim, 2, [waves, gens, n](const Point& x, int order) {
    Jet<CMatrix> acc = constant_jet<CMatrix>(CMatrix::Identity(n, n), static_cast<int>(x.size()), order);
    for (std::size_t k = 0; k < waves.size(); ++k) acc = acc * exp_i_jet(wave_jet(waves[k], x, order), gens[k]);
    return acc;
  });
}

GaugeMap random_gauge_map(int n, int dim, std::uint64_t seed) {
  return GaugeMap(random_smooth_unitary(n, dim, seed));
}

GaugePotential random_smooth_potential(int n, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<MatrixField> comps;
  for (int mu = 0; mu < dim; ++mu) {
    const CMatrix h0 = 0.5 * random_hermitian(n, rng());
    std::vector<Wave> waves;
    std::vector<CMatrix> gens;
    for (int k = 0; k < 2; ++k) {
      waves.push_back(random_wave(dim, rng, 1.0));
      gens.push_back(random_hermitian(n, rng()));
    }
    comps.push_back(MatrixField::analytic(dim, 2, [h0, waves, gens](const Point& x, int order) {
      Jet<CMatrix> acc = constant_jet<CMatrix>(h0, static_cast<int>(x.size()), order);
      for (std::size_t k = 0; k < waves.size(); ++k) {
        const CMatrix g = gens[k];
        acc = acc + jet_map(wave_jet(waves[k], x, order), [g](double s) { return CMatrix(s * g); });
      }
      return acc;
    }));
  }
  return GaugePotential(n, std::move(comps));
}

}  // namespace bladegauge
