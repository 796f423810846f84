#pragma once

// Independent reference computations for the tests. Nothing here goes
// through Field or Jet: derivatives are five-point stencils on plain lambdas.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

template <typename M>
using Fn = std::function<M(const Point&)>;

/// Fourth-order central difference; error O(h^4).
template <typename M>
M d(const Fn<M>& f, int mu, const Point& x, double h = 1e-3) {
  auto at = [&](double s) {
    Point y = x;
    y(mu) += s;
    return M(f(y));
  };
  return M((-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h));
}

template <typename M>
Fn<M> d_fn(Fn<M> f, int mu, double h = 1e-3) {
  return [f, mu, h](const Point& x) { return d<M>(f, mu, x, h); };
}

inline CMatrix comm(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline std::vector<Point> random_points(int n, int dim, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    Point p(dim);
    for (int k = 0; k < dim; ++k) p(k) = u(rng);
    out.push_back(p);
  }
  return out;
}

/// Gauss curvature of a 2d metric g(x) from Christoffel symbols, every
/// derivative by nested stencils of g itself.
inline double gauss_curvature(const Fn<RMatrix>& g, const Point& x, double h = 1e-4) {
  auto christoffel = [&g, h](const Point& y) {
    const RMatrix gi = g(y).inverse();
    RMatrix dg[2] = {d<RMatrix>(g, 0, y, h), d<RMatrix>(g, 1, y, h)};
    std::vector<double> gam(8);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          double s = 0.0;
          for (int e = 0; e < 2; ++e) s += 0.5 * gi(a, e) * (dg[b](e, c) + dg[c](e, b) - dg[e](b, c));
          gam[static_cast<std::size_t>(a * 4 + b * 2 + c)] = s;
        }
    return gam;
  };
  auto gamma_at = [&](const Point& y, int a, int b, int c) { return christoffel(y)[static_cast<std::size_t>(a * 4 + b * 2 + c)]; };
  auto d_gamma = [&](int mu, int a, int b, int c) {
    std::function<RMatrix(const Point&)> f = [&, a, b, c](const Point& y) {
      RMatrix m(1, 1);
      m(0, 0) = gamma_at(y, a, b, c);
      return m;
    };
    return d<RMatrix>(f, mu, x, h)(0, 0);
  };
  // R^a_{b c e} = d_c Gam^a_{e b} - d_e Gam^a_{c b} + Gam^a_{c f} Gam^f_{e b} - Gam^a_{e f} Gam^f_{c b}
  const std::vector<double> gam = christoffel(x);
  auto G = [&gam](int a, int b, int c) { return gam[static_cast<std::size_t>(a * 4 + b * 2 + c)]; };
  double r_up[2];
  for (int a = 0; a < 2; ++a) {
    double v = d_gamma(0, a, 1, 1) - d_gamma(1, a, 0, 1);
    for (int f = 0; f < 2; ++f) v += G(a, 0, f) * G(f, 1, 1) - G(a, 1, f) * G(f, 0, 1);
    r_up[a] = v;  // R^a_{1 0 1}
  }
  const RMatrix gx = g(x);
  const double r0101 = gx(0, 0) * r_up[0] + gx(0, 1) * r_up[1];
  return r0101 / gx.determinant();
}

}  // namespace oracle
