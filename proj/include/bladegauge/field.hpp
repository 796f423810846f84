#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bladegauge/jet.hpp"
#include "bladegauge/numerics.hpp"

namespace bladegauge {

enum class Chart { cartesian, spherical3d };

/// Flat spacetime with a diagonal metric. Index raising is a sign flip per axis.
struct Spacetime {
  int dim = 4;
  std::vector<int> signature{1, -1, -1, -1};
  Chart chart = Chart::cartesian;

  static Spacetime minkowski(int dim = 4);
  static Spacetime euclidean(int dim);
  /// Purely spatial slice, every axis carrying the spatial sign -1.
  static Spacetime spatial(int dim);
  static Spacetime spherical();

  int sign(int mu) const { return signature[static_cast<std::size_t>(mu)]; }
  void validate() const;
};

/// Minkowski product a_mu b^mu of two covariant vectors.
double metric_dot(const Spacetime& st, const RVector& a, const RVector& b);
RVector raise_index(const Spacetime& st, const RVector& v);

inline constexpr double kDefaultStep = 1e-3;

/// A point-evaluable field over a `dim`-dimensional chart.
///
/// Every field is described by a jet function returning Taylor data up to
/// `max_order` (0, 1 or 2). Derivatives beyond what the jet function supplies
/// are filled in by central differences with the field's step: first
/// derivatives by (f(x+h) - f(x-h)) / 2h, second derivatives by nesting that
/// stencil once. Evaluation must be reentrant and side-effect free.
template <typename T>
class Field {
 public:
  using JetFn = std::function<Jet<T>(const Point&, int)>;
  using EvalFn = std::function<T(const Point&)>;

  Field() = default;

  Field(int dim, EvalFn eval, double step = kDefaultStep)
      : dim_(dim), max_order_(0), step_(step) {
    auto f = std::make_shared<EvalFn>(std::move(eval));
    const int d = dim;
    fn_ = [f, d](const Point& x, int) {
      Jet<T> j;
      j.dim = d;
      j.order = 0;
      j.value = (*f)(x);
      return j;
    };
  }

  /// `fn(x, order)` is only ever called with order <= max_order and must
  /// return a jet of at least that order.
  static Field analytic(int dim, int max_order, JetFn fn, double step = kDefaultStep) {
    Field out;
    out.dim_ = dim;
    out.max_order_ = std::clamp(max_order, 0, 2);
    out.step_ = step;
    out.fn_ = std::move(fn);
    return out;
  }

  static Field constant(int dim, T value) {
    return analytic(dim, 2, [value, dim](const Point&, int order) {
      return constant_jet(value, dim, order);
    });
  }

  bool valid() const { return static_cast<bool>(fn_); }
  int dim() const { return dim_; }
  int max_order() const { return max_order_; }
  double step() const { return step_; }

  T operator()(const Point& x) const { return fn_(x, 0).value; }

  T partial(int mu, const Point& x) const {
    if (max_order_ >= 1) return fn_(x, 1).first(mu);
    return central(mu, x, [this](const Point& y) { return (*this)(y); });
  }

  T partial2(int mu, int nu, const Point& x) const {
    if (max_order_ >= 2) return fn_(x, 2).second(mu, nu);
    return jet(x, 2).second(mu, nu);
  }

  /// Taylor data of the requested order (<= 2), analytic where available.
  Jet<T> jet(const Point& x, int order) const {
    order = std::clamp(order, 0, 2);
    if (order <= max_order_) return truncated(fn_(x, order), order);
    Jet<T> j = fn_(x, max_order_);
    j = truncated(std::move(j), max_order_);
    j.dim = dim_;
    if (j.order < 1) {
      j.d1.clear();
      for (int mu = 0; mu < dim_; ++mu)
        j.d1.push_back(central(mu, x, [this](const Point& y) { return fn_(y, 0).value; }));
    }
    if (order >= 2) {
      j.d2.assign(static_cast<std::size_t>(dim_ * dim_), j.value);
      if (max_order_ >= 1) {
        // Differentiate the analytic gradient once, then symmetrise.
        for (int mu = 0; mu < dim_; ++mu) {
          for (int nu = 0; nu < dim_; ++nu) {
            j.second(mu, nu) = central(mu, x, [this, nu](const Point& y) {
              return fn_(y, 1).first(nu);
            });
          }
        }
        for (int mu = 0; mu < dim_; ++mu) {
          for (int nu = mu + 1; nu < dim_; ++nu) {
            T s = detail::plain(0.5 * (j.second(mu, nu) + j.second(nu, mu)));
            j.second(mu, nu) = s;
            j.second(nu, mu) = s;
          }
        }
      } else {
        for (int mu = 0; mu < dim_; ++mu) {
          for (int nu = mu; nu < dim_; ++nu) {
            T s = nested(mu, nu, x);
            j.second(nu, mu) = s;
            j.second(mu, nu) = std::move(s);
          }
        }
      }
    }
    j.order = order;
    return j;
  }

  /// Same field with a different finite-difference step.
  Field with_step(double h) const {
    Field out = *this;
    out.step_ = h;
    return out;
  }

  /// Same values, but every derivative taken by finite differences.
  Field finite_difference_only(double h) const {
    Field out = *this;
    out.max_order_ = 0;
    out.step_ = h;
    return out;
  }

 private:
  template <typename Fn>
  T central(int mu, const Point& x, Fn&& f) const {
    Point xp = x;
    Point xm = x;
    xp(mu) += step_;
    xm(mu) -= step_;
    return detail::plain((f(xp) - f(xm)) / (2.0 * step_));
  }

  T nested(int mu, int nu, const Point& x) const {
    const double h = step_;
    auto at = [&](double a, double b) {
      Point y = x;
      y(mu) += a;
      y(nu) += b;
      return fn_(y, 0).value;
    };
    return detail::plain((at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h));
  }

  int dim_ = 0;
  int max_order_ = 0;
  double step_ = kDefaultStep;
  JetFn fn_;
};

using ScalarField = Field<double>;
using MatrixField = Field<CMatrix>;

/// Free-function spelling of Field::partial.
template <typename T>
T partial(const Field<T>& f, int mu, const Point& x) {
  if (mu < 0 || mu >= f.dim()) throw DimensionError("partial: axis out of range");
  return f.partial(mu, x);
}

/// Derived field whose jets come from `fn`, losing `loss` orders relative to
/// the source max order (each derivative consumed costs one order).
template <typename T>
Field<T> derived_field(int dim, int source_order, int loss, double step,
                       typename Field<T>::JetFn fn) {
  return Field<T>::analytic(dim, std::max(0, source_order - loss), std::move(fn), step);
}

/// Lifts a real scalar field to a 1x1 complex matrix field.
MatrixField as_matrix_field(const ScalarField& f);
/// Real part of the (0,0) entry of a matrix field.
ScalarField as_scalar_field(const MatrixField& f);

template <typename T>
struct OneForm {
  std::vector<Field<T>> components;
  int dim() const { return static_cast<int>(components.size()); }
};

/// Antisymmetric 2-form; only the strict upper triangle is stored so that
/// omega(mu, nu) = -omega(nu, mu) holds exactly.
template <typename T>
class TwoForm {
 public:
  TwoForm() = default;
  TwoForm(int dim, std::vector<Field<T>> upper) : dim_(dim), upper_(std::move(upper)) {
    if (static_cast<int>(upper_.size()) != dim * (dim - 1) / 2)
      throw DimensionError("TwoForm: wrong number of components");
  }

  int dim() const { return dim_; }

  /// Component field for mu < nu.
  const Field<T>& upper(int mu, int nu) const { return upper_[static_cast<std::size_t>(index(mu, nu))]; }

  T value(int mu, int nu, const Point& x) const {
    if (mu == nu) return detail::plain(upper_.front()(x) * 0.0);
    if (mu < nu) return upper(mu, nu)(x);
    return detail::plain(-upper(nu, mu)(x));
  }

  T partial(int rho, int mu, int nu, const Point& x) const {
    if (mu == nu) return detail::plain(upper_.front()(x) * 0.0);
    if (mu < nu) return upper(mu, nu).partial(rho, x);
    return detail::plain(-upper(nu, mu).partial(rho, x));
  }

  /// Field of the (mu, nu) component, signed, for any ordering.
  Field<T> component(int mu, int nu) const {
    if (mu < nu) return upper(mu, nu);
    const Field<T> src = mu == nu ? upper_.front() : upper(std::min(mu, nu), std::max(mu, nu));
    const double s = mu == nu ? 0.0 : -1.0;
    return Field<T>::analytic(dim_, src.max_order(),
                              [src, s](const Point& x, int order) { return s * src.jet(x, order); },
                              src.step());
  }

 private:
  int index(int mu, int nu) const {
    if (mu >= nu || nu >= dim_ || mu < 0) throw DimensionError("TwoForm: bad index pair");
    return mu * dim_ - mu * (mu + 1) / 2 + (nu - mu - 1);
  }

  int dim_ = 0;
  std::vector<Field<T>> upper_;
};

/// (dA)_{mu nu} = d_mu A_nu - d_nu A_mu.
template <typename T>
TwoForm<T> exterior_d(const OneForm<T>& a) {
  const int d = a.dim();
  std::vector<Field<T>> upper;
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu + 1; nu < d; ++nu) {
      const Field<T> am = a.components[static_cast<std::size_t>(mu)];
      const Field<T> an = a.components[static_cast<std::size_t>(nu)];
      const int src = std::min(am.max_order(), an.max_order());
      upper.push_back(derived_field<T>(d, src, 1, am.step(), [am, an, mu, nu](const Point& x, int order) {
        return derivative(an.jet(x, order + 1), mu) - derivative(am.jet(x, order + 1), nu);
      }));
    }
  }
  return TwoForm<T>(d, std::move(upper));
}

/// Exterior-algebra value at a point: coefficients indexed by the bitmask of
/// the (increasing) index set, so coefficient(mask) multiplies dx^{i1}^...^dx^{ip}.
class FormValue {
 public:
  FormValue(int dim, int degree);
  static FormValue from_one_form(const std::vector<double>& components);
  /// Upper-triangle convention: omega(mu, nu) for mu < nu.
  static FormValue from_two_form(int dim, const std::function<double(int, int)>& omega);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  double coefficient(unsigned mask) const { return coeffs_[mask]; }
  double& coefficient(unsigned mask) { return coeffs_[mask]; }
  /// Fully antisymmetric tensor component omega_{i1...ip} for arbitrary indices.
  double component(const std::vector<int>& indices) const;
  double max_abs() const;

  friend FormValue wedge(const FormValue& a, const FormValue& b);

 private:
  int dim_;
  int degree_;
  std::vector<double> coeffs_;
};

FormValue wedge(const FormValue& a, const FormValue& b);

/// A ^ (dA)^r at each sample; true if any component exceeds `tol` anywhere.
bool wedge_power_nonzero(const OneForm<double>& a, const TwoForm<double>& da, int r,
                         const std::vector<Point>& samples, double tol = 1e-6);

struct FormRank {
  int rank = 0;
  bool constant = true;  // false: rank differs between samples; `rank` is the max
  std::vector<int> per_sample;
};

/// Largest r with A ^ (dA)^r != 0 (r < d/2); 0 for the zero form.
FormRank form_rank(const OneForm<double>& a, const std::vector<Point>& samples, double tol = 1e-6);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);

/// Flux of F_{theta phi} through the sphere of given radius on the (r, theta,
/// phi) chart: Gauss-Legendre in theta times trapezoid (2 * order nodes) in phi.
double sphere_flux(const TwoForm<double>& f, double radius, int quadrature_order);
double sphere_flux(const std::function<double(double, double)>& f_theta_phi, int quadrature_order);

struct GridAxis {
  double lower = 0.0;
  double upper = 1.0;
  int cells = 1;
  bool periodic = false;
  double spacing() const { return (upper - lower) / cells; }
};

/// Axis-aligned box split into cells.
struct Grid {
  std::vector<GridAxis> axes;
  int dim() const { return static_cast<int>(axes.size()); }
  std::size_t cell_count() const;
  double cell_volume() const;
  /// Midpoint of the cell with the given flat (row-major, last axis fastest) index.
  Point midpoint(std::size_t flat) const;
  /// Cell-corner node, i.e. lower + i * spacing along each axis.
  Point node(std::size_t flat) const;
  std::vector<Point> midpoints() const;
};

/// Midpoint rule; summation in fixed cell order.
double lattice_integral(const ScalarField& f, const Grid& grid);
double lattice_integral(const std::function<double(const Point&)>& f, const Grid& grid);

/// Worker count from BLADEGAUGE_THREADS (default: hardware concurrency).
int thread_count();
/// Evaluates fn(i) for i in [0, n) across threads; fn must write to slot i only.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace bladegauge
