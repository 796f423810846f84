#include "bladegauge/tabulated.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>

#include "bladegauge/errors.hpp"

namespace bladegauge {

std::vector<int> node_shape(const std::vector<GridAxis>& axes) {
  std::vector<int> out;
  for (const auto& a : axes) out.push_back(a.periodic ? a.cells : a.cells + 1);
  return out;
}

std::size_t node_count(const std::vector<GridAxis>& axes) {
  std::size_t total = 1;
  for (int n : node_shape(axes)) total *= static_cast<std::size_t>(n);
  return total;
}

Point node_position(const std::vector<GridAxis>& axes, std::size_t flat) {
  const std::vector<int> shape = node_shape(axes);
  Point p(static_cast<Eigen::Index>(axes.size()));
  for (std::size_t k = axes.size(); k-- > 0;) {
    const auto n = static_cast<std::size_t>(shape[k]);
    p(static_cast<Eigen::Index>(k)) = axes[k].lower + static_cast<double>(flat % n) * axes[k].spacing();
    flat /= n;
  }
  return p;
}

namespace {

// One axis of the tensor product. Second derivatives at the nodes are the
// linear map M = K y of the samples, so every spline value and derivative
// is a fixed weight vector dotted with y.
struct AxisSpline {
  GridAxis axis;
  int n = 0;
  double h = 0.0;
  RMatrix k;

  explicit AxisSpline(const GridAxis& a) : axis(a), h(a.spacing()) {
    if (!(a.upper > a.lower)) throw ParameterError("tabulated_field: axis needs upper > lower");
    if (a.periodic && a.cells < 3) throw ParameterError("tabulated_field: periodic axis needs at least 3 cells");
    if (a.cells < 1) throw ParameterError("tabulated_field: axis needs at least 1 cell");
    n = a.periodic ? a.cells : a.cells + 1;
    RMatrix lhs = RMatrix::Zero(n, n);
    RMatrix rhs = RMatrix::Zero(n, n);
    const double c = 6.0 / (h * h);
    for (int i = 0; i < n; ++i) {
      if (!a.periodic && (i == 0 || i == n - 1)) {
        lhs(i, i) = 1.0;  // natural end: M = 0
        continue;
      }
      const int lo = (i - 1 + n) % n;
      const int hi = (i + 1) % n;
      lhs(i, lo) += 1.0;
      lhs(i, i) += 4.0;
      lhs(i, hi) += 1.0;
      rhs(i, lo) += c;
      rhs(i, i) -= 2.0 * c;
      rhs(i, hi) += c;
    }
    k = lhs.partialPivLu().solve(rhs);
  }

  // Weights for the value and the first two derivatives at coordinate x.
  void weights(double x, int order, RVector& w0, RVector& w1, RVector& w2) const {
    double t = (x - axis.lower) / h;
    int j = 0;
    if (axis.periodic) {
      t = std::fmod(t, static_cast<double>(n));
      if (t < 0) t += n;
      j = std::min(static_cast<int>(std::floor(t)), n - 1);
    } else {
      if (!(t >= -1.0 && t <= n)) {
        throw DomainError("tabulated_field: coordinate " + std::to_string(x) + " is more than one cell outside [" +
                          std::to_string(axis.lower) + ", " + std::to_string(axis.upper) + "]");
      }
      j = std::clamp(static_cast<int>(std::floor(t)), 0, n - 2);
    }
    const int j1 = (j + 1) % n;
    const double b = t - j;
    const double a = 1.0 - b;
    w0 = RVector::Zero(n);
    w0(j) += a;
    w0(j1) += b;
    w0 += (h * h / 6.0) * ((a * a * a - a) * k.row(j).transpose() + (b * b * b - b) * k.row(j1).transpose());
    if (order >= 1) {
      w1 = RVector::Zero(n);
      w1(j) -= 1.0 / h;
      w1(j1) += 1.0 / h;
      w1 += (h / 6.0) * (-(3 * a * a - 1) * k.row(j).transpose() + (3 * b * b - 1) * k.row(j1).transpose());
    }
    if (order >= 2) w2 = a * k.row(j).transpose() + b * k.row(j1).transpose();
  }
};

template <typename T>
struct Flat;

template <>
struct Flat<double> {
  static Eigen::Index width(const double&) { return 1; }
  static bool same_shape(const double&, const double&) { return true; }
  static void write(const double& v, CMatrix& d, Eigen::Index row) { d(row, 0) = v; }
  static double read(const Eigen::RowVectorXcd& r, const double&) { return r(0).real(); }
};

template <typename M>
struct FlatMatrix {
  static Eigen::Index width(const M& v) { return v.size(); }
  static bool same_shape(const M& a, const M& b) { return a.rows() == b.rows() && a.cols() == b.cols(); }
  static void write(const M& v, CMatrix& d, Eigen::Index row) {
    for (Eigen::Index i = 0; i < v.size(); ++i) d(row, i) = v.data()[i];
  }
  static M read(const Eigen::RowVectorXcd& r, const M& proto) {
    M out(proto.rows(), proto.cols());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      if constexpr (std::is_same_v<M, RMatrix>) {
        out.data()[i] = r(i).real();
      } else {
        out.data()[i] = r(i);
      }
    }
    return out;
  }
};

template <>
struct Flat<CMatrix> : FlatMatrix<CMatrix> {};
template <>
struct Flat<RMatrix> : FlatMatrix<RMatrix> {};

RVector kron(const RVector& a, const RVector& b) {
  RVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

struct Table {
  std::vector<AxisSpline> splines;
  CMatrix data;  // nodes x flattened entries

  // Row of contracted data for per-axis choice of weight (0, 1 or 2).
  Eigen::RowVectorXcd contract(const std::vector<std::array<RVector, 3>>& w, const std::vector<int>& pick) const {
    RVector full = w[0][static_cast<std::size_t>(pick[0])];
    for (std::size_t k = 1; k < w.size(); ++k) full = kron(full, w[k][static_cast<std::size_t>(pick[k])]);
    return full.cast<Complex>().transpose() * data;
  }
};

}  // namespace

template <typename T>
Field<T> tabulated_field(const std::vector<GridAxis>& axes, const std::vector<T>& samples) {
  if (axes.empty()) throw DimensionError("tabulated_field: no axes");
  auto table = std::make_shared<Table>();
  for (const auto& a : axes) table->splines.emplace_back(a);
  if (samples.size() != node_count(axes)) {
    throw DimensionError("tabulated_field: expected " + std::to_string(node_count(axes)) + " samples, got " +
                         std::to_string(samples.size()));
  }
  const T proto = samples.front();
  table->data = CMatrix::Zero(static_cast<Eigen::Index>(samples.size()), Flat<T>::width(proto));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (!Flat<T>::same_shape(samples[s], proto)) throw DimensionError("tabulated_field: samples differ in shape");
    Flat<T>::write(samples[s], table->data, static_cast<Eigen::Index>(s));
  }
  const int dim = static_cast<int>(axes.size());
  return Field<T>::analytic(dim, 2, [table, proto, dim](const Point& x, int order) {
    std::vector<std::array<RVector, 3>> w(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
      auto& wk = w[static_cast<std::size_t>(k)];
      table->splines[static_cast<std::size_t>(k)].weights(x(k), order, wk[0], wk[1], wk[2]);
    }
    std::vector<int> pick(static_cast<std::size_t>(dim), 0);
    Jet<T> out;
    out.dim = dim;
    out.order = order;
    out.value = Flat<T>::read(table->contract(w, pick), proto);
    for (int mu = 0; order >= 1 && mu < dim; ++mu) {
      pick.assign(static_cast<std::size_t>(dim), 0);
      pick[static_cast<std::size_t>(mu)] = 1;
      out.d1.push_back(Flat<T>::read(table->contract(w, pick), proto));
    }
    if (order >= 2) {
      out.d2.assign(static_cast<std::size_t>(dim * dim), proto);
      for (int mu = 0; mu < dim; ++mu) {
        for (int nu = mu; nu < dim; ++nu) {
          pick.assign(static_cast<std::size_t>(dim), 0);
          if (mu == nu) {
            pick[static_cast<std::size_t>(mu)] = 2;
          } else {
            pick[static_cast<std::size_t>(mu)] = 1;
            pick[static_cast<std::size_t>(nu)] = 1;
          }
          out.second(mu, nu) = Flat<T>::read(table->contract(w, pick), proto);
          out.second(nu, mu) = out.second(mu, nu);
        }
      }
    }
    return out;
  });
}

template Field<double> tabulated_field(const std::vector<GridAxis>&, const std::vector<double>&);
template Field<CMatrix> tabulated_field(const std::vector<GridAxis>&, const std::vector<CMatrix>&);
template Field<RMatrix> tabulated_field(const std::vector<GridAxis>&, const std::vector<RMatrix>&);

}  // namespace bladegauge
