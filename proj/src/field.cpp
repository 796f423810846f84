#include "bladegauge/field.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace bladegauge {

Spacetime Spacetime::minkowski(int dim) {
  Spacetime st;
  st.dim = dim;
  st.signature.assign(static_cast<std::size_t>(dim), -1);
  st.signature[0] = 1;
  return st;
}

Spacetime Spacetime::euclidean(int dim) {
  Spacetime st;
  st.dim = dim;
  st.signature.assign(static_cast<std::size_t>(dim), 1);
  return st;
}

Spacetime Spacetime::spatial(int dim) {
  Spacetime st;
  st.dim = dim;
  st.signature.assign(static_cast<std::size_t>(dim), -1);
  return st;
}

Spacetime Spacetime::spherical() {
  Spacetime st = euclidean(3);
  st.chart = Chart::spherical3d;
  return st;
}

void Spacetime::validate() const {
  if (static_cast<int>(signature.size()) != dim)
    throw DimensionError("Spacetime: signature length differs from dimension");
  for (int s : signature)
    if (s != 1 && s != -1) throw ParameterError("Spacetime: signature entries must be +1 or -1");
}

double metric_dot(const Spacetime& st, const RVector& a, const RVector& b) {
  if (a.size() != st.dim || b.size() != st.dim) throw DimensionError("metric_dot: length mismatch");
  double s = 0.0;
  for (int mu = 0; mu < st.dim; ++mu) s += st.sign(mu) * a(mu) * b(mu);
  return s;
}

RVector raise_index(const Spacetime& st, const RVector& v) {
  RVector out = v;
  for (int mu = 0; mu < st.dim; ++mu) out(mu) *= st.sign(mu);
  return out;
}

MatrixField as_matrix_field(const ScalarField& f) {
  return MatrixField::analytic(f.dim(), f.max_order(), [f](const Point& x, int order) {
    return jet_map(f.jet(x, order), [](double v) {
      CMatrix m(1, 1);
      m(0, 0) = v;
      return m;
    });
  }, f.step());
}

ScalarField as_scalar_field(const MatrixField& f) {
  return ScalarField::analytic(f.dim(), f.max_order(), [f](const Point& x, int order) {
    return jet_map(f.jet(x, order), [](const CMatrix& m) { return m(0, 0).real(); });
  }, f.step());
}

// --- exterior algebra -------------------------------------------------------

FormValue::FormValue(int dim, int degree)
    : dim_(dim), degree_(degree), coeffs_(std::size_t{1} << dim, 0.0) {
  if (dim < 0 || dim > 16) throw DimensionError("FormValue: unsupported dimension");
}

FormValue FormValue::from_one_form(const std::vector<double>& components) {
  FormValue f(static_cast<int>(components.size()), 1);
  for (std::size_t mu = 0; mu < components.size(); ++mu) f.coeffs_[std::size_t{1} << mu] = components[mu];
  return f;
}

FormValue FormValue::from_two_form(int dim, const std::function<double(int, int)>& omega) {
  FormValue f(dim, 2);
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = mu + 1; nu < dim; ++nu) f.coeffs_[(1u << mu) | (1u << nu)] = omega(mu, nu);
  return f;
}

double FormValue::component(const std::vector<int>& indices) const {
  if (static_cast<int>(indices.size()) != degree_) throw DimensionError("FormValue: wrong index count");
  std::vector<int> idx = indices;
  int sign = 1;
  // Bubble sort, counting transpositions.
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j + 1 < idx.size() - i; ++j) {
      if (idx[j] == idx[j + 1]) return 0.0;
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
      }
    }
  }
  unsigned mask = 0;
  for (int i : idx) {
    if (mask & (1u << i)) return 0.0;
    mask |= 1u << i;
  }
  return sign * coeffs_[mask];
}

double FormValue::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

FormValue wedge(const FormValue& a, const FormValue& b) {
  if (a.dim_ != b.dim_) throw DimensionError("wedge: dimensions differ");
  FormValue out(a.dim_, a.degree_ + b.degree_);
  if (out.degree_ > out.dim_) return out;
  const unsigned n = 1u << a.dim_;
  for (unsigned ma = 0; ma < n; ++ma) {
    if (std::popcount(ma) != a.degree_ || a.coeffs_[ma] == 0.0) continue;
    for (unsigned mb = 0; mb < n; ++mb) {
      if (std::popcount(mb) != b.degree_ || (ma & mb) || b.coeffs_[mb] == 0.0) continue;
      // Sign of the shuffle that sorts (indices of a, indices of b).
      int inversions = 0;
      for (int i = 0; i < a.dim_; ++i) {
        if (!(ma & (1u << i))) continue;
        inversions += std::popcount(mb & ((1u << i) - 1u));
      }
      const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
      out.coeffs_[ma | mb] += sign * a.coeffs_[ma] * b.coeffs_[mb];
    }
  }
  return out;
}

namespace {

FormValue one_form_at(const OneForm<double>& a, const Point& x) {
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(a.dim()));
  for (const auto& f : a.components) c.push_back(f(x));
  return FormValue::from_one_form(c);
}

FormValue two_form_at(const TwoForm<double>& f, const Point& x) {
  return FormValue::from_two_form(f.dim(), [&](int mu, int nu) { return f.upper(mu, nu)(x); });
}

}  // namespace

bool wedge_power_nonzero(const OneForm<double>& a, const TwoForm<double>& da, int r,
                         const std::vector<Point>& samples, double tol) {
  const int d = a.dim();
  if (r < 0 || 2 * r + 1 > d) throw RankError("wedge_power_nonzero: 2r + 1 exceeds the dimension");
  for (const Point& x : samples) {
    FormValue w = one_form_at(a, x);
    const FormValue f = two_form_at(da, x);
    for (int k = 0; k < r; ++k) w = wedge(w, f);
    if (w.max_abs() > tol) return true;
  }
  return false;
}

FormRank form_rank(const OneForm<double>& a, const std::vector<Point>& samples, double tol) {
  const int d = a.dim();
  const TwoForm<double> da = exterior_d(a);
  FormRank result;
  for (const Point& x : samples) {
    const FormValue av = one_form_at(a, x);
    const FormValue f = two_form_at(da, x);
    int rank = 0;
    FormValue w = av;
    for (int r = 1; 2 * r + 1 <= d; ++r) {
      w = wedge(w, f);
      if (w.max_abs() <= tol) break;
      rank = r;
    }
    result.per_sample.push_back(rank);
  }
  if (!result.per_sample.empty()) {
    result.rank = *std::max_element(result.per_sample.begin(), result.per_sample.end());
    result.constant = std::all_of(result.per_sample.begin(), result.per_sample.end(),
                                  [&](int r) { return r == result.rank; });
  }
  return result;
}

// --- quadrature ---------------------------------------------------------------

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
  if (order < 1) throw ParameterError("gauss_legendre: order must be positive");
  std::vector<double> nodes(static_cast<std::size_t>(order));
  std::vector<double> weights(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)] = x;
    weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return {nodes, weights};
}

double sphere_flux(const std::function<double(double, double)>& f_theta_phi, int quadrature_order) {
  if (quadrature_order < 2) throw ParameterError("sphere_flux: quadrature order must be >= 2");
  const auto [nodes, weights] = gauss_legendre(quadrature_order);
  const int n_phi = 2 * quadrature_order;
  const double dphi = 2.0 * kPi / n_phi;
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double theta = 0.5 * kPi * (nodes[i] + 1.0);
    double ring = 0.0;
    for (int j = 0; j < n_phi; ++j) ring += f_theta_phi(theta, j * dphi);
    total += 0.5 * kPi * weights[i] * ring * dphi;
  }
  return total;
}

double sphere_flux(const TwoForm<double>& f, double radius, int quadrature_order) {
  if (f.dim() != 3) throw DimensionError("sphere_flux: expects a 2-form on the (r, theta, phi) chart");
  return sphere_flux([&](double theta, double phi) {
    Point x(3);
    x << radius, theta, phi;
    return f.value(1, 2, x);
  }, quadrature_order);
}

// --- grids ---------------------------------------------------------------------

std::size_t Grid::cell_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(a.cells);
  return n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes) v *= a.spacing();
  return v;
}

namespace {

Point grid_point(const Grid& g, std::size_t flat, double offset) {
  Point x(g.dim());
  for (int k = g.dim() - 1; k >= 0; --k) {
    const auto& ax = g.axes[static_cast<std::size_t>(k)];
    const auto cells = static_cast<std::size_t>(ax.cells);
    const std::size_t i = flat % cells;
    flat /= cells;
    x(k) = ax.lower + (static_cast<double>(i) + offset) * ax.spacing();
  }
  return x;
}

}  // namespace

Point Grid::midpoint(std::size_t flat) const { return grid_point(*this, flat, 0.5); }
Point Grid::node(std::size_t flat) const { return grid_point(*this, flat, 0.0); }

std::vector<Point> Grid::midpoints() const {
  std::vector<Point> pts;
  pts.reserve(cell_count());
  for (std::size_t i = 0; i < cell_count(); ++i) pts.push_back(midpoint(i));
  return pts;
}

double lattice_integral(const std::function<double(const Point&)>& f, const Grid& grid) {
  if (grid.axes.empty() || grid.cell_count() == 0) throw ParameterError("lattice_integral: empty grid");
  std::vector<double> values(grid.cell_count());
  parallel_for(values.size(), [&](std::size_t i) { values[i] = f(grid.midpoint(i)); });
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * grid.cell_volume();
}

double lattice_integral(const ScalarField& f, const Grid& grid) {
  return lattice_integral([&f](const Point& x) { return f(x); }, grid);
}

int thread_count() {
  if (const char* env = std::getenv("BLADEGAUGE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace bladegauge
