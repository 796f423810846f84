#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>
#include <utility>
#include <vector>

#include "bladegauge/numerics.hpp"

namespace bladegauge {

/// Second-order Taylor data of a field at one point: value, first partials and
/// the (symmetric) Hessian, stored row-major as d2[mu * dim + nu].
///
/// `order` says how much of that is present: 0 = value only, 1 = value and
/// gradient, 2 = everything. Arithmetic on jets applies the Leibniz rule and
/// truncates to the lowest order of the operands, so analytic derivatives
/// survive any chain of algebraic operations.
template <typename T>
struct Jet {
  int dim = 0;
  int order = 0;
  T value{};
  std::vector<T> d1;
  std::vector<T> d2;

  const T& first(int mu) const { return d1[static_cast<std::size_t>(mu)]; }
  const T& second(int mu, int nu) const {
    return d2[static_cast<std::size_t>(mu * dim + nu)];
  }
  T& second(int mu, int nu) { return d2[static_cast<std::size_t>(mu * dim + nu)]; }
};

namespace detail {

template <typename X>
auto plain(X&& x) {
  if constexpr (requires { x.eval(); }) {
    return x.eval();
  } else {
    return std::forward<X>(x);
  }
}

template <typename X>
using plain_t = std::decay_t<decltype(plain(std::declval<X>()))>;

template <typename T>
T adjoint_value(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else if constexpr (std::is_same_v<T, Complex>) {
    return std::conj(v);
  } else {
    return v.adjoint();
  }
}

}  // namespace detail

template <typename T>
Jet<T> constant_jet(const T& value, int dim, int order) {
  Jet<T> j;
  j.dim = dim;
  j.order = order;
  j.value = value;
  const T zero = detail::plain(value * 0.0);
  if (order >= 1) j.d1.assign(static_cast<std::size_t>(dim), zero);
  if (order >= 2) j.d2.assign(static_cast<std::size_t>(dim * dim), zero);
  return j;
}

/// The coordinate function x^mu.
inline Jet<double> coordinate_jet(const Point& x, int mu, int order) {
  Jet<double> j = constant_jet(x(mu), static_cast<int>(x.size()), order);
  if (order >= 1) j.d1[static_cast<std::size_t>(mu)] = 1.0;
  return j;
}

template <typename T>
Jet<T> truncated(Jet<T> j, int order) {
  if (order >= j.order) return j;
  j.order = order;
  if (order < 2) j.d2.clear();
  if (order < 1) j.d1.clear();
  return j;
}

/// Applies a linear map to every Taylor coefficient.
template <typename T, typename Fn>
auto jet_map(const Jet<T>& j, Fn&& fn) {
  using R = detail::plain_t<decltype(fn(j.value))>;
  Jet<R> out;
  out.dim = j.dim;
  out.order = j.order;
  out.value = detail::plain(fn(j.value));
  out.d1.reserve(j.d1.size());
  for (const auto& v : j.d1) out.d1.push_back(detail::plain(fn(v)));
  out.d2.reserve(j.d2.size());
  for (const auto& v : j.d2) out.d2.push_back(detail::plain(fn(v)));
  return out;
}

/// Jet of the partial derivative along mu; one order lower.
template <typename T>
Jet<T> derivative(const Jet<T>& j, int mu) {
  Jet<T> out;
  out.dim = j.dim;
  out.order = j.order - 1;
  out.value = j.first(mu);
  if (j.order >= 2) {
    out.d1.reserve(static_cast<std::size_t>(j.dim));
    for (int nu = 0; nu < j.dim; ++nu) out.d1.push_back(j.second(mu, nu));
  }
  return out;
}

template <typename A, typename B>
auto operator+(const Jet<A>& a, const Jet<B>& b) {
  using R = detail::plain_t<decltype(std::declval<A>() + std::declval<B>())>;
  Jet<R> out;
  out.dim = a.dim;
  out.order = std::min(a.order, b.order);
  out.value = detail::plain(a.value + b.value);
  for (std::size_t k = 0; out.order >= 1 && k < a.d1.size(); ++k)
    out.d1.push_back(detail::plain(a.d1[k] + b.d1[k]));
  for (std::size_t k = 0; out.order >= 2 && k < a.d2.size(); ++k)
    out.d2.push_back(detail::plain(a.d2[k] + b.d2[k]));
  return out;
}

inline Jet<double> operator+(double s, Jet<double> a) {
  a.value += s;
  return a;
}

inline Jet<double> operator+(Jet<double> a, double s) { return s + std::move(a); }

template <typename T>
Jet<T> operator-(const Jet<T>& a) {
  return jet_map(a, [](const T& v) { return detail::plain(-v); });
}

template <typename A, typename B>
auto operator-(const Jet<A>& a, const Jet<B>& b) {
  return a + (-b);
}

template <typename T>
Jet<T> operator*(double s, const Jet<T>& a) {
  return jet_map(a, [s](const T& v) { return detail::plain(s * v); });
}

template <typename T>
auto operator*(Complex s, const Jet<T>& a) {
  return jet_map(a, [s](const T& v) { return detail::plain(s * v); });
}

/// Leibniz rule, truncated to the lower of the two orders.
template <typename A, typename B>
auto operator*(const Jet<A>& a, const Jet<B>& b) {
  using R = detail::plain_t<decltype(std::declval<A>() * std::declval<B>())>;
  Jet<R> out;
  out.dim = a.dim;
  out.order = std::min(a.order, b.order);
  out.value = detail::plain(a.value * b.value);
  const int d = a.dim;
  if (out.order >= 1) {
    out.d1.reserve(static_cast<std::size_t>(d));
    for (int mu = 0; mu < d; ++mu)
      out.d1.push_back(detail::plain(a.first(mu) * b.value + a.value * b.first(mu)));
  }
  if (out.order >= 2) {
    out.d2.reserve(static_cast<std::size_t>(d * d));
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = 0; nu < d; ++nu) {
        out.d2.push_back(detail::plain(a.second(mu, nu) * b.value +
                                       a.first(mu) * b.first(nu) +
                                       a.first(nu) * b.first(mu) +
                                       a.value * b.second(mu, nu)));
      }
    }
  }
  return out;
}

template <typename T>
Jet<T> adjoint(const Jet<T>& a) {
  return jet_map(a, [](const T& v) { return detail::adjoint_value(v); });
}

template <typename T>
Jet<T> hermitian_part(const Jet<T>& a) {
  return jet_map(a, [](const T& v) { return detail::plain(0.5 * (v + v.adjoint())); });
}

template <typename A, typename B>
auto commutator(const Jet<A>& a, const Jet<B>& b) {
  return a * b - b * a;
}

inline Jet<Complex> to_complex(const Jet<double>& a) {
  return jet_map(a, [](double v) { return Complex(v, 0.0); });
}

inline Jet<Complex> trace(const Jet<CMatrix>& a) {
  return jet_map(a, [](const CMatrix& m) { return m.trace(); });
}

/// Scalar chain rule given f(v), f'(v), f''(v).
template <typename S>
Jet<S> chain(const Jet<S>& a, S f0, S f1, S f2) {
  Jet<S> out;
  out.dim = a.dim;
  out.order = a.order;
  out.value = f0;
  if (a.order >= 1) {
    for (const S& g : a.d1) out.d1.push_back(f1 * g);
  }
  if (a.order >= 2) {
    for (int mu = 0; mu < a.dim; ++mu)
      for (int nu = 0; nu < a.dim; ++nu)
        out.d2.push_back(f1 * a.second(mu, nu) + f2 * a.first(mu) * a.first(nu));
  }
  return out;
}

inline Jet<double> sin(const Jet<double>& a) {
  return chain(a, std::sin(a.value), std::cos(a.value), -std::sin(a.value));
}

inline Jet<double> cos(const Jet<double>& a) {
  return chain(a, std::cos(a.value), -std::sin(a.value), -std::cos(a.value));
}

inline Jet<double> exp(const Jet<double>& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e, e);
}

inline Jet<double> log(const Jet<double>& a) {
  if (a.value <= 0.0) throw DomainError("log: non-positive argument");
  return chain(a, std::log(a.value), 1.0 / a.value, -1.0 / (a.value * a.value));
}

inline Jet<double> sqrt(const Jet<double>& a) {
  if (a.value < 0.0) throw DomainError("sqrt: negative argument");
  const double s = std::sqrt(a.value);
  if (a.order >= 1 && s == 0.0) throw DomainError("sqrt: not differentiable at 0");
  return chain(a, s, a.order >= 1 ? 0.5 / s : 0.0,
               a.order >= 1 ? -0.25 / (s * a.value) : 0.0);
}

inline Jet<double> arccos(const Jet<double>& a) {
  if (std::abs(a.value) > 1.0) throw DomainError("arccos: argument outside [-1, 1]");
  if (a.order == 0) return chain(a, std::acos(a.value), 0.0, 0.0);
  const double q = 1.0 - a.value * a.value;
  if (q <= 0.0) throw DomainError("arccos: not differentiable at |x| = 1");
  const double s = std::sqrt(q);
  return chain(a, std::acos(a.value), -1.0 / s, -a.value / (q * s));
}

inline Jet<double> arcsin(const Jet<double>& a) {
  if (std::abs(a.value) > 1.0) throw DomainError("arcsin: argument outside [-1, 1]");
  if (a.order == 0) return chain(a, std::asin(a.value), 0.0, 0.0);
  const double q = 1.0 - a.value * a.value;
  if (q <= 0.0) throw DomainError("arcsin: not differentiable at |x| = 1");
  const double s = std::sqrt(q);
  return chain(a, std::asin(a.value), 1.0 / s, a.value / (q * s));
}

inline Jet<double> reciprocal(const Jet<double>& a) {
  if (a.value == 0.0) throw DomainError("division by zero");
  const double r = 1.0 / a.value;
  return chain(a, r, -r * r, 2.0 * r * r * r);
}

inline Jet<double> pow(const Jet<double>& a, double p) {
  const double v = a.value;
  if (v <= 0.0 && p != std::round(p)) throw DomainError("pow: non-integer power of non-positive base");
  const double f1 = p == 0.0 ? 0.0 : p * std::pow(v, p - 1.0);
  const double f2 = p == 0.0 || p == 1.0 ? 0.0 : p * (p - 1.0) * std::pow(v, p - 2.0);
  return chain(a, std::pow(v, p), f1, f2);
}

/// e^{i a} for a real jet.
inline Jet<Complex> exp_i(const Jet<double>& a) {
  const Complex e = std::exp(kI * a.value);
  return chain(to_complex(a), e, kI * e, -e);
}

/// Builds a matrix jet from per-entry scalar jets (row-major list).
inline Jet<CMatrix> assemble(int rows, int cols, const std::vector<Jet<Complex>>& entries) {
  Jet<CMatrix> out;
  out.dim = entries.front().dim;
  out.order = entries.front().order;
  for (const auto& e : entries) out.order = std::min(out.order, e.order);
  auto build = [&](auto&& get) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = get(entries[static_cast<std::size_t>(i * cols + j)]);
    return m;
  };
  out.value = build([](const Jet<Complex>& e) { return e.value; });
  for (int mu = 0; out.order >= 1 && mu < out.dim; ++mu)
    out.d1.push_back(build([mu](const Jet<Complex>& e) { return e.first(mu); }));
  for (int mu = 0; out.order >= 2 && mu < out.dim; ++mu)
    for (int nu = 0; nu < out.dim; ++nu)
      out.d2.push_back(build([mu, nu](const Jet<Complex>& e) { return e.second(mu, nu); }));
  return out;
}

/// Matrix inverse with d(G^-1) = -G^-1 dG G^-1 and its second-order analogue.
template <typename M>
Jet<M> inverse(const Jet<M>& g) {
  Jet<M> out;
  out.dim = g.dim;
  out.order = g.order;
  const M inv = g.value.inverse();
  out.value = inv;
  if (g.order >= 1) {
    for (int mu = 0; mu < g.dim; ++mu) out.d1.push_back(-inv * g.first(mu) * inv);
  }
  if (g.order >= 2) {
    for (int mu = 0; mu < g.dim; ++mu) {
      for (int nu = 0; nu < g.dim; ++nu) {
        M t = -inv * g.second(mu, nu) * inv +
              inv * g.first(mu) * inv * g.first(nu) * inv +
              inv * g.first(nu) * inv * g.first(mu) * inv;
        out.d2.push_back(std::move(t));
      }
    }
  }
  return out;
}

}  // namespace bladegauge
