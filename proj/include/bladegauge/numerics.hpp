#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>

#include "bladegauge/errors.hpp"

namespace bladegauge {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Point = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Numerical thresholds shared by every module. Finite-difference tolerances
/// scale with the step: `fd_tolerance()` is the first-derivative budget and
/// `nested_fd_tolerance()` the one for residuals built from nested stencils.
struct Tolerances {
  double algebraic = 1e-10;
  double analytic = 1e-9;
  double fd_step = 1e-3;
  double fd_factor = 10.0;
  double nested_fd_factor = 100.0;
  double hermiticity_warning = 1e-8;
  double frame_hermiticity = 1e-6;
  double pivot = 1e-8;
  double pole_guard = 1e-6;
  double near_singular = 1e-9;
  double metric_condition = 1e8;

  double fd_tolerance() const { return fd_factor * fd_step * fd_step; }
  double nested_fd_tolerance() const { return nested_fd_factor * fd_step * fd_step; }
};

const Tolerances& default_tolerances();

template <typename Derived>
CMatrix dagger(const Eigen::MatrixBase<Derived>& m) {
  return m.adjoint();
}

template <typename A, typename B>
CMatrix commutator(const Eigen::MatrixBase<A>& m, const Eigen::MatrixBase<B>& n) {
  if (m.cols() != n.rows() || n.cols() != m.rows() || m.rows() != m.cols()) {
    throw DimensionError("commutator: shapes " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " and " + std::to_string(n.rows()) +
                         "x" + std::to_string(n.cols()));
  }
  return m * n - n * m;
}

template <typename A, typename B>
CMatrix anticommutator(const Eigen::MatrixBase<A>& m, const Eigen::MatrixBase<B>& n) {
  if (m.cols() != n.rows() || n.cols() != m.rows() || m.rows() != m.cols()) {
    throw DimensionError("anticommutator: incompatible shapes");
  }
  return m * n + n * m;
}

template <typename Derived>
CMatrix hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermitian_part: matrix is not square");
  return 0.5 * (m + m.adjoint());
}

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix add(const CMatrix& a, const CMatrix& b);
CMatrix scale(const CMatrix& a, Complex s);

/// Largest entry modulus; the norm every tolerance in this library refers to.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& m);
double unitarity_defect(const CMatrix& u);
bool all_finite(const CMatrix& m);

/// exp(i t H) for Hermitian H, via the eigendecomposition of H.
CMatrix unitary_exp(const CMatrix& h, double t = 1.0);

CMatrix random_hermitian(int n, std::uint64_t seed);
CMatrix random_unitary(int n, std::uint64_t seed);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// Reflection diag(I_n, -I_{N-n}) of the reference frame (I_n, 0)^T.
CMatrix reference_blade(int big_n, int n);
CMatrix reference_frame(int big_n, int n);

}  // namespace bladegauge
