#include "bladegauge/numerics.hpp"

#include <random>

namespace bladegauge {

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  return a * b;
}

CMatrix add(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("add: shapes differ");
  return a + b;
}

CMatrix scale(const CMatrix& a, Complex s) { return s * a; }

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermiticity_defect: matrix is not square");
  return max_abs(m - m.adjoint());
}

double unitarity_defect(const CMatrix& u) {
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

bool all_finite(const CMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

CMatrix unitary_exp(const CMatrix& h, double t) {
  const double defect = hermiticity_defect(h);
  if (defect > default_tolerances().algebraic) {
    throw DomainError("unitary_exp: generator is not Hermitian (defect " +
                      std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(h));
  const CVector phases =
      (kI * t * eig.eigenvalues().cast<Complex>()).array().exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

CMatrix random_hermitian(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("random_hermitian: n must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = dist(rng);
    for (int j = i + 1; j < n; ++j) {
      const double re = dist(rng);
      const double im = dist(rng);
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  }
  return m;
}

CMatrix random_unitary(int n, std::uint64_t seed) {
  return unitary_exp(random_hermitian(n, seed), 1.0);
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

CMatrix reference_blade(int big_n, int n) {
  CMatrix r = -CMatrix::Identity(big_n, big_n);
  r.topLeftCorner(n, n).setIdentity();
  return r;
}

CMatrix reference_frame(int big_n, int n) {
  if (n > big_n) throw DimensionError("reference_frame: n exceeds N");
  CMatrix v = CMatrix::Zero(big_n, n);
  v.topRows(n).setIdentity();
  return v;
}

}  // namespace bladegauge
