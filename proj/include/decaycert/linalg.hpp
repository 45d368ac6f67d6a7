#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "decaycert/errors.hpp"

namespace decaycert {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// (M + Mᴴ)/2
inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

/// (M − Mᴴ)/(2i), the Hermitian matrix S with M = hermitian_part(M) + i·S.
inline Matrix imaginary_part(const Matrix& m) { return (m - m.adjoint()) / (2.0 * kI); }

/// Removes rounding asymmetry from a matrix that is Hermitian in exact arithmetic.
inline Matrix hermitize(const Matrix& m) { return hermitian_part(m); }

inline bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

/// Ascending eigenvalues of a Hermitian matrix.
inline RealVector hermitian_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(h), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::EigensolverFailure, "Hermitian eigensolver did not converge");
  return solver.eigenvalues();
}

inline double hermitian_norm(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  const RealVector ev = hermitian_eigenvalues(h);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

/// Returns V·f(Λ)·Vᴴ for Hermitian H = VΛVᴴ.
template <typename F>
Matrix hermitian_function(const Matrix& h, F&& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(h));
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::EigensolverFailure, "Hermitian eigensolver did not converge");
  const RealVector& lam = solver.eigenvalues();
  RealVector mapped(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) mapped(i) = f(lam(i));
  const Matrix& v = solver.eigenvectors();
  return v * mapped.cast<cplx>().asDiagonal() * v.adjoint();
}

/// Cholesky factor of a Hermitian positive-definite matrix; throws NotPositiveDefinite otherwise.
inline Eigen::LLT<Matrix> cholesky(const Matrix& b) {
  Eigen::LLT<Matrix> llt(hermitize(b));
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "Cholesky factorization failed");
  return llt;
}

/// Reduces the Hermitian-definite pencil (H, B) to L⁻¹ H L⁻ᴴ with B = LLᴴ.
inline Matrix congruence_reduce(const Matrix& h, const Eigen::LLT<Matrix>& b_factor) {
  const auto lower = b_factor.matrixL();
  Matrix left = lower.solve(h);
  Matrix reduced = lower.solve(left.adjoint());
  return hermitize(reduced.adjoint());
}

/// Ascending eigenvalues of H x = λ B x with H Hermitian and B Hermitian positive definite.
inline RealVector generalized_eigenvalues(const Matrix& h, const Eigen::LLT<Matrix>& b_factor) {
  return hermitian_eigenvalues(congruence_reduce(h, b_factor));
}

inline RealVector generalized_eigenvalues(const Matrix& h, const Matrix& b) {
  return generalized_eigenvalues(h, cholesky(b));
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

/// 2-norm condition number; infinity for numerically singular input.
inline double condition_number(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  const RealVector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace decaycert
