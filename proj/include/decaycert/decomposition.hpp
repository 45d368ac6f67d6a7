#pragma once

#include <string>

#include "decaycert/linalg.hpp"

namespace decaycert {

/// The system u″ + D u′ + A u = 0 on ℂⁿ.
struct OperatorPair {
  Matrix A;  // stiffness
  Matrix D;  // damping

  Eigen::Index n() const { return A.rows(); }
};

inline void validate(const OperatorPair& pair) {
  if (pair.A.rows() == 0 || pair.A.rows() != pair.A.cols())
    throw Error(ErrorKind::InvalidInput, "stiffness matrix must be square and non-empty");
  if (pair.D.rows() != pair.D.cols())
    throw Error(ErrorKind::InvalidInput, "damping matrix must be square");
  if (pair.D.rows() != pair.A.rows())
    throw Error(ErrorKind::DimensionMismatch,
                "A is " + std::to_string(pair.A.rows()) + "x" + std::to_string(pair.A.cols()) +
                    " but D is " + std::to_string(pair.D.rows()) + "x" +
                    std::to_string(pair.D.cols()));
  if (!all_finite(pair.A) || !all_finite(pair.D))
    throw Error(ErrorKind::InvalidInput, "matrix entries must be finite");
}

/// Splitting A = T + iS̃, D = D₁ + iD₂ together with the scalar constants that
/// every certificate is built from. Dual norms are the H₁ → H₋₁ operator norms,
/// i.e. spectral norms after the congruence X ↦ T^{-1/2} X T^{-1/2}.
struct Decomposition {
  OperatorPair pair;

  Matrix T;
  Matrix S_tilde;
  Matrix S;  // T^{-1/2} S̃ T^{-1/2}
  Matrix D1;
  Matrix D2;
  Matrix T_inv_sqrt;
  Eigen::LLT<Matrix> T_factor;

  double a0 = 0.0;     // λ_min(T)
  double t_norm = 0.0; // λ_max(T)
  double beta = 0.0;   // λ_min(D₁)
  double delta = 0.0;  // λ_min(D₁, T)
  double sector_tan = 0.0;
  double norm_S = 0.0;
  double norm_D2_dual = 0.0;
  double norm_D1_dual = 0.0;
  double d1_norm = 0.0;  // ‖D₁‖₂ in H

  Eigen::Index n() const { return pair.n(); }
  bool holds_B() const { return beta > 1e-12 * d1_norm; }
  bool holds_C() const { return delta > 1e-12 * norm_D1_dual; }
};

struct AssumptionReport {
  bool holds_A = false;
  bool holds_B = false;
  bool holds_C = false;
  double a0 = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double sector_tan = 0.0;
};

/// T must satisfy λ_min(T) > kSectorialTolerance·‖T‖₂.
inline constexpr double kSectorialTolerance = 1e-10;

inline Matrix dual_congruence(const Decomposition& dec, const Matrix& x) {
  return hermitize(dec.T_inv_sqrt * x * dec.T_inv_sqrt);
}

inline Decomposition decompose(const OperatorPair& pair) {
  validate(pair);
  Decomposition dec;
  dec.pair = pair;
  dec.T = hermitian_part(pair.A);
  dec.S_tilde = imaginary_part(pair.A);
  dec.D1 = hermitian_part(pair.D);
  dec.D2 = imaginary_part(pair.D);

  Eigen::SelfAdjointEigenSolver<Matrix> t_eig(dec.T);
  if (t_eig.info() != Eigen::Success)
    throw Error(ErrorKind::EigensolverFailure, "eigensolve of Re A failed");
  const RealVector& t_vals = t_eig.eigenvalues();
  dec.a0 = t_vals(0);
  dec.t_norm = std::max(std::abs(t_vals(0)), std::abs(t_vals(t_vals.size() - 1)));
  if (!(dec.a0 > kSectorialTolerance * dec.t_norm))
    throw Error(ErrorKind::NotSectorial,
                "lambda_min(Re A) = " + std::to_string(dec.a0) + " is not positive");

  RealVector inv_sqrt = t_vals.array().rsqrt();
  const Matrix& v = t_eig.eigenvectors();
  dec.T_inv_sqrt = hermitize(v * inv_sqrt.cast<cplx>().asDiagonal() * v.adjoint());
  dec.T_factor = cholesky(dec.T);

  const RealVector d1_vals = hermitian_eigenvalues(dec.D1);
  dec.beta = d1_vals(0);
  dec.d1_norm = std::max(std::abs(d1_vals(0)), std::abs(d1_vals(d1_vals.size() - 1)));
  dec.delta = generalized_eigenvalues(dec.D1, dec.T_factor)(0);

  dec.S = dual_congruence(dec, dec.S_tilde);
  dec.norm_S = hermitian_norm(dec.S);
  dec.sector_tan = dec.norm_S;
  dec.norm_D2_dual = hermitian_norm(dual_congruence(dec, dec.D2));
  dec.norm_D1_dual = hermitian_norm(dual_congruence(dec, dec.D1));
  return dec;
}

inline AssumptionReport check_assumptions(const Decomposition& dec) {
  AssumptionReport report;
  report.holds_A = dec.a0 > 0.0;
  report.holds_B = dec.holds_B();
  report.holds_C = dec.holds_C();
  report.a0 = dec.a0;
  report.beta = dec.beta;
  report.delta = dec.delta;
  report.sector_tan = dec.sector_tan;
  if (report.holds_C) {
    // D₁ ⪰ δT ⪰ δa₀I; equality is reachable in finite dimensions.
    const double slack = 1e-10 * std::max(1.0, std::abs(dec.beta));
    if (!report.holds_B || dec.beta + slack < dec.a0 * dec.delta)
      throw Error(ErrorKind::VerificationFailed,
                  "assumption (C) holds but beta < a0*delta");
  }
  return report;
}

/// Weighted norm (xᴴ T^s x)^{1/2} for s ∈ {−1, 0, 1}.
inline double scale_norm(const Decomposition& dec, const Vector& x, int s) {
  switch (s) {
    case 0: return x.norm();
    case 1: return std::sqrt(std::max(0.0, x.dot(dec.T * x).real()));
    case -1: return std::sqrt(std::max(0.0, x.dot(dec.T_factor.solve(x)).real()));
    default: throw Error(ErrorKind::InvalidParams, "only the scales -1, 0, 1 are realized");
  }
}

}  // namespace decaycert
