#pragma once

#include "decaycert/decomposition.hpp"

namespace decaycert {

struct Theorem1Params {
  double k = 0.0;
  double m = 0.0;
};

struct Theorem2Params {
  double k = 0.0;
  double p = 0.0;
  double q = 0.0;
};

inline void validate_k(const Decomposition& dec, double k) {
  if (!(k > 0.0 && k < dec.beta))
    throw Error(ErrorKind::InvalidParams,
                "k = " + std::to_string(k) + " must lie in (0, beta = " +
                    std::to_string(dec.beta) + ")");
}

inline void validate(const Decomposition& dec, const Theorem1Params& params) {
  validate_k(dec, params.k);
  if (!(params.m > 0.0 && params.m <= 1.0))
    throw Error(ErrorKind::InvalidParams, "m must lie in (0, 1]");
}

inline void validate(const Decomposition& dec, const Theorem2Params& params) {
  if (!dec.holds_C())
    throw Error(ErrorKind::AssumptionCViolated,
                "delta = " + std::to_string(dec.delta) + " is not positive");
  validate_k(dec, params.k);
  if (!(params.p > 0.0 && params.q > 0.0 && params.p + params.q <= 1.0))
    throw Error(ErrorKind::InvalidParams, "p, q must be positive with p + q <= 1");
}

/// Pieces of ω₁ that depend on k only: B = D₁/k − I and K = Cᴴ T⁻¹ C with
/// C = S̃/k − D₂. Then ω₁(k, m) = λ_min(B − K/(4m)).
struct Omega1Kernel {
  Matrix shifted_damping;
  Matrix coupling;

  Omega1Kernel(const Decomposition& dec, double k) {
    const Eigen::Index n = dec.n();
    const Matrix c = dec.S_tilde / k - dec.D2;
    const Matrix w = dec.T_factor.matrixL().solve(c);
    coupling = hermitize(w.adjoint() * w);
    shifted_damping = dec.D1 / k - Matrix::Identity(n, n);
  }

  Matrix quotient_matrix(double m) const {
    return hermitize(shifted_damping - coupling / (4.0 * m));
  }

  double evaluate(double m) const { return hermitian_eigenvalues(quotient_matrix(m))(0); }
};

/// ω₁(k, m): infimum of ((1/k)(D₁x,x) − ‖x‖² − (1/4m)‖(S̃/k − D₂)x‖²₋₁) / ‖x‖².
/// The dual norm enters squared, matching the Cauchy–Schwarz step it comes from.
inline double omega1(const Decomposition& dec, const Theorem1Params& params) {
  validate(dec, params);
  return Omega1Kernel(dec, params.k).evaluate(params.m);
}

/// The same quotient with the dual norm unsquared, evaluated at the unit vector
/// minimizing the squared form. Diagnostic only; certificates never use it.
inline double omega1_unsquared_probe(const Decomposition& dec, const Theorem1Params& params) {
  validate(dec, params);
  const Omega1Kernel kernel(dec, params.k);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(kernel.quotient_matrix(params.m));
  const Vector x = solver.eigenvectors().col(0);
  const Matrix c = dec.S_tilde / params.k - dec.D2;
  const double main = x.dot(kernel.shifted_damping * x).real();
  return main - scale_norm(dec, c * x, -1) / (4.0 * params.m);
}

struct Omega2Bounds {
  double k_squared = 0.0;  // 1 + k‖D₁‖ + k²/a₀
  double k_beta = 0.0;     // 1 + k‖D₁‖ + kβ/a₀
};

inline Omega2Bounds omega2_bounds(const Decomposition& dec, double k) {
  return {1.0 + k * dec.norm_D1_dual + k * k / dec.a0,
          1.0 + k * dec.norm_D1_dual + k * dec.beta / dec.a0};
}

/// ω₂(k) = λ_max of the pencil (T + kD₁ + k²I, T). Throws VerificationFailed if
/// the bound 1 + k‖D₁‖ + k²/a₀ is exceeded.
inline double omega2(const Decomposition& dec, double k) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidParams, "k must be positive");
  const Eigen::Index n = dec.n();
  const Matrix numerator = dec.T + k * dec.D1 + (k * k) * Matrix::Identity(n, n);
  const RealVector ev = generalized_eigenvalues(numerator, dec.T_factor);
  const double value = ev(ev.size() - 1);
  const double bound = omega2_bounds(dec, k).k_squared;
  if (value > bound + 1e-8 * std::max(1.0, bound))
    throw Error(ErrorKind::VerificationFailed,
                "omega2 = " + std::to_string(value) + " exceeds its a priori bound " +
                    std::to_string(bound));
  return value;
}

/// ω₁′ = a₀(δ/k − ‖S̃‖²/(4pk²) − ‖D₂‖²/(4q)), norms taken H₁ → H₋₁.
inline double omega1_prime(const Decomposition& dec, const Theorem2Params& params) {
  validate(dec, params);
  const double k = params.k;
  return dec.a0 * (dec.delta / k - dec.norm_S * dec.norm_S / (4.0 * params.p * k * k) -
                   dec.norm_D2_dual * dec.norm_D2_dual / (4.0 * params.q));
}

}  // namespace decaycert
