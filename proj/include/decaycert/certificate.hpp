#pragma once

#include <algorithm>
#include <string_view>
#include <vector>

#include "decaycert/constants.hpp"
#include "decaycert/expm.hpp"

namespace decaycert {

enum class Variant { Theorem1, Theorem2 };

inline std::string_view to_string(Variant v) { return v == Variant::Theorem1 ? "t1" : "t2"; }

/// A decay certificate: ‖e^{t𝒜}‖ ≤ const·e^{−rate·t} with rate = k·θ.
/// For Theorem1 omega1_value holds ω₁(k, m); for Theorem2 it holds ω₁′(k, p, q).
struct Certificate {
  Variant variant = Variant::Theorem1;
  double k = 0.0;
  double m = 0.0;
  double p = 0.0;
  double q = 0.0;
  double omega1_value = 0.0;
  double omega2_value = 0.0;
  double theta = 0.0;
  double rate = 0.0;
  bool valid = false;
  double equivalence_lower = 0.0;  // 1 − k/β
  double equivalence_upper = 0.0;  // max(1 + k‖D₁‖ + kβ/a₀, 1 + k/β)
};

/// Gram matrix of the modified inner product [x, y] = yᴴ G x on (x₁, x₂) = (u′, u).
struct GramForm {
  Matrix G;
  double k = 0.0;
};

/// 𝒜 = [[−D, −A], [I, 0]] acting on (u′, u).
inline Matrix build_block_matrix(const Decomposition& dec) {
  const Eigen::Index n = dec.n();
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = -dec.pair.D;
  block.topRightCorner(n, n) = -dec.pair.A;
  block.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return block;
}

/// 𝒜⁻¹ = [[0, I], [−A⁻¹, −A⁻¹D]].
inline Matrix block_matrix_inverse(const Decomposition& dec) {
  const Eigen::Index n = dec.n();
  const Eigen::PartialPivLU<Matrix> a_lu(dec.pair.A);
  Matrix inverse = Matrix::Zero(2 * n, 2 * n);
  inverse.topRightCorner(n, n) = Matrix::Identity(n, n);
  inverse.bottomLeftCorner(n, n) = -a_lu.inverse();
  inverse.bottomRightCorner(n, n) = -a_lu.solve(dec.pair.D);
  return inverse;
}

/// Standard energy Gram G₀ = diag(I, T).
inline Matrix energy_gram(const Decomposition& dec) {
  const Eigen::Index n = dec.n();
  Matrix g0 = Matrix::Zero(2 * n, 2 * n);
  g0.topLeftCorner(n, n) = Matrix::Identity(n, n);
  g0.bottomRightCorner(n, n) = dec.T;
  return g0;
}

/// G = [[I, kI], [kI, T + kD₁]]. Definiteness is checked by Cholesky; it is
/// guaranteed for k ∈ (0, β) and may persist somewhat beyond β.
inline GramForm build_gram(const Decomposition& dec, double k) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidParams, "k must be positive");
  const Eigen::Index n = dec.n();
  const Matrix ident = Matrix::Identity(n, n);
  GramForm form;
  form.k = k;
  form.G = Matrix::Zero(2 * n, 2 * n);
  form.G.topLeftCorner(n, n) = ident;
  form.G.topRightCorner(n, n) = k * ident;
  form.G.bottomLeftCorner(n, n) = k * ident;
  form.G.bottomRightCorner(n, n) = hermitize(dec.T + k * dec.D1);
  Eigen::LLT<Matrix> llt(form.G);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite,
                "modified Gram matrix is not positive definite at k = " + std::to_string(k));
  return form;
}

inline double equivalence_upper_constant(const Decomposition& dec, double k) {
  return std::max(1.0 + k * dec.norm_D1_dual + k * dec.beta / dec.a0, 1.0 + k / dec.beta);
}

inline void require_accretive_damping(const Decomposition& dec) {
  if (!dec.holds_B())
    throw Error(ErrorKind::NotAccretiveDamping,
                "beta = " + std::to_string(dec.beta) + " is not positive");
}

/// Theorem 1 certificate from precomputed ω₁, ω₂ (used by the optimizer's hot loop).
inline Certificate assemble_t1(const Decomposition& dec, const Theorem1Params& params,
                               double omega1_value, double omega2_value) {
  Certificate cert;
  cert.variant = Variant::Theorem1;
  cert.k = params.k;
  cert.m = params.m;
  cert.omega1_value = omega1_value;
  cert.omega2_value = omega2_value;
  cert.valid = omega1_value >= 0.0;
  cert.theta = cert.valid ? std::min(omega1_value / 2.0, (1.0 - params.m) / omega2_value) : 0.0;
  cert.rate = params.k * cert.theta;
  cert.equivalence_lower = 1.0 - params.k / dec.beta;
  cert.equivalence_upper = equivalence_upper_constant(dec, params.k);
  return cert;
}

inline Certificate assemble_t2(const Decomposition& dec, const Theorem2Params& params,
                               double omega1_value, double omega2_value) {
  Certificate cert;
  cert.variant = Variant::Theorem2;
  cert.k = params.k;
  cert.p = params.p;
  cert.q = params.q;
  cert.omega1_value = omega1_value;
  cert.omega2_value = omega2_value;
  cert.valid = omega1_value >= 1.0;
  cert.theta = cert.valid ? std::min((omega1_value - 1.0) / 2.0,
                                     (1.0 - params.p - params.q) / omega2_value)
                          : 0.0;
  cert.rate = params.k * cert.theta;
  cert.equivalence_lower = 1.0 - params.k / dec.beta;
  cert.equivalence_upper = equivalence_upper_constant(dec, params.k);
  return cert;
}

inline Certificate make_certificate_t1(const Decomposition& dec, const Theorem1Params& params) {
  require_accretive_damping(dec);
  const double w1 = omega1(dec, params);
  return assemble_t1(dec, params, w1, omega2(dec, params.k));
}

inline Certificate make_certificate_t2(const Decomposition& dec, const Theorem2Params& params) {
  const double w1 = omega1_prime(dec, params);
  return assemble_t2(dec, params, w1, omega2(dec, params.k));
}

struct VerificationResult {
  double lambda_max = 0.0;  // largest eigenvalue of ((G𝒜)_H, G)
  double margin = 0.0;      // −rate − lambda_max; nonnegative up to tolerance
};

/// Checks that −𝒜 − rate·I is accretive in the modified inner product:
/// λ_max(Herm(G𝒜), G) ≤ −rate + tol.
inline VerificationResult verify_accretivity(const Decomposition& dec, const Certificate& cert,
                                             double tol = 1e-8) {
  if (!cert.valid) throw Error(ErrorKind::InvalidParams, "certificate is not valid");
  const GramForm form = build_gram(dec, cert.k);
  const Matrix block = build_block_matrix(dec);
  const Matrix ga = form.G * block;
  const RealVector ev = generalized_eigenvalues(hermitian_part(ga), form.G);
  VerificationResult result;
  result.lambda_max = ev(ev.size() - 1);
  result.margin = -cert.rate - result.lambda_max;
  if (result.margin < -tol)
    throw Error(ErrorKind::VerificationFailed,
                "modified-norm accretivity violated: lambda_max = " +
                    std::to_string(result.lambda_max) + " > -rate = " +
                    std::to_string(-cert.rate));
  return result;
}

struct NormEquivalence {
  double lower = 0.0;  // λ_min(G, G₀)
  double upper = 0.0;  // λ_max(G, G₀)

  /// Constant C in ‖x(t)‖² ≤ C e^{−2·rate·t} ‖x(0)‖² (energy, squared-norm form).
  double energy_constant() const { return upper / lower; }
};

inline NormEquivalence verify_norm_equivalence(const Decomposition& dec, double k) {
  validate_k(dec, k);
  const GramForm form = build_gram(dec, k);
  const RealVector ev = generalized_eigenvalues(form.G, energy_gram(dec));
  NormEquivalence eq{ev(0), ev(ev.size() - 1)};
  const double floor = 1.0 - k / dec.beta;
  if (eq.lower < floor - 1e-10)
    throw Error(ErrorKind::VerificationFailed,
                "lambda_min(G, G0) = " + std::to_string(eq.lower) + " below 1 - k/beta = " +
                    std::to_string(floor));
  return eq;
}

/// ‖G^{1/2} e^{t𝒜} G^{−1/2}‖₂ at each time; the certificate claims ≤ e^{−rate·t}.
inline std::vector<double> modified_norm_growth(const Decomposition& dec, const Certificate& cert,
                                                const std::vector<double>& times,
                                                const Propagator& propagator) {
  const GramForm form = build_gram(dec, cert.k);
  const Matrix g_half = hermitian_function(form.G, [](double x) { return std::sqrt(x); });
  const Matrix g_inv_half = hermitian_function(form.G, [](double x) { return 1.0 / std::sqrt(x); });
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(spectral_norm(g_half * propagator.exp(t) * g_inv_half));
  return out;
}

inline std::vector<double> modified_norm_growth(const Decomposition& dec, const Certificate& cert,
                                                const std::vector<double>& times) {
  return modified_norm_growth(dec, cert, times, Propagator(build_block_matrix(dec)));
}

}  // namespace decaycert
