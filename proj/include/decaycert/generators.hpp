#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "decaycert/decomposition.hpp"

namespace decaycert {

/// Counter-based stream: the i-th draw is splitmix64(key + i·φ64) with
/// key = splitmix64(seed). Draws depend only on (seed, i), never on platform state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box–Muller (one draw per call; the partner is discarded).
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  cplx complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline Matrix random_complex_matrix(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

inline Vector random_complex_vector(CounterRng& rng, Eigen::Index n) {
  return random_complex_matrix(rng, n, 1).col(0);
}

inline Matrix random_unitary(CounterRng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_complex_matrix(rng, n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Random Hermitian matrix with spectral norm exactly `norm` (zero when norm = 0).
inline Matrix random_hermitian(CounterRng& rng, Eigen::Index n, double norm) {
  const Matrix h = hermitian_part(random_complex_matrix(rng, n, n));
  const double current = hermitian_norm(h);
  if (norm == 0.0 || current == 0.0) return Matrix::Zero(n, n);
  return hermitize(h * (norm / current));
}

/// Hermitian matrix with eigenvalues drawn uniformly from [lo, hi].
inline Matrix random_hermitian_spectrum(CounterRng& rng, Eigen::Index n, double lo, double hi,
                                        RealVector* eigenvalues = nullptr, Matrix* basis = nullptr) {
  const Matrix q = random_unitary(rng, n);
  RealVector lam(n);
  for (Eigen::Index i = 0; i < n; ++i) lam(i) = rng.uniform(lo, hi);
  if (eigenvalues) *eigenvalues = lam;
  if (basis) *basis = q;
  return hermitize(q * lam.cast<cplx>().asDiagonal() * q.adjoint());
}

struct ScalarSystem {
  OperatorPair pair;
  std::array<cplx, 2> roots;  // roots of λ² + dλ + a, larger real part first
};

/// n = 1 system with closed-form pencil roots (−d ± √(d² − 4a))/2.
inline ScalarSystem gen_scalar(cplx a, cplx d) {
  if (!(a.real() > 0.0) || !(d.real() > 0.0))
    throw Error(ErrorKind::InvalidParams, "scalar generator needs Re a > 0 and Re d > 0");
  if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(d)))
    throw Error(ErrorKind::InvalidParams, "scalar generator needs finite coefficients");
  ScalarSystem sys;
  sys.pair.A = Matrix::Constant(1, 1, a);
  sys.pair.D = Matrix::Constant(1, 1, d);
  // Cancellation-free pair: r₁ = −(d + s)/2 with the sign of s aligned to d, r₂ = a / r₁.
  cplx s = std::sqrt(d * d - 4.0 * a);
  if ((std::conj(d) * s).real() < 0.0) s = -s;
  const cplx r1 = -(d + s) / 2.0;
  const cplx r2 = a / r1;
  if (r1.real() > r2.real() || (r1.real() == r2.real() && r1.imag() <= r2.imag()))
    sys.roots = {r1, r2};
  else
    sys.roots = {r2, r1};
  return sys;
}

/// Dirichlet second-difference matrix (n+1)²·tridiag(−1, 2, −1) on n interior points of (0, 1).
inline Matrix dirichlet_laplacian(Eigen::Index n) {
  const double h2 = static_cast<double>((n + 1) * (n + 1));
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    l(i, i) = 2.0 * h2;
    if (i + 1 < n) {
      l(i, i + 1) = -h2;
      l(i + 1, i) = -h2;
    }
  }
  return l;
}

/// Damped string with a viscoelastic loss tangent: A = (1 + iγ)L, D = d·I.
inline OperatorPair gen_damped_wave(Eigen::Index n, double gamma, double d) {
  if (n < 1 || !(gamma >= 0.0) || !(d > 0.0) || !std::isfinite(gamma) || !std::isfinite(d))
    throw Error(ErrorKind::InvalidParams, "damped wave needs n >= 1, gamma >= 0, d > 0");
  const Matrix l = dirichlet_laplacian(n);
  return {cplx{1.0, gamma} * l, d * Matrix::Identity(n, n)};
}

/// Random pair satisfying (A) and (B):
///   T = Q diag(λ) Qᴴ, λ ~ U[1, 10];  S Hermitian, ‖S‖ = sector_tan_max·U(0, 1];
///   A = T^{1/2}(I + iS)T^{1/2};
///   D₁ with spectrum ~ U[1.01·beta_min, 2·beta_min + 1];  D₂ Hermitian, ‖D₂‖ = beta_min·U(0, 1]/2;
///   D = D₁ + iD₂.
inline OperatorPair gen_random_valid(Eigen::Index n, double sector_tan_max, double beta_min,
                                     std::uint64_t seed) {
  if (n < 1 || !(sector_tan_max >= 0.0) || !(beta_min > 0.0))
    throw Error(ErrorKind::InvalidParams,
                "random generator needs n >= 1, sector_tan_max >= 0, beta_min > 0");
  CounterRng rng(seed);
  RealVector t_vals;
  Matrix t_basis;
  random_hermitian_spectrum(rng, n, 1.0, 10.0, &t_vals, &t_basis);
  const Matrix t_sqrt =
      hermitize(t_basis * t_vals.cwiseSqrt().cast<cplx>().asDiagonal() * t_basis.adjoint());
  const double s_norm = sector_tan_max * (1.0 - rng.uniform());
  const Matrix s = random_hermitian(rng, n, s_norm);
  const Matrix ident = Matrix::Identity(n, n);

  OperatorPair pair;
  pair.A = t_sqrt * (ident + kI * s) * t_sqrt;
  const Matrix d1 = random_hermitian_spectrum(rng, n, 1.01 * beta_min, 2.0 * beta_min + 1.0);
  const Matrix d2 = random_hermitian(rng, n, beta_min * (1.0 - rng.uniform()) / 2.0);
  pair.D = d1 + kI * d2;
  return pair;
}

}  // namespace decaycert
