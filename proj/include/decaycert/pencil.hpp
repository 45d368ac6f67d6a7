#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "decaycert/certificate.hpp"

namespace decaycert {

/// Relative eigenvalue distance and eigenvector misalignment below which a cluster is
/// treated as one defective eigenvalue.
inline constexpr double kDefectiveClusterTolerance = 1e-6;

/// Spectrum of L(λ) = λ²I + λD + A obtained from the block matrix 𝒜.
struct SpectrumReport {
  std::vector<cplx> eigenvalues;  // descending real part, ties by ascending imaginary part
  std::vector<double> residuals;  // ‖L(λᵢ)vᵢ‖ / ‖vᵢ‖
  double spectral_abscissa = 0.0;
  std::optional<bool> localized;  // set by verify_localization
  std::optional<double> gap;      // −abscissa − rate
};

inline Matrix pencil_at(const Decomposition& dec, cplx lambda) {
  const Eigen::Index n = dec.n();
  return (lambda * lambda) * Matrix::Identity(n, n) + lambda * dec.pair.D + dec.pair.A;
}

/// The residual scale (|λ|² + |λ|‖D‖ + ‖A‖) a backward-stable solve should respect.
inline double residual_scale(const Decomposition& dec, cplx lambda) {
  const double mag = std::abs(lambda);
  return mag * mag + mag * spectral_norm(dec.pair.D) + spectral_norm(dec.pair.A);
}

inline SpectrumReport pencil_spectrum(const Decomposition& dec) {
  const Eigen::Index n = dec.n();
  Eigen::ComplexEigenSolver<Matrix> solver(build_block_matrix(dec));
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::EigensolverFailure, "eigensolver for the block matrix did not converge");

  std::vector<Eigen::Index> order(2 * n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Vector& values = solver.eigenvalues();
  // A numerically defective cluster (close eigenvalues, nearly parallel eigenvectors) is
  // split by O(√ε) around its true value while its mean stays O(ε)-accurate.
  std::vector<cplx> refined(2 * n);
  for (Eigen::Index i = 0; i < 2 * n; ++i) refined[i] = values(i);
  std::vector<bool> merged(2 * n, false);
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (merged[i]) continue;
    std::vector<Eigen::Index> cluster{i};
    const Vector vi = solver.eigenvectors().col(i).normalized();
    for (Eigen::Index j = i + 1; j < 2 * n; ++j) {
      if (merged[j]) continue;
      const double scale = std::max(1.0, std::abs(values(i)));
      if (std::abs(values(i) - values(j)) > kDefectiveClusterTolerance * scale) continue;
      const double alignment = std::abs(vi.dot(solver.eigenvectors().col(j).normalized()));
      if (alignment >= 1.0 - kDefectiveClusterTolerance) cluster.push_back(j);
    }
    if (cluster.size() < 2) continue;
    cplx mean{0.0, 0.0};
    for (Eigen::Index j : cluster) mean += values(j);
    mean /= static_cast<double>(cluster.size());
    for (Eigen::Index j : cluster) {
      refined[j] = mean;
      merged[j] = true;
    }
  }

  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    if (refined[i].real() != refined[j].real()) return refined[i].real() > refined[j].real();
    return refined[i].imag() < refined[j].imag();
  });

  SpectrumReport report;
  for (Eigen::Index idx : order) {
    const cplx lambda = refined[idx];
    // Companion structure: the eigenvector is (λv, v); the lower half is the pencil eigenvector.
    const Vector v = solver.eigenvectors().col(idx).tail(n);
    report.eigenvalues.push_back(lambda);
    report.residuals.push_back((pencil_at(dec, lambda) * v).norm() / v.norm());
  }
  report.spectral_abscissa = report.eigenvalues.front().real();
  return report;
}

/// True iff the spectral abscissa lies at or left of −rate (within tol); records the gap.
inline bool verify_localization(SpectrumReport& report, const Certificate& cert,
                                double tol = 1e-8) {
  if (!cert.valid) throw Error(ErrorKind::InvalidParams, "certificate is not valid");
  report.gap = -report.spectral_abscissa - cert.rate;
  report.localized = report.spectral_abscissa <= -cert.rate + tol;
  return *report.localized;
}

/// Relative Frobenius discrepancy between (𝒜 − λI)⁻¹ computed by a direct solve
/// and by the block formula built from L(λ)⁻¹. The block formula is naturally
/// written for the ordering (u, u′); it is permuted to the (u′, u) ordering of 𝒜.
inline double resolvent_check(const Decomposition& dec, cplx lambda) {
  if (lambda == cplx{0.0, 0.0})
    throw Error(ErrorKind::InvalidParams, "the block resolvent formula requires lambda != 0");
  const Eigen::Index n = dec.n();
  const Matrix ident = Matrix::Identity(n, n);

  const Eigen::PartialPivLU<Matrix> pencil_lu(pencil_at(dec, lambda));
  const double rcond = pencil_lu.rcond();
  if (!(rcond > 1e-14))
    throw Error(ErrorKind::SingularPencil, "L(lambda) is numerically singular");

  const Matrix shifted = build_block_matrix(dec) - lambda * Matrix::Identity(2 * n, 2 * n);
  const Eigen::PartialPivLU<Matrix> shifted_lu(shifted);
  const Matrix direct = shifted_lu.inverse();

  const Matrix l_inv = pencil_lu.inverse();
  const Matrix l_inv_a = l_inv * dec.pair.A;
  // Blocks in (u, u′) ordering.
  const Matrix uu = (l_inv_a - ident) / lambda;
  const Matrix uv = -l_inv;
  const Matrix vu = l_inv_a;
  const Matrix vv = -lambda * l_inv;

  Matrix formula(2 * n, 2 * n);
  formula.topLeftCorner(n, n) = vv;
  formula.topRightCorner(n, n) = vu;
  formula.bottomLeftCorner(n, n) = uv;
  formula.bottomRightCorner(n, n) = uu;
  return (direct - formula).norm() / direct.norm();
}

}  // namespace decaycert
