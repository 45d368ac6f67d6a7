#include <gtest/gtest.h>

#include "decaycert/decaycert.hpp"
#include "oracles.hpp"

using namespace decaycert;

TEST(Spectrum, ScalarRootsAndResiduals) {
  const auto sys = gen_scalar({1, 1}, 2.0);
  const auto spec = pencil_spectrum(decompose(sys.pair));
  ASSERT_EQ(spec.eigenvalues.size(), 2u);
  EXPECT_LT(std::abs(spec.eigenvalues[0] - sys.roots[0]), 1e-12);
  EXPECT_LT(std::abs(spec.eigenvalues[1] - sys.roots[1]), 1e-12);
  for (double r : spec.residuals) EXPECT_LT(r, 1e-12);
}

TEST(Spectrum, WorkedAbscissa) {
  // λ² + 2λ + (1 + i) = 0 has roots −1 ± √(−i); the abscissa is −1 + 1/√2.
  const auto spec = pencil_spectrum(decompose(gen_scalar({1, 1}, 2.0).pair));
  EXPECT_NEAR(spec.spectral_abscissa, -1.0 + 1.0 / std::sqrt(2.0), 1e-10);
}

TEST(Spectrum, OrderingConvention) {
  const auto spec = pencil_spectrum(decompose(gen_random_valid(5, 0.5, 1.0, 2)));
  for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i) {
    const cplx a = spec.eigenvalues[i - 1], b = spec.eigenvalues[i];
    EXPECT_TRUE(a.real() > b.real() || (a.real() == b.real() && a.imag() <= b.imag()));
  }
}

TEST(Spectrum, MatchesDeterminantPolynomial) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 3);
    const auto pair = gen_random_valid(n, 0.5, 1.0, seed);
    const auto spec = pencil_spectrum(decompose(pair));
    const auto roots = oracle::polynomial_roots(oracle::det_pencil_polynomial(pair.A, pair.D));
    EXPECT_LE(oracle::hausdorff(spec.eigenvalues, roots), 1e-6) << seed;
  }
}

TEST(Spectrum, LocalizationUsesCertificate) {
  const auto dec = decompose(gen_random_valid(6, 0.4, 1.0, 5));
  auto spec = pencil_spectrum(dec);
  const Certificate c = optimize_rate(dec, Variant::Theorem1);
  EXPECT_TRUE(verify_localization(spec, c));
  EXPECT_GE(*spec.gap, -1e-8);
  Certificate forged = c;
  forged.rate = -spec.spectral_abscissa + 1.0;
  EXPECT_FALSE(verify_localization(spec, forged));
}

TEST(Resolvent, ScalarClosedForm) {
  // A = 1, D = 2, λ = 1: (𝒜 − I)⁻¹ = [[−1/4, 1/4], [−1/4, −3/4]] in (u′, u) ordering.
  const auto dec = decompose(gen_scalar(1.0, 2.0).pair);
  EXPECT_LT(resolvent_check(dec, 1.0), 1e-14);
  const Matrix shifted = build_block_matrix(dec) - Matrix::Identity(2, 2);
  Matrix expected(2, 2);
  expected << -0.25, 0.25, -0.25, -0.75;
  EXPECT_LT((shifted.inverse() - expected).norm(), 1e-15);
}

TEST(Resolvent, RandomPointsAndErrors) {
  const auto dec = decompose(gen_random_valid(5, 0.5, 1.0, 6));
  for (cplx lambda : {cplx{1, 0}, cplx{-0.1, 3}, cplx{2, -1}, cplx{0.5, 0.5}})
    EXPECT_LT(resolvent_check(dec, lambda), 1e-10);
  EXPECT_THROW(resolvent_check(dec, 0.0), Error);
  const auto spec = pencil_spectrum(dec);
  try {
    resolvent_check(dec, spec.eigenvalues.front());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularPencil);
  }
}

TEST(Spectrum, DefectiveDoubleRootsToRoundoff) {
  for (cplx c : {cplx{1, 0}, cplx{1, 0.5}, cplx{2, -1}, cplx{0.75, 0.25}, cplx{3, 2}}) {
    const auto spec = pencil_spectrum(decompose(gen_scalar(c * c, 2.0 * c).pair));
    for (cplx z : spec.eigenvalues) EXPECT_LT(std::abs(z + c), 1e-13 * std::abs(c)) << c;
  }
}

TEST(Spectrum, CloseButWellConditionedPairsStaySplit) {
  // Diagonal system with eigenvalue pairs 1e-9 apart: eigenvectors are orthogonal, no merge.
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 2.0 + 3e-9;
  const auto spec = pencil_spectrum(decompose({a, 3.0 * Matrix::Identity(2, 2)}));
  const auto roots = oracle::polynomial_roots(oracle::det_pencil_polynomial(a, 3.0 * Matrix::Identity(2, 2)));
  std::vector<cplx> exact;
  for (double aa : {2.0, 2.0 + 3e-9}) {
    const auto sys = gen_scalar(aa, 3.0);
    exact.push_back(sys.roots[0]);
    exact.push_back(sys.roots[1]);
  }
  EXPECT_LT(oracle::hausdorff(spec.eigenvalues, exact), 1e-14);
}
