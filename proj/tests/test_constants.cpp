#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "decaycert/decaycert.hpp"
#include "oracles.hpp"

using namespace decaycert;

namespace {

Decomposition scalar(cplx a, cplx d) { return decompose(gen_scalar(a, d).pair); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST(Omega1, ScalarClosedForms) {
  EXPECT_NEAR(omega1(scalar(1.0, 2.0), {1.0, 0.5}), 1.0, 1e-14);
  EXPECT_NEAR(omega1(scalar({1, 1}, 2.0), {1.0, 1.0}), 0.75, 1e-14);
}

TEST(Omega1, VanishesAsKApproachesDampingLevel) {
  // A = 1, D = c: ω₁ = c/k − 1, which tends to 0 as k → β = c. k = β itself is excluded.
  const auto dec = scalar(1.0, 1.5);
  EXPECT_NEAR(omega1(dec, {1.5 * (1 - 1e-12), 0.3}), 0.0, 1e-10);
  EXPECT_EQ(kind_of([&] { omega1(dec, {1.5, 0.3}); }), ErrorKind::InvalidParams);
}

TEST(Omega1, ParameterValidation) {
  const auto dec = scalar(1.0, 2.0);
  EXPECT_EQ(kind_of([&] { omega1(dec, {0.0, 0.5}); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { omega1(dec, {2.5, 0.5}); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { omega1(dec, {1.0, 0.0}); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { omega1(dec, {1.0, 1.5}); }), ErrorKind::InvalidParams);
}

TEST(Omega2, ScalarClosedForms) {
  const auto dec = scalar(1.0, 2.0);
  EXPECT_NEAR(omega2(dec, 1.0), 4.0, 1e-14);
  EXPECT_NEAR(omega2(dec, 0.5), 2.25, 1e-14);
  EXPECT_NEAR(omega2(dec, 1e-9), 1.0, 1e-8);
  EXPECT_EQ(kind_of([&] { omega2(dec, 0.0); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { omega2(dec, -1.0); }), ErrorKind::InvalidParams);
}

TEST(Omega2, MatchesIndependentGeneralizedSolver) {
  const auto dec = decompose(gen_random_valid(6, 0.5, 1.0, 4));
  const double k = 0.7;
  const Matrix num = dec.T + k * dec.D1 + k * k * Matrix::Identity(6, 6);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(num, dec.T, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(omega2(dec, k), ges.eigenvalues().maxCoeff(), 1e-10);
}

TEST(Omega1Prime, ScalarClosedForms) {
  EXPECT_NEAR(omega1_prime(scalar(1.0, 2.0), {1.0, 0.5, 0.5}), 2.0, 1e-14);
  EXPECT_NEAR(omega1_prime(scalar({1, 1}, 2.0), {1.0, 0.5, 0.5}), 1.5, 1e-14);
  // δ/k = 2 is cancelled exactly by ‖S̃‖²/(4pk²) = 4/2 when A = 1 + 2i.
  EXPECT_NEAR(omega1_prime(scalar({1, 2}, 2.0), {1.0, 0.5, 0.5}), 0.0, 1e-14);
}

TEST(Omega1Prime, Errors) {
  const auto dec = scalar(1.0, 2.0);
  EXPECT_EQ(kind_of([&] { omega1_prime(dec, {1.0, 0.6, 0.5}); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { omega1_prime(dec, {1.0, 0.0, 0.5}); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { omega1_prime(dec, {3.0, 0.5, 0.5}); }), ErrorKind::InvalidParams);
  const cplx i{0, 1};
  Matrix skew(2, 2);
  skew << i, 1.0, -1.0, 0.0;
  const auto no_c = decompose({Matrix::Identity(2, 2), skew});
  EXPECT_EQ(kind_of([&] { omega1_prime(no_c, {0.5, 0.5, 0.5}); }), ErrorKind::AssumptionCViolated);
}

TEST(ConstantsProperties, MonotoneBoundedAndSampled) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 4);
    const auto dec = decompose(gen_random_valid(n, 0.6, 1.0 + seed % 3, seed));
    for (double frac : {0.1, 0.4, 0.8}) {
      const double k = frac * dec.beta;
      double previous = -std::numeric_limits<double>::infinity();
      for (double m : {0.01, 0.05, 0.2, 0.5, 0.9, 1.0}) {
        const double w1 = omega1(dec, {k, m});
        EXPECT_GE(w1, previous - 1e-12);
        previous = w1;
      }
      const double w2 = omega2(dec, k);
      EXPECT_GE(w2, 1.0 - 1e-12);
      EXPECT_LE(w2, 1.0 + k * dec.norm_D1_dual + k * k / dec.a0 + 1e-8);

      const double m = 0.3;
      const double w1 = omega1(dec, {k, m});
      const double sampled = oracle::sampled_unit_minimum(
          n, 10000, seed * 31, [&](const Vector& x) { return oracle::omega1_quotient(dec, k, m, x); });
      EXPECT_LE(w1, sampled + 1e-6);
      const Omega1Kernel kernel(dec, k);
      Eigen::SelfAdjointEigenSolver<Matrix> es(kernel.quotient_matrix(m));
      EXPECT_NEAR(oracle::omega1_quotient(dec, k, m, es.eigenvectors().col(0)), w1, 1e-10);
      EXPECT_TRUE(std::isfinite(omega1_unsquared_probe(dec, {k, m})));
    }
  }
}

TEST(ConstantsProperties, SelfAdjointCaseIndependentOfM) {
  const OperatorPair random = gen_random_valid(4, 0.0, 1.0, 5);
  const OperatorPair pair{hermitian_part(random.A), hermitian_part(random.D)};
  const auto dec = decompose(pair);
  ASSERT_EQ(dec.S_tilde.norm(), 0.0);
  ASSERT_EQ(dec.D2.norm(), 0.0);
  const double k = 0.5 * dec.beta;
  const double base = omega1(dec, {k, 0.01});
  EXPECT_EQ(omega1(dec, {k, 0.5}), base);
  EXPECT_EQ(omega1(dec, {k, 1.0}), base);
}

TEST(Omega2Bounds, BothReportedConstants) {
  const auto dec = scalar(1.0, 2.0);
  const auto b = omega2_bounds(dec, 1.0);
  EXPECT_NEAR(b.k_squared, 1.0 + 2.0 + 1.0, 1e-14);
  EXPECT_NEAR(b.k_beta, 1.0 + 2.0 + 2.0, 1e-14);
}
