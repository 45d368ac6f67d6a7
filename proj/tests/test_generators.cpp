#include <gtest/gtest.h>

#include <set>

#include "decaycert/decaycert.hpp"

using namespace decaycert;

TEST(CounterRng, FrozenStream) {
  // Reference values: key = f(seed ⊕ 0x6a09e667f3bcc909), draw i (from 1) = f(key + i·0x9e3779b97f4a7c15),
  // f the SplitMix64 finalizer.
  auto f = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xffffffffffffffffULL}) {
    CounterRng rng(seed);
    const std::uint64_t key = f(seed ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t i = 1; i <= 5; ++i) EXPECT_EQ(rng.next_u64(), f(key + i * 0x9e3779b97f4a7c15ULL));
  }
}

TEST(CounterRng, UniformAndNormalMoments) {
  CounterRng rng(7);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z, sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Generators, ScalarRootsAreAccurate) {
  for (auto [a, d] : {std::pair<cplx, cplx>{1.0, 2.0}, {{1, 1}, 2.0}, {1e-8, 1e4}, {{3, -2}, {0.5, 1}}}) {
    const auto sys = gen_scalar(a, d);
    for (cplx r : sys.roots) EXPECT_LE(std::abs(r * r + d * r + a), 1e-12 * (std::abs(r * r) + std::abs(d * r) + std::abs(a)));
    EXPECT_GE(sys.roots[0].real(), sys.roots[1].real());
  }
  EXPECT_THROW(gen_scalar(-1.0, 1.0), Error);
  EXPECT_THROW(gen_scalar(1.0, {0, 1}), Error);
}

TEST(Generators, DampedWave) {
  const auto pair = gen_damped_wave(7, 0.2, 0.5);
  const auto dec = decompose(pair);
  const double h2 = 64.0;
  EXPECT_NEAR(dec.a0, 2.0 * h2 * (1.0 - std::cos(M_PI / 8.0)), 1e-9);
  EXPECT_NEAR(dec.sector_tan, 0.2, 1e-12);
  EXPECT_NEAR(dec.beta, 0.5, 1e-14);
  EXPECT_EQ(dec.D2.norm(), 0.0);
  EXPECT_THROW(gen_damped_wave(0, 0.1, 1.0), Error);
  EXPECT_THROW(gen_damped_wave(3, -0.1, 1.0), Error);
}

TEST(Generators, RandomValidContract) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 9);
    const double st = 0.1 * static_cast<double>(seed % 7), bm = 0.5 + static_cast<double>(seed % 3);
    const auto dec = decompose(gen_random_valid(n, st, bm, seed));
    const auto report = check_assumptions(dec);
    EXPECT_TRUE(report.holds_A && report.holds_B && report.holds_C);
    EXPECT_GE(dec.a0, 1.0 - 1e-10);
    EXPECT_LE(dec.t_norm, 10.0 + 1e-10);
    EXPECT_LE(dec.norm_S, st + 1e-10);
    EXPECT_GE(dec.beta, 1.01 * bm - 1e-10);
    EXPECT_LE(dec.d1_norm, 2.0 * bm + 1.0 + 1e-10);
    EXPECT_LE(spectral_norm(dec.D2), bm / 2.0 + 1e-10);
  }
}

TEST(Generators, SeedsAreReproducibleAndDistinct) {
  const auto a = gen_random_valid(6, 0.5, 1.0, 123);
  const auto b = gen_random_valid(6, 0.5, 1.0, 123);
  const auto c = gen_random_valid(6, 0.5, 1.0, 124);
  EXPECT_EQ((a.A - b.A).norm(), 0.0);
  EXPECT_EQ((a.D - b.D).norm(), 0.0);
  EXPECT_GT((a.A - c.A).norm(), 1e-3);
  EXPECT_THROW(gen_random_valid(0, 0.5, 1.0, 1), Error);
  EXPECT_THROW(gen_random_valid(2, 0.5, 0.0, 1), Error);
}

TEST(Generators, UnitaryAndHermitianHelpers) {
  CounterRng rng(3);
  const Matrix q = random_unitary(rng, 5);
  EXPECT_LE((q.adjoint() * q - Matrix::Identity(5, 5)).norm(), 1e-13);
  const Matrix h = random_hermitian(rng, 5, 2.5);
  EXPECT_EQ((h - h.adjoint()).norm(), 0.0);
  EXPECT_NEAR(hermitian_norm(h), 2.5, 1e-12);
}
