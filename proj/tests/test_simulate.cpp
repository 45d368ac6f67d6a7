#include <gtest/gtest.h>

#include <sstream>

#include "decaycert/decaycert.hpp"

using namespace decaycert;

namespace {

Vector scalar_vec(cplx v) { return Vector::Constant(1, v); }

}  // namespace

TEST(Simulate, SingleExponentialMode) {
  // A = 2, D = 3 has roots −1, −2; u₀ = 1, u₁ = −1 excites only e^{−t}.
  const auto dec = decompose(gen_scalar(2.0, 3.0).pair);
  const auto traj = propagate(dec, scalar_vec(1.0), scalar_vec(-1.0), default_time_grid(1.0, 200));
  ASSERT_TRUE(traj.fitted_rate.has_value());
  EXPECT_NEAR(*traj.fitted_rate, 1.0, 1e-6);
  for (std::size_t i = 0; i < traj.times.size(); i += 37)
    EXPECT_NEAR(traj.energies[i], 3.0 * std::exp(-2.0 * traj.times[i]), 1e-12 * 3.0);
}

TEST(Simulate, DefectiveCaseDefaultGrid) {
  // A = 1, D = 2 has the double root −1: E(t) carries a polynomial factor.
  const auto dec = decompose(gen_scalar(1.0, 2.0).pair);
  const auto traj = propagate(dec, scalar_vec(1.0), scalar_vec(0.0), default_time_grid(0.25));
  ASSERT_TRUE(traj.fitted_rate.has_value());
  EXPECT_NEAR(*traj.fitted_rate, 1.0, 2e-2);
}

TEST(Simulate, FitMatchesLeastSquaresOnWindow) {
  // u(t) = (1 + t)e^{−t}, u′(t) = −t e^{−t}: E = ((1 + t)² + t²)e^{−2t}.
  const auto dec = decompose(gen_scalar(1.0, 2.0).pair);
  std::vector<double> times;
  for (int i = 0; i <= 400; ++i) times.push_back(0.1 * i);
  const auto traj = propagate(dec, scalar_vec(1.0), scalar_vec(0.0), times);
  double st = 0, sy = 0, stt = 0, sty = 0;
  int count = 0;
  for (int i = 200; i <= 400; ++i) {
    const double t = 0.1 * i;
    const double y = std::log((1 + t) * (1 + t) + t * t) - 2.0 * t;
    st += t, sy += y, stt += t * t, sty += t * y, ++count;
    EXPECT_NEAR(std::log(traj.energies[i]), y, 1e-9);
  }
  const double slope = (count * sty - st * sy) / (count * stt - st * st);
  ASSERT_TRUE(traj.fitted_rate.has_value());
  EXPECT_NEAR(*traj.fitted_rate, -slope / 2.0, 1e-9);
}

TEST(Simulate, InsufficientDataAndGridErrors) {
  const auto dec = decompose(gen_scalar(2.0, 3.0).pair);
  const auto short_traj = propagate(dec, scalar_vec(1.0), scalar_vec(0.0), {0.0, 0.1, 0.2});
  EXPECT_FALSE(short_traj.fitted_rate.has_value());
  try {
    fit_rate(short_traj);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
  EXPECT_THROW(propagate(dec, scalar_vec(1.0), scalar_vec(0.0), {0.1, 0.2}), Error);
  EXPECT_THROW(propagate(dec, scalar_vec(1.0), scalar_vec(0.0), {0.0, 0.2, 0.2}), Error);
  EXPECT_THROW(propagate(dec, Vector::Ones(2), scalar_vec(0.0), {0.0, 1.0}), Error);
}

TEST(Simulate, EnvelopeHoldsForCertificates) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto dec = decompose(gen_random_valid(4, 0.4, 1.0, seed));
    const Certificate c = optimize_rate(dec, Variant::Theorem1);
    const double constant = verify_norm_equivalence(dec, c.k).energy_constant();
    const auto [u0, u1] = initial_conditions(4, seed);
    const auto traj = propagate(dec, u0, u1, default_time_grid(c.rate));
    EXPECT_TRUE(check_envelope(traj, c, constant));
    EXPECT_TRUE(check_energy_steps(traj, c, constant));
    ASSERT_TRUE(traj.fitted_rate.has_value());
    EXPECT_GE(*traj.fitted_rate, c.rate - 1e-3);
    Certificate forged = c;
    forged.rate = 10.0 * c.rate + 1.0;
    EXPECT_FALSE(check_envelope(traj, forged, 1.0));
  }
}

TEST(Simulate, CsvLayout) {
  const auto dec = decompose(gen_scalar(2.0, 3.0).pair);
  const auto traj = propagate(dec, scalar_vec(1.0), scalar_vec(-1.0), {0.0, 0.5});
  std::ostringstream os;
  write_csv(os, traj);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  EXPECT_EQ(header, "t,E,re_v0,im_v0,re_u0,im_u0");
  std::getline(is, row);
  EXPECT_EQ(row.substr(0, 4), "0,3,");
}

TEST(Simulate, DefectiveFitBiasGrowsWithRootMagnitude) {
  // For a double root at −c the energy carries a t² factor; on the default grid the fitted
  // rate underestimates c by roughly 1/(mean tail time) ≈ c/120 while the horizon 40/rate is
  // below its cap.
  double previous = 0.0;
  for (double c : {1.0, 2.0, 3.0}) {
    const auto dec = decompose(gen_scalar(c * c, 2.0 * c).pair);
    const double rate = optimize_rate(dec, Variant::Theorem1).rate;
    const auto traj = propagate(dec, scalar_vec(1.0), scalar_vec(1.0), default_time_grid(rate));
    ASSERT_TRUE(traj.fitted_rate.has_value());
    const double bias = c - *traj.fitted_rate;
    EXPECT_GT(bias, 0.0);
    EXPECT_NEAR(bias, c / 120.0, 0.3 * c / 120.0) << c;
    EXPECT_GT(bias, previous);
    previous = bias;
  }
}
