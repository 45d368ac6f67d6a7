#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "decaycert/certificate.hpp"

namespace decaycert {

/// Energies at or below this value no longer carry meaningful rate information.
inline constexpr double kEnergyFloor = 1e-300;

/// Sampled solution x(t) = (u′(t), u(t)) with energy E = ‖u′‖² + uᴴTu.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> energies;
  std::optional<double> fitted_rate;
};

inline double energy(const Decomposition& dec, const Vector& state) {
  const Eigen::Index n = dec.n();
  const Vector v = state.head(n);
  const Vector u = state.tail(n);
  return v.squaredNorm() + std::max(0.0, u.dot(dec.T * u).real());
}

/// 400 points on [0, min(40/rate, 200)].
inline std::vector<double> default_time_grid(double rate, int points = 400) {
  const double horizon = rate > 0.0 ? std::min(40.0 / rate, 200.0) : 200.0;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = i + 1 == points ? horizon : horizon * static_cast<double>(i) / (points - 1);
  return grid;
}

/// Least-squares slope of log E over the last tail_fraction of the samples above the
/// energy floor, returned as −slope/2 (the decay rate of the state norm).
inline double fit_rate(const Trajectory& traj, double tail_fraction = 0.5) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw Error(ErrorKind::InvalidParams, "tail_fraction must lie in (0, 1]");
  std::size_t usable = 0;
  while (usable < traj.energies.size() && traj.energies[usable] > kEnergyFloor &&
         std::isfinite(traj.energies[usable]))
    ++usable;
  const auto window = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(usable)));
  if (window < 10)
    throw Error(ErrorKind::InsufficientData,
                "only " + std::to_string(window) + " samples above the energy floor in the tail");
  const std::size_t first = usable - window;
  double mean_t = 0.0, mean_y = 0.0;
  for (std::size_t i = first; i < usable; ++i) {
    mean_t += traj.times[i];
    mean_y += std::log(traj.energies[i]);
  }
  mean_t /= static_cast<double>(window);
  mean_y /= static_cast<double>(window);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = first; i < usable; ++i) {
    const double dt = traj.times[i] - mean_t;
    sxy += dt * (std::log(traj.energies[i]) - mean_y);
    sxx += dt * dt;
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::InsufficientData, "tail window has no time spread");
  return -(sxy / sxx) / 2.0;
}

inline void validate_time_grid(const std::vector<double>& times) {
  if (times.empty() || times.front() != 0.0)
    throw Error(ErrorKind::InvalidParams, "time grid must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw Error(ErrorKind::InvalidParams, "time grid must be strictly increasing");
}

/// x(tᵢ) = e^{tᵢ𝒜}(u₁, u₀), each sample evaluated directly from the exponential.
inline Trajectory propagate(const Decomposition& dec, const Propagator& propagator,
                            const Vector& u0, const Vector& u1, const std::vector<double>& times,
                            double tail_fraction = 0.5) {
  const Eigen::Index n = dec.n();
  if (u0.size() != n || u1.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "initial data must have dimension n");
  validate_time_grid(times);
  Vector x0(2 * n);
  x0 << u1, u0;
  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  traj.energies.reserve(times.size());
  for (double t : times) {
    Vector x = t == 0.0 ? x0 : propagator.apply(t, x0);
    traj.energies.push_back(energy(dec, x));
    traj.states.push_back(std::move(x));
  }
  try {
    traj.fitted_rate = fit_rate(traj, tail_fraction);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
  }
  return traj;
}

inline Trajectory propagate(const Decomposition& dec, const Vector& u0, const Vector& u1,
                            const std::vector<double>& times) {
  return propagate(dec, Propagator(build_block_matrix(dec)), u0, u1, times);
}

/// E(tᵢ) ≤ C·e^{−2·rate·tᵢ}·E(0) at every sample. The 1e−12 relative slack only
/// absorbs rounding at t = 0 when C = 1.
inline bool check_envelope(const Trajectory& traj, const Certificate& cert, double constant) {
  if (!cert.valid) throw Error(ErrorKind::InvalidParams, "certificate is not valid");
  const double e0 = traj.energies.front();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double bound = constant * std::exp(-2.0 * cert.rate * traj.times[i]) * e0;
    if (traj.energies[i] > bound * (1.0 + 1e-12)) return false;
  }
  return true;
}

/// Discrete-step form of the same statement: E(tᵢ₊₁) ≤ C e^{−2·rate·Δt} E(tᵢ)(1 + 1e−6).
inline bool check_energy_steps(const Trajectory& traj, const Certificate& cert, double constant) {
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    if (traj.energies[i] <= kEnergyFloor) break;
    const double dt = traj.times[i + 1] - traj.times[i];
    const double bound = constant * std::exp(-2.0 * cert.rate * dt) * traj.energies[i] * (1.0 + 1e-6);
    if (traj.energies[i + 1] > bound) return false;
  }
  return true;
}

namespace detail {

inline void append_double(std::string& out, double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);
}

}  // namespace detail

/// CSV with header t,E,re_v0,im_v0,...,re_u0,im_u0,... (v = u′). Values use the
/// shortest decimal form that round-trips to the same double.
inline void write_csv(std::ostream& os, const Trajectory& traj) {
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size() / 2;
  std::string line = "t,E";
  for (const char* prefix : {"v", "u"})
    for (Eigen::Index i = 0; i < n; ++i) {
      line += ",re_" + std::string(prefix) + std::to_string(i);
      line += ",im_" + std::string(prefix) + std::to_string(i);
    }
  os << line << '\n';
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    line.clear();
    detail::append_double(line, traj.times[s]);
    line += ',';
    detail::append_double(line, traj.energies[s]);
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
      line += ',';
      detail::append_double(line, traj.states[s](i).real());
      line += ',';
      detail::append_double(line, traj.states[s](i).imag());
    }
    os << line << '\n';
  }
}

}  // namespace decaycert
