#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "decaycert/certificate.hpp"
#include "decaycert/parallel.hpp"

namespace decaycert {

struct SearchConfig {
  int k_points = 64;
  int inner_points = 64;  // grid size for m (Theorem 1) and for each of p, q (Theorem 2)
  double m_min = 1e-6;
  double pq_min = 1e-6;
  double k_lower_fraction = 1e-3;  // k ∈ [β·f, β·(1 − f)]
  int sweeps = 3;
  int golden_iterations = 40;
};

namespace detail {

inline constexpr double kInvalidScore = -std::numeric_limits<double>::infinity();

struct Candidate {
  double score = kInvalidScore;
  double k = 0.0;
  double a = 0.0;  // m or p
  double b = 0.0;  // q (Theorem 2 only)
  Certificate cert;
};

/// Rate first, then larger k, then larger m/p, then larger q.
inline bool better(const Candidate& x, const Candidate& y) {
  if (x.score != y.score) return x.score > y.score;
  if (x.k != y.k) return x.k > y.k;
  if (x.a != y.a) return x.a > y.a;
  return x.b > y.b;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    grid[i] = i + 1 == points ? hi : (i == 0 ? lo : std::exp(llo + (lhi - llo) * i / (points - 1)));
  return grid;
}

inline std::vector<double> linear_grid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return grid;
}

/// Golden-section maximization of f on [lo, hi] with a fixed probe count.
template <typename F>
void golden_maximize(double lo, double hi, int iterations, F&& f) {
  if (!(hi > lo)) return;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
}

inline void validate(const SearchConfig& config) {
  if (config.k_points < 2 || config.inner_points < 2)
    throw Error(ErrorKind::InvalidParams, "search grids need at least two points per axis");
  if (!(config.m_min > 0.0 && config.m_min < 1.0) || !(config.pq_min > 0.0 && config.pq_min < 0.5))
    throw Error(ErrorKind::InvalidParams, "parameter cutoffs out of range");
  if (!(config.k_lower_fraction > 0.0 && config.k_lower_fraction < 0.5))
    throw Error(ErrorKind::InvalidParams, "k_lower_fraction must lie in (0, 0.5)");
}

inline double score_of(const Certificate& cert) { return cert.valid ? cert.rate : kInvalidScore; }

/// Best point of the m-grid at fixed k. ω₁ is nondecreasing in m (the subtracted
/// term is −K/(4m) with K ⪰ 0) while (1 − m)/ω₂ strictly decreases, so the rate is
/// nondecreasing up to the first index where ω₁/2 ≥ (1 − m)/ω₂ and strictly
/// decreasing from there on. Bisection on that predicate finds the same argmax as
/// enumerating the grid.
inline Candidate best_on_m_grid(const Decomposition& dec, double k, const std::vector<double>& ms) {
  const Omega1Kernel kernel(dec, k);
  const double w2 = omega2(dec, k);
  std::vector<std::optional<Candidate>> cache(ms.size());
  auto at = [&](std::size_t j) -> const Candidate& {
    if (!cache[j]) {
      Candidate c;
      c.k = k;
      c.a = ms[j];
      c.cert = assemble_t1(dec, {k, ms[j]}, kernel.evaluate(ms[j]), w2);
      c.score = score_of(c.cert);
      cache[j] = c;
    }
    return *cache[j];
  };
  auto second_term_binds = [&](std::size_t j) {
    const Candidate& c = at(j);
    return c.cert.omega1_value / 2.0 >= (1.0 - ms[j]) / w2;
  };
  std::size_t lo = 0, hi = ms.size();  // first binding index lies in [lo, hi]
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (second_term_binds(mid)) hi = mid;
    else lo = mid + 1;
  }
  Candidate best;
  if (lo > 0 && better(at(lo - 1), best)) best = at(lo - 1);
  if (lo < ms.size() && better(at(lo), best)) best = at(lo);
  return best;
}

inline Certificate optimize_t1(const Decomposition& dec, const SearchConfig& config) {
  require_accretive_damping(dec);
  const double k_lo = dec.beta * config.k_lower_fraction;
  const double k_hi = dec.beta * (1.0 - config.k_lower_fraction);
  const std::vector<double> ks = log_grid(k_lo, k_hi, config.k_points);
  const std::vector<double> ms = linear_grid(config.m_min, 1.0, config.inner_points);

  std::vector<Candidate> per_k(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const double k = ks[i];
    per_k[i] = best_on_m_grid(dec, k, ms);
  });
  Candidate best;
  for (const auto& c : per_k)
    if (better(c, best)) best = c;
  if (best.score == kInvalidScore)
    throw Error(ErrorKind::NoValidCertificate, "no grid point yields omega1 >= 0");

  const double k_ratio = std::pow(k_hi / k_lo, 1.0 / (config.k_points - 1));
  const double m_step = (1.0 - config.m_min) / (config.inner_points - 1);
  auto evaluate = [&](double k, double m) {
    Candidate c;
    c.k = k;
    c.a = m;
    c.cert = make_certificate_t1(dec, {k, m});
    c.score = score_of(c.cert);
    return c;
  };
  auto offer = [&](const Candidate& c) {
    if (better(c, best)) best = c;
    return c.score;
  };
  for (int sweep = 0; sweep < config.sweeps; ++sweep) {
    const double m_fixed = best.a;
    golden_maximize(
        std::log(std::max(k_lo, best.k / k_ratio)), std::log(std::min(k_hi, best.k * k_ratio)),
        config.golden_iterations, [&](double lk) { return offer(evaluate(std::exp(lk), m_fixed)); });
    const double k_fixed = best.k;
    const Omega1Kernel kernel(dec, k_fixed);
    const double w2 = omega2(dec, k_fixed);
    auto eval_m = [&](double m) {
      Candidate c;
      c.k = k_fixed;
      c.a = m;
      c.cert = assemble_t1(dec, {k_fixed, m}, kernel.evaluate(m), w2);
      c.score = score_of(c.cert);
      return c;
    };
    golden_maximize(
        std::max(config.m_min, best.a - m_step), std::min(1.0, best.a + m_step),
        config.golden_iterations, [&](double m) { return offer(eval_m(m)); });
  }
  return best.cert;
}

inline Certificate optimize_t2(const Decomposition& dec, const SearchConfig& config) {
  if (!dec.holds_C())
    throw Error(ErrorKind::AssumptionCViolated,
                "delta = " + std::to_string(dec.delta) + " is not positive");
  const double k_lo = dec.beta * config.k_lower_fraction;
  const double k_hi = dec.beta * (1.0 - config.k_lower_fraction);
  const std::vector<double> ks = log_grid(k_lo, k_hi, config.k_points);
  const std::vector<double> ps = linear_grid(config.pq_min, 1.0, config.inner_points);

  auto make = [&](double k, double p, double q, double w2) {
    Candidate c;
    c.k = k;
    c.a = p;
    c.b = q;
    if (p + q > 1.0) return c;
    const Theorem2Params params{k, p, q};
    c.cert = assemble_t2(dec, params, omega1_prime(dec, params), w2);
    c.score = score_of(c.cert);
    return c;
  };

  std::vector<Candidate> per_k(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const double k = ks[i];
    const double w2 = omega2(dec, k);
    Candidate best;
    for (double p : ps)
      for (double q : ps) {
        const Candidate c = make(k, p, q, w2);
        if (better(c, best)) best = c;
      }
    per_k[i] = best;
  });
  Candidate best;
  for (const auto& c : per_k)
    if (better(c, best)) best = c;
  if (best.score == kInvalidScore)
    throw Error(ErrorKind::NoValidCertificate, "no grid point yields omega1' >= 1");

  const double k_ratio = std::pow(k_hi / k_lo, 1.0 / (config.k_points - 1));
  const double step = (1.0 - config.pq_min) / (config.inner_points - 1);
  auto offer = [&](const Candidate& c) {
    if (better(c, best)) best = c;
    return c.score;
  };
  for (int sweep = 0; sweep < config.sweeps; ++sweep) {
    {
      const double p = best.a, q = best.b;
      auto eval_k = [&](double lk) {
        const double k = std::exp(lk);
        return make(k, p, q, omega2(dec, k));
      };
      golden_maximize(
          std::log(std::max(k_lo, best.k / k_ratio)), std::log(std::min(k_hi, best.k * k_ratio)),
          config.golden_iterations, [&](double lk) { return offer(eval_k(lk)); });
    }
    const double k = best.k;
    const double w2 = omega2(dec, k);
    {
      const double q = best.b;
      golden_maximize(
          std::max(config.pq_min, best.a - step), std::min(1.0 - q, best.a + step),
          config.golden_iterations, [&](double p) { return offer(make(k, p, q, w2)); });
    }
    {
      const double p = best.a;
      golden_maximize(
          std::max(config.pq_min, best.b - step), std::min(1.0 - p, best.b + step),
          config.golden_iterations, [&](double q) { return offer(make(k, p, q, w2)); });
    }
  }
  return best.cert;
}

}  // namespace detail

/// Best certified rate over the free parameters: a fixed grid (logarithmic in k,
/// linear in m or p, q) followed by coordinate-wise golden-section sweeps around
/// the incumbent. Deterministic for a given configuration.
inline Certificate optimize_rate(const Decomposition& dec, Variant variant,
                                 const SearchConfig& config = {}) {
  detail::validate(config);
  return variant == Variant::Theorem1 ? detail::optimize_t1(dec, config)
                                      : detail::optimize_t2(dec, config);
}

}  // namespace decaycert
