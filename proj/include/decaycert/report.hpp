#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decaycert/generators.hpp"
#include "decaycert/optimize.hpp"
#include "decaycert/pencil.hpp"
#include "decaycert/simulate.hpp"

namespace decaycert {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolName = "decaycert";
inline constexpr const char* kToolVersion = "1.0.0";

/// Sample times for the modified-norm contraction check.
inline const std::vector<double>& contraction_times() {
  static const std::vector<double> times{0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  return times;
}

enum class Command { Decompose, Certify, Spectrum, Simulate, Check };

enum class VariantSelection { T1, T2, Both };

struct RunOptions {
  VariantSelection variants = VariantSelection::Both;
  std::optional<double> k, m, p, q;  // pinned parameters skip optimization
  SearchConfig search;
  double tol = 1e-8;
  std::uint64_t init_seed = 0;
  int samples = 400;
};

struct RunResult {
  json report;
  int exit_code = 0;
  std::optional<Trajectory> trajectory;
};

inline json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline json error_json(ErrorKind kind, const std::string& message) {
  return json{{"kind", std::string(to_string(kind))}, {"message", message}};
}

/// Exit code for a failure: 1 for unusable input, 2 for systems that cannot be certified.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidInput:
    case ErrorKind::DimensionMismatch: return 1;
    default: return 2;
  }
}

inline json to_json(const AssumptionReport& r) {
  return json{{"holds_A", r.holds_A}, {"holds_B", r.holds_B}, {"holds_C", r.holds_C},
              {"a0", r.a0},           {"beta", r.beta},       {"delta", r.delta},
              {"sector_tan", r.sector_tan}};
}

inline json decomposition_summary(const Decomposition& dec) {
  return json{{"n", dec.n()},
              {"a0", dec.a0},
              {"beta", dec.beta},
              {"delta", dec.delta},
              {"sector_tan", dec.sector_tan},
              {"norm_S", dec.norm_S},
              {"norm_D1_dual", dec.norm_D1_dual},
              {"norm_D2_dual", dec.norm_D2_dual},
              {"norm_T", dec.t_norm}};
}

inline json to_json(const Decomposition& dec, const Certificate& c) {
  json j{{"variant", std::string(to_string(c.variant))},
         {"k", c.k},
         {"omega1", c.omega1_value},
         {"omega2", c.omega2_value},
         {"theta", c.theta},
         {"rate", c.rate},
         {"valid", c.valid},
         {"equivalence_lower", c.equivalence_lower},
         {"equivalence_upper", c.equivalence_upper}};
  const Omega2Bounds bounds = omega2_bounds(dec, c.k);
  j["omega2_bound_k_squared"] = bounds.k_squared;
  j["omega2_bound_k_beta"] = bounds.k_beta;
  if (c.variant == Variant::Theorem1) {
    j["m"] = c.m;
    j["omega1_unsquared_probe"] = omega1_unsquared_probe(dec, {c.k, c.m});
  } else {
    j["p"] = c.p;
    j["q"] = c.q;
  }
  return j;
}

/// Random initial data (u₀, u₁), each of unit Euclidean norm.
inline std::pair<Vector, Vector> initial_conditions(Eigen::Index n, std::uint64_t seed) {
  CounterRng rng(seed ^ 0x5bd1e9955bd1e995ULL);
  Vector u0 = random_complex_vector(rng, n);
  Vector u1 = random_complex_vector(rng, n);
  return {u0.normalized(), u1.normalized()};
}

namespace detail {

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline bool wants(VariantSelection sel, Variant v) {
  return sel == VariantSelection::Both || (sel == VariantSelection::T1) == (v == Variant::Theorem1);
}

inline Certificate obtain_certificate(const Decomposition& dec, Variant v, const RunOptions& opt) {
  if (opt.k) {
    if (v == Variant::Theorem1) {
      if (!opt.m) throw Error(ErrorKind::InvalidInput, "--k with variant t1 also needs --m");
      return make_certificate_t1(dec, {*opt.k, *opt.m});
    }
    if (!opt.p || !opt.q) throw Error(ErrorKind::InvalidInput, "--k with variant t2 also needs --p and --q");
    return make_certificate_t2(dec, {*opt.k, *opt.p, *opt.q});
  }
  return optimize_rate(dec, v, opt.search);
}

}  // namespace detail

/// Runs one command on an operator pair and assembles the versioned report.
/// Report keys are emitted in sorted order and only the "timings" object varies
/// between identical runs.
inline RunResult run(Command command, const OperatorPair& pair, const json& input,
                     const RunOptions& opt) {
  RunResult result;
  json& rep = result.report;
  rep["schema_version"] = kSchemaVersion;
  rep["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  static const char* names[] = {"decompose", "certify", "spectrum", "simulate", "check"};
  rep["command"] = names[static_cast<int>(command)];
  rep["input"] = input;
  rep["errors"] = json::array();
  rep["timings"] = json::object();
  detail::Stopwatch clock;
  bool pass = true;
  int exit_code = 0;
  auto fail = [&](ErrorKind kind, const std::string& message, const std::string& where) {
    json e = error_json(kind, message);
    e["stage"] = where;
    rep["errors"].push_back(e);
    pass = false;
    exit_code = std::max(exit_code, exit_code_for(kind));
  };
  auto finish = [&]() {
    rep["status"] = pass ? "pass" : "fail";
    rep["exit_code"] = exit_code;
    result.exit_code = exit_code;
    return result;
  };

  std::optional<Decomposition> dec;
  try {
    dec = decompose(pair);
    rep["assumptions"] = to_json(check_assumptions(*dec));
    rep["decomposition"] = decomposition_summary(*dec);
  } catch (const Error& e) {
    fail(e.kind(), e.what(), "decompose");
    return finish();
  }
  rep["timings"]["decompose_ms"] = clock.lap_ms();
  if (command == Command::Decompose) return finish();

  // Certificates for the requested variants. With "both", Theorem 2 is skipped
  // (not failed) when assumption (C) does not hold.
  struct Entry {
    Certificate cert;
    bool verified = true;
  };
  std::vector<Entry> certs;
  rep["certificates"] = json::object();
  for (Variant v : {Variant::Theorem1, Variant::Theorem2}) {
    if (!detail::wants(opt.variants, v)) continue;
    const std::string key(to_string(v));
    if (v == Variant::Theorem2 && opt.variants == VariantSelection::Both && !dec->holds_C()) {
      rep["certificates"][key] = {{"skipped", "assumption (C) does not hold"}};
      continue;
    }
    try {
      const Certificate cert = detail::obtain_certificate(*dec, v, opt);
      json cj = to_json(*dec, cert);
      Entry entry{cert, cert.valid};
      if (cert.valid) {
        json ver;
        try {
          const VerificationResult acc = verify_accretivity(*dec, cert, opt.tol);
          ver["accretivity"] = {{"lambda_max", acc.lambda_max}, {"margin", acc.margin}, {"passed", true}};
        } catch (const Error& e) {
          ver["accretivity"] = {{"passed", false}, {"error", e.what()}};
          entry.verified = false;
        }
        try {
          const NormEquivalence eq = verify_norm_equivalence(*dec, cert.k);
          ver["norm_equivalence"] = {{"lower", eq.lower},
                                     {"upper", eq.upper},
                                     {"floor", 1.0 - cert.k / dec->beta},
                                     {"energy_constant", eq.energy_constant()},
                                     {"passed", true}};
        } catch (const Error& e) {
          ver["norm_equivalence"] = {{"passed", false}, {"error", e.what()}};
          entry.verified = false;
        }
        cj["verification"] = ver;
      }
      if (!entry.verified) fail(ErrorKind::VerificationFailed, "certificate verification failed", key);
      if (!cert.valid) fail(ErrorKind::NoValidCertificate, "pinned parameters give an invalid certificate", key);
      rep["certificates"][key] = cj;
      certs.push_back(entry);
    } catch (const Error& e) {
      rep["certificates"][key] = {{"error", error_json(e.kind(), e.what())}};
      fail(e.kind(), e.what(), key);
    }
  }
  rep["timings"]["certify_ms"] = clock.lap_ms();

  const Entry* best = nullptr;
  for (const auto& e : certs)
    if (e.cert.valid && (!best || e.cert.rate > best->cert.rate)) best = &e;
  if (best) rep["best_variant"] = std::string(to_string(best->cert.variant));
  if (command == Command::Certify) return finish();

  if (!best) {
    if (pass) fail(ErrorKind::NoValidCertificate, "no valid certificate to check against", "certify");
    return finish();
  }
  const Certificate& cert = best->cert;

  if (command == Command::Spectrum || command == Command::Check) {
    try {
      SpectrumReport spec = pencil_spectrum(*dec);
      const bool localized = verify_localization(spec, cert, opt.tol);
      json eig = json::array();
      for (cplx z : spec.eigenvalues) eig.push_back(to_json(z));
      double max_rel_residual = 0.0;
      for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
        max_rel_residual = std::max(max_rel_residual,
                                    spec.residuals[i] / residual_scale(*dec, spec.eigenvalues[i]));
      rep["spectrum"] = {{"eigenvalues", eig},
                         {"spectral_abscissa", spec.spectral_abscissa},
                         {"localized", localized},
                         {"gap", *spec.gap},
                         {"max_relative_residual", max_rel_residual},
                         {"certificate_variant", std::string(to_string(cert.variant))},
                         {"rate", cert.rate}};
      if (!localized)
        fail(ErrorKind::VerificationFailed, "spectrum not localized left of -rate", "spectrum");
    } catch (const Error& e) {
      fail(e.kind(), e.what(), "spectrum");
    }
    rep["timings"]["spectrum_ms"] = clock.lap_ms();
  }

  if (command == Command::Simulate || command == Command::Check) {
    try {
      const Propagator propagator(build_block_matrix(*dec));
      const NormEquivalence eq = verify_norm_equivalence(*dec, cert.k);
      const double constant = eq.energy_constant();
      const auto [u0, u1] = initial_conditions(dec->n(), opt.init_seed);
      const std::vector<double> grid = default_time_grid(cert.rate, opt.samples);
      Trajectory traj = propagate(*dec, propagator, u0, u1, grid);
      const bool envelope = check_envelope(traj, cert, constant);
      json sim{{"envelope_holds", envelope},
               {"energy_constant", constant},
               {"samples", static_cast<int>(grid.size())},
               {"horizon", grid.back()},
               {"init_seed", opt.init_seed},
               {"certificate_variant", std::string(to_string(cert.variant))},
               {"rate", cert.rate},
               {"initial_energy", traj.energies.front()},
               {"final_energy", traj.energies.back()},
               {"propagation", propagator.diagonal_route() ? "eigendecomposition" : "scaling_and_squaring"}};
      if (traj.fitted_rate) {
        sim["fitted_rate"] = *traj.fitted_rate;
        sim["fitted_rate_consistent"] = *traj.fitted_rate >= cert.rate - 1e-3;
        if (*traj.fitted_rate < cert.rate - 1e-3)
          fail(ErrorKind::VerificationFailed, "fitted decay rate below certified rate", "simulate");
      } else {
        sim["fitted_rate"] = nullptr;
      }
      if (!envelope) fail(ErrorKind::VerificationFailed, "energy envelope violated", "simulate");
      rep["simulation"] = sim;
      result.trajectory = std::move(traj);
    } catch (const Error& e) {
      fail(e.kind(), e.what(), "simulate");
    }
    rep["timings"]["simulate_ms"] = clock.lap_ms();
  }
  return finish();
}

/// Report for failures that happen before a pair exists (bad files, bad flags).
inline RunResult input_failure(Command command, const json& input, const Error& e) {
  RunResult result;
  static const char* names[] = {"decompose", "certify", "spectrum", "simulate", "check"};
  result.report = {{"schema_version", kSchemaVersion},
                   {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                   {"command", names[static_cast<int>(command)]},
                   {"input", input},
                   {"errors", json::array({error_json(e.kind(), e.what())})},
                   {"timings", json::object()},
                   {"status", "fail"},
                   {"exit_code", exit_code_for(e.kind())}};
  result.exit_code = exit_code_for(e.kind());
  return result;
}

/// Copy of a report with the timing fields removed (for reproducibility comparisons).
inline json without_timings(json report) {
  report.erase("timings");
  return report;
}

namespace detail {

inline void check_numbers(const json& j, const std::string& path, std::vector<std::string>& problems) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) problems.push_back(path + ": non-finite number");
  if (j.is_object())
    for (auto it = j.begin(); it != j.end(); ++it) check_numbers(*it, path + "/" + it.key(), problems);
  if (j.is_array())
    for (std::size_t i = 0; i < j.size(); ++i) check_numbers(j[i], path + "/" + std::to_string(i), problems);
}

}  // namespace detail

/// Schema check for a report; returns the list of problems (empty when valid).
inline std::vector<std::string> validate_report(const json& rep) {
  std::vector<std::string> problems;
  auto require = [&](const json& obj, const char* key, auto predicate, const char* what) {
    if (!obj.is_object() || !obj.contains(key) || !predicate(obj.at(key)))
      problems.push_back(std::string("missing or mistyped '") + key + "' (" + what + ")");
  };
  auto is_int = [](const json& j) { return j.is_number_integer(); };
  auto is_str = [](const json& j) { return j.is_string(); };
  auto is_obj = [](const json& j) { return j.is_object(); };
  auto is_arr = [](const json& j) { return j.is_array(); };
  auto is_num = [](const json& j) { return j.is_number(); };
  auto is_bool = [](const json& j) { return j.is_boolean(); };

  require(rep, "schema_version", is_int, "integer");
  if (rep.is_object() && rep.contains("schema_version") && rep["schema_version"] != kSchemaVersion)
    problems.push_back("unsupported schema_version");
  require(rep, "tool", is_obj, "object");
  require(rep, "command", is_str, "string");
  require(rep, "input", is_obj, "object");
  require(rep, "errors", is_arr, "array");
  require(rep, "timings", is_obj, "object");
  require(rep, "status", is_str, "string");
  require(rep, "exit_code", is_int, "integer");
  if (problems.empty()) {
    for (const auto& e : rep["errors"]) {
      require(e, "kind", is_str, "string");
      require(e, "message", is_str, "string");
    }
    if (rep.contains("assumptions"))
      for (const char* key : {"holds_A", "holds_B", "holds_C"}) require(rep["assumptions"], key, is_bool, "bool");
    if (rep.contains("certificates")) {
      for (auto it = rep["certificates"].begin(); it != rep["certificates"].end(); ++it) {
        const json& c = *it;
        if (c.contains("error") || c.contains("skipped")) continue;
        for (const char* key : {"k", "omega1", "omega2", "theta", "rate"}) require(c, key, is_num, "number");
        require(c, "valid", is_bool, "bool");
      }
    }
    if (rep.contains("spectrum")) {
      require(rep["spectrum"], "eigenvalues", is_arr, "array");
      require(rep["spectrum"], "spectral_abscissa", is_num, "number");
      require(rep["spectrum"], "localized", is_bool, "bool");
      for (const auto& z : rep["spectrum"]["eigenvalues"]) {
        require(z, "re", is_num, "number");
        require(z, "im", is_num, "number");
      }
    }
    if (rep.contains("simulation")) require(rep["simulation"], "envelope_holds", is_bool, "bool");
  }
  detail::check_numbers(rep, "", problems);
  return problems;
}

}  // namespace decaycert
