#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "decaycert/decaycert.hpp"

namespace decaycert::cli {

/// Parses "1", "-2.5", "3i", "1+1i", "1e-3-2e-1i", "-i" (a trailing 'j' is accepted too).
inline cplx parse_complex(std::string text) {
  std::erase_if(text, [](unsigned char c) { return std::isspace(c); });
  if (text.empty()) throw Error(ErrorKind::InvalidInput, "empty complex number");
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "invalid complex number '" + text + "'");
    }
    if (used != s.size()) throw Error(ErrorKind::InvalidInput, "invalid complex number '" + text + "'");
    return v;
  };
  const char last = text.back();
  if (last != 'i' && last != 'j') return {to_double(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return to_double(s);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {to_double(body.substr(0, split)), imag_of(body.substr(split))};
}

struct InputOptions {
  std::string a_path, d_path;
  std::string family;
  std::uint64_t seed = 0;
  int n = 4;
  std::string a_value = "1";
  std::string d_value;
  double gamma = 0.2;
  double sector_tan = 0.5;
  double beta_min = 2.0;
};

inline std::pair<OperatorPair, json> build_input(const InputOptions& in) {
  json desc;
  if (!in.family.empty()) {
    desc["generator"] = in.family;
    desc["seed"] = in.seed;
    if (in.family == "scalar") {
      const cplx a = parse_complex(in.a_value);
      const cplx d = parse_complex(in.d_value.empty() ? "2" : in.d_value);
      desc["a"] = to_json(a);
      desc["d"] = to_json(d);
      return {gen_scalar(a, d).pair, desc};
    }
    if (in.family == "wave") {
      const double d = in.d_value.empty() ? 1.0 : parse_complex(in.d_value).real();
      desc["n"] = in.n;
      desc["gamma"] = in.gamma;
      desc["d"] = d;
      return {gen_damped_wave(in.n, in.gamma, d), desc};
    }
    if (in.family == "random") {
      desc["n"] = in.n;
      desc["sector_tan_max"] = in.sector_tan;
      desc["beta_min"] = in.beta_min;
      return {gen_random_valid(in.n, in.sector_tan, in.beta_min, in.seed), desc};
    }
    throw Error(ErrorKind::InvalidInput, "unknown generator family '" + in.family + "'");
  }
  if (in.a_path.empty() || in.d_path.empty())
    throw Error(ErrorKind::InvalidInput, "either --A and --D or --generate is required");
  desc["A"] = in.a_path;
  desc["D"] = in.d_path;
  OperatorPair pair{mm::load(in.a_path), mm::load(in.d_path)};
  if (pair.A.rows() != pair.D.rows() || pair.A.cols() != pair.D.cols())
    throw Error(ErrorKind::DimensionMismatch, "A and D have different sizes");
  return {pair, desc};
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponential decay certificates for u'' + D u' + A u = 0"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  InputOptions input;
  RunOptions options;
  std::string variant = "both";
  std::optional<double> k, m, p, q;
  std::optional<int> grid;
  std::string out_path, csv_path;

  auto add_input = [&](CLI::App* sub, bool outputs) {
    sub->add_option("--A", input.a_path, outputs ? "Output path for A" : "Matrix Market file for A");
    sub->add_option("--D", input.d_path, outputs ? "Output path for D" : "Matrix Market file for D");
    sub->add_option("--generate", input.family, "Generator family: scalar | wave | random");
    sub->add_option("--seed", input.seed, "Generator seed");
    sub->add_option("--n", input.n, "Generator dimension");
    sub->add_option("--a", input.a_value, "Scalar stiffness (complex, e.g. 1+1i)");
    sub->add_option("--d", input.d_value, "Damping: complex for scalar, real for wave");
    sub->add_option("--gamma", input.gamma, "Loss tangent for the wave family");
    sub->add_option("--sector-tan", input.sector_tan, "Sector bound for the random family");
    sub->add_option("--beta-min", input.beta_min, "Damping floor for the random family");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--variant", variant, "t1 | t2 | both")->check(CLI::IsMember({"t1", "t2", "both"}));
    sub->add_option("--k", k, "Pin k (skips optimization)");
    sub->add_option("--m", m, "Pin m (Theorem 1)");
    sub->add_option("--p", p, "Pin p (Theorem 2)");
    sub->add_option("--q", q, "Pin q (Theorem 2)");
    sub->add_option("--grid", grid, "Grid points per search axis")->check(CLI::Range(2, 4096));
    sub->add_option("--tol", options.tol, "Verification tolerance");
    sub->add_option("--init-seed", options.init_seed, "Seed for the initial data of simulations");
    sub->add_option("--out", out_path, "Write the JSON report here (default: stdout)");
  };

  struct Sub {
    CLI::App* app;
    Command command;
  };
  std::vector<Sub> subs;
  for (auto [name, cmd, help] :
       {std::tuple{"decompose", Command::Decompose, "Validate assumptions and report the decomposition"},
        std::tuple{"certify", Command::Certify, "Find or evaluate decay certificates"},
        std::tuple{"spectrum", Command::Spectrum, "Pencil eigenvalues and localization"},
        std::tuple{"simulate", Command::Simulate, "Trajectory and energy envelope check"},
        std::tuple{"check", Command::Check, "Full pipeline"}}) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_input(sub, false);
    add_run(sub);
    if (cmd == Command::Simulate || cmd == Command::Check)
      sub->add_option("--csv", csv_path, "Write the trajectory as CSV");
    subs.push_back({sub, cmd});
  }
  CLI::App* generate = app.add_subcommand("generate", "Write a generated pair as Matrix Market files");
  add_input(generate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  if (generate->parsed()) {
    try {
      if (input.family.empty()) throw Error(ErrorKind::InvalidInput, "generate needs --generate");
      if (input.a_path.empty() || input.d_path.empty())
        throw Error(ErrorKind::InvalidInput, "generate needs --A and --D output paths");
      const std::string a_out = input.a_path, d_out = input.d_path;
      InputOptions gen = input;
      gen.a_path.clear();
      gen.d_path.clear();
      const auto [pair, desc] = build_input(gen);
      mm::save(a_out, pair.A);
      mm::save(d_out, pair.D);
      out << json{{"generated", desc}, {"A", a_out}, {"D", d_out}}.dump(2) << '\n';
      return 0;
    } catch (const Error& e) {
      err << e.what() << '\n';
      return exit_code_for(e.kind());
    }
  }

  Command command = Command::Check;
  for (const auto& s : subs)
    if (s.app->parsed()) command = s.command;

  options.variants = variant == "t1" ? VariantSelection::T1
                     : variant == "t2" ? VariantSelection::T2
                                       : VariantSelection::Both;
  options.k = k;
  options.m = m;
  options.p = p;
  options.q = q;
  if (grid) {
    options.search.k_points = *grid;
    options.search.inner_points = *grid;
  }

  RunResult result;
  json desc;
  try {
    auto built = build_input(input);
    desc = built.second;
    if (k && ((variant != "t2" && !m) || (variant != "t1" && (!p || !q))))
      throw Error(ErrorKind::InvalidInput, "pinning --k requires --m (t1) and --p, --q (t2)");
    result = run(command, built.first, desc, options);
  } catch (const Error& e) {
    result = input_failure(command, desc, e);
  }

  const std::string text = result.report.dump(2);
  if (out_path.empty()) {
    out << text << '\n';
  } else {
    std::ofstream file(out_path);
    if (!file) {
      err << "cannot write report to '" << out_path << "'\n";
      return 1;
    }
    file << text << '\n';
  }
  if (!csv_path.empty() && result.trajectory) {
    std::ofstream csv(csv_path);
    if (!csv) {
      err << "cannot write trajectory to '" << csv_path << "'\n";
      return 1;
    }
    write_csv(csv, *result.trajectory);
  }
  for (const auto& e : result.report["errors"]) err << e["kind"].get<std::string>() << ": " << e["message"].get<std::string>() << '\n';
  return result.exit_code;
}

}  // namespace decaycert::cli
