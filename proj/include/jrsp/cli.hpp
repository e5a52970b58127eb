// Copyright 2026 The jrsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "jrsp/bases.hpp"
#include "jrsp/json_io.hpp"
#include "jrsp/protocol.hpp"
#include "jrsp/resources.hpp"
#include "jrsp/verify.hpp"

namespace jrsp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr double kCoeffNormTol = 1e-9;
// Exactness checks that do not scale with --tolerance.
inline constexpr double kExactTol = 1e-12;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<double> parse_reals(const std::string& text, std::size_t count, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0' || !std::isfinite(v)) {
      throw UsageError(std::string(flag) + ": cannot parse '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.size() != count) {
    throw UsageError(std::string(flag) + ": expected " + std::to_string(count) + " comma-separated values");
  }
  return out;
}

struct ParamFlags {
  std::string coeffs = "0.5,0.5,0.5,0.5";
  std::string phases = "0,0,0";
  bool degrees = false;
};

/// Builds TargetParams from flag text. Coefficients off the unit sphere by more
/// than 1e-9 are rescaled with a warning; a zero vector is rejected.
inline TargetParams resolve_params(const ParamFlags& flags, std::ostream& err) {
  auto c = parse_reals(flags.coeffs, 4, "--coeffs");
  auto t = parse_reals(flags.phases, 3, "--phases");
  if (flags.degrees) {
    for (double& x : t) x *= std::numbers::pi / 180.0;
  }
  double n2 = 0.0;
  for (double x : c) n2 += x * x;
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw UsageError("--coeffs: cannot normalize a zero vector");
  const double norm = std::sqrt(n2);
  if (std::abs(norm - 1.0) > kCoeffNormTol) {
    err << "warning: coefficients have norm " << norm << "; renormalizing\n";
  }
  for (double& x : c) x /= norm;
  return TargetParams(c[0], c[1], c[2], c[3], t[0], t[1], t[2]);
}

inline double resolve_tolerance(const std::optional<double>& flag, const std::optional<std::string>& env) {
  double tol = kDefaultTolerance;
  if (flag) {
    tol = *flag;
  } else if (env && !env->empty()) {
    char* end = nullptr;
    tol = std::strtod(env->c_str(), &end);
    if (end == env->c_str() || *end != '\0') throw UsageError("JRSP_TOL: cannot parse '" + *env + "'");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError("tolerance must be a positive number");
  return tol;
}

inline std::string fixed6(double x) {
  if (std::abs(x) < 5e-7) x = 0.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline std::string format_complex(const Complex& z) {
  double re = std::abs(z.real()) < 5e-7 ? 0.0 : z.real();
  double im = std::abs(z.imag()) < 5e-7 ? 0.0 : z.imag();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f%+.6fi", re, im);
  return buf;
}

inline std::string params_text(const TargetParams& p) {
  return "a=" + fixed6(p.a()) + " b=" + fixed6(p.b()) + " c=" + fixed6(p.c()) + " d=" + fixed6(p.d()) +
         " theta=(" + fixed6(p.thetas()[0]) + "," + fixed6(p.thetas()[1]) + "," + fixed6(p.thetas()[2]) + ")";
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
  ParamFlags params;
  std::optional<std::string> force;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  std::string format = "text";
};

inline int cmd_run(const RunOptions& opt, const std::optional<std::string>& env_tol, std::ostream& out,
                   std::ostream& err) {
  const double tol = resolve_tolerance(opt.tolerance, env_tol);
  const TargetParams p = resolve_params(opt.params, err);
  BranchPolicy policy = SampleBranches{opt.seed};
  if (opt.force) {
    const auto mn = parse_reals(*opt.force, 2, "--force");
    for (double x : mn) {
      if (x != std::floor(x) || x < 0 || x > 3) throw UsageError("--force: outcomes must be integers in 0..3");
    }
    policy = ForceBranches{static_cast<int>(mn[0]), static_cast<int>(mn[1])};
  }
  const ProtocolTranscript t = run_protocol(p, policy);
  const bool ok = t.final_fidelity >= 1.0 - tol;

  if (opt.format == "json") {
    out << canonical_dump(to_json(t)) << '\n';
  } else {
    out << "params      " << params_text(p) << '\n';
    for (const auto& msg : t.messages) {
      std::string to;
      for (Party r : msg.receivers) to += (to.empty() ? "" : ",") + std::string(to_string(r));
      const bool alice = msg.sender == Party::Alice;
      out << (alice ? "alice       m=" : "bob         n=") << msg.payload << "  p="
          << fixed6(alice ? t.p_m : t.p_n_given_m) << "  -> " << to << " (" << msg.bit_cost() << " bits)\n";
    }
    out << "correction  " << t.correction.str() << '\n';
    out << "fidelity    " << fixed6(t.final_fidelity) << (ok ? "  ok" : "  FAIL") << '\n';
    out << "ledger      qubits " << t.ledger.total_qubits() << "(" << t.ledger.channel_qubits << "+"
        << t.ledger.ancilla_qubits << ")  classical bits " << t.ledger.classical_bits << "  cnot "
        << t.ledger.cnot_count << '\n';
    if (t.seed) out << "seed        " << *t.seed << '\n';
  }
  return ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  ParamFlags params;
  bool explicit_params = false;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  std::string format = "text";
  unsigned workers = 0;  // 0 = hardware concurrency
};

inline constexpr std::size_t kDefaultTrials = 100;

struct Failure {
  TargetParams params;
  int m;
  int n;
  std::string reason;
};

/// Summary over a parameter sweep.
struct SweepSummary {
  std::size_t cases = 0;
  double min_fidelity = 1.0;
  double min_p_suc = 1.0;
  double max_total_prob_error = 0.0;
  double max_outcome_prob_error = 0.0;
  double max_channel_residual = 0.0;
  double max_l_residual = 0.0;
  double max_basis_residual = 0.0;
  bool table1_pass = true;
  bool ledger_pass = true;
  std::vector<Failure> failures;

  bool pass() const { return failures.empty(); }
};

inline void audit_report(const VerificationReport& r, SweepSummary& s) {
  const double tol = r.tolerance;
  const auto fail = [&](int m, int n, std::string why) { s.failures.push_back({r.params, m, n, std::move(why)}); };
  ++s.cases;
  s.min_fidelity = std::min(s.min_fidelity, r.min_fidelity);
  s.min_p_suc = std::min(s.min_p_suc, r.p_suc);
  s.max_total_prob_error = std::max(s.max_total_prob_error, std::abs(r.total_prob - 1.0));
  s.max_channel_residual = std::max(s.max_channel_residual, r.channel_residual);
  s.max_basis_residual = std::max(s.max_basis_residual, r.basis_residual);
  for (int m = 0; m < 4; ++m) {
    s.max_l_residual = std::max(s.max_l_residual, r.l_residuals[m]);
    if (!(r.l_residuals[m] < kExactTol)) fail(m, -1, "L decomposition residual");
  }
  for (const auto& b : r.branches) {
    const double dev = std::max(std::abs(b.p_m - 0.25), std::abs(b.p_n_given_m - 0.25));
    s.max_outcome_prob_error = std::max(s.max_outcome_prob_error, dev);
    if (!(b.fidelity >= 1.0 - tol)) fail(b.m, b.n, "final fidelity below 1 - tol");
    if (!(dev < kExactTol)) fail(b.m, b.n, "outcome probability differs from 1/4");
    if (!(b.ledger == kExpectedLedger)) {
      s.ledger_pass = false;
      fail(b.m, b.n, "resource ledger");
    }
  }
  for (const auto& row : r.table1.rows) {
    if (!row.pass) fail(row.m, row.n, "Table 1 row");
  }
  s.table1_pass = s.table1_pass && r.table1_pass();
  if (!(std::abs(r.p_suc - 1.0) < kExactTol)) fail(-1, -1, "success probability");
  if (!(r.channel_residual < kExactTol)) fail(-1, -1, "channel decomposition residual");
  if (!(r.basis_residual < kExactTol)) fail(-1, -1, "basis unitarity");
}

/// Evaluates every parameter set; results keep input order regardless of
/// worker scheduling.
inline std::vector<VerificationReport> evaluate_all(const std::vector<TargetParams>& params, double tol,
                                                    unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, params.size())));
  std::vector<std::optional<VerificationReport>> slots(params.size());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < params.size(); i += workers) slots[i] = enumerate_branches(params[i], tol);
    });
  }
  for (auto& th : pool) th.join();
  std::vector<VerificationReport> out;
  out.reserve(slots.size());
  for (auto& r : slots) out.push_back(std::move(*r));
  return out;
}

inline json to_json(const SweepSummary& s, std::size_t trials, std::uint64_t seed, double tol) {
  json failures = json::array();
  for (const auto& f : s.failures) {
    failures.push_back(json{{"params", jrsp::to_json(f.params)}, {"m", f.m}, {"n", f.n}, {"reason", f.reason}});
  }
  return json{
      {"trials", trials},
      {"seed", seed},
      {"tolerance", tol},
      {"cases", s.cases},
      {"min_fidelity", s.min_fidelity},
      {"min_p_suc", s.min_p_suc},
      {"max_total_prob_error", s.max_total_prob_error},
      {"max_outcome_prob_error", s.max_outcome_prob_error},
      {"max_channel_residual", s.max_channel_residual},
      {"max_l_residual", s.max_l_residual},
      {"max_basis_residual", s.max_basis_residual},
      {"table1_pass", s.table1_pass},
      {"ledger_pass", s.ledger_pass},
      {"failures", failures},
      {"pass", s.pass()},
  };
}

inline int cmd_verify(const VerifyOptions& opt, const std::optional<std::string>& env_tol, std::ostream& out,
                      std::ostream& err) {
  const double tol = resolve_tolerance(opt.tolerance, env_tol);
  if (opt.trials && *opt.trials < 1) throw UsageError("--trials must be at least 1");

  std::vector<TargetParams> params;
  if (opt.explicit_params) params.push_back(resolve_params(opt.params, err));
  std::size_t trials = 0;
  if (!opt.explicit_params || opt.trials) {
    trials = opt.trials.value_or(kDefaultTrials);
    for (auto& p : sweep_params(trials, opt.seed)) params.push_back(p);
  }

  SweepSummary summary;
  for (const auto& r : evaluate_all(params, tol, opt.workers)) audit_report(r, summary);

  if (opt.format == "json") {
    out << canonical_dump(to_json(summary, trials, opt.seed, tol)) << '\n';
  } else {
    out << "parameter sets        " << summary.cases << " (" << trials << " random, seed " << opt.seed << ")\n";
    out << "tolerance             " << tol << '\n';
    out << "min branch fidelity   " << canonical_dump(summary.min_fidelity) << '\n';
    out << "min P_suc             " << canonical_dump(summary.min_p_suc) << '\n';
    out << "max |p - 1/4|         " << canonical_dump(summary.max_outcome_prob_error) << '\n';
    out << "max channel residual  " << canonical_dump(summary.max_channel_residual) << '\n';
    out << "max L_m residual      " << canonical_dump(summary.max_l_residual) << '\n';
    out << "max basis residual    " << canonical_dump(summary.max_basis_residual) << '\n';
    out << "Table 1 audit         " << (summary.table1_pass ? "pass" : "FAIL") << '\n';
    out << "resource ledger       " << (summary.ledger_pass ? "pass" : "FAIL") << '\n';
    for (const auto& f : summary.failures) {
      out << "FAILED " << f.reason << ": " << params_text(f.params) << " m=" << f.m << " n=" << f.n << '\n';
    }
    out << (summary.pass() ? "PASS" : "FAIL") << '\n';
  }
  return summary.pass() ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// bases

struct BasesOptions {
  ParamFlags params;
  std::string which;  // empty = both
  std::optional<int> m;
  std::string format = "text";
};

inline json matrix_json(const BasisMatrix& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json r = json::array();
    for (const auto& z : row) r.push_back(json::array({z.real(), z.imag()}));
    out.push_back(r);
  }
  return out;
}

inline void print_matrix(std::ostream& out, const std::string& title, const BasisMatrix& rows) {
  out << title << '\n';
  for (const auto& row : rows) {
    out << ' ';
    for (const auto& z : row) out << "  " << format_complex(z);
    out << '\n';
  }
}

inline int cmd_bases(const BasesOptions& opt, std::ostream& out, std::ostream& err) {
  const TargetParams p = resolve_params(opt.params, err);
  if (!opt.which.empty() && opt.which != "alice" && opt.which != "bob") {
    throw UsageError("--which must be alice or bob");
  }
  if (opt.m && !check_outcome(*opt.m)) throw UsageError("--m must be in 0..3");
  const bool alice = opt.which.empty() || opt.which == "alice";
  const bool bob = opt.which.empty() || opt.which == "bob";
  std::vector<int> ms;
  if (opt.m) {
    ms.push_back(*opt.m);
  } else {
    ms = {0, 1, 2, 3};
  }

  if (opt.format == "json") {
    json doc = json::object();
    if (alice) doc["alice"] = matrix_json(alice_basis(p).rows);
    if (bob) {
      json list = json::array();
      for (int m : ms) list.push_back(json{{"m", m}, {"rows", matrix_json(bob_basis(m, p).rows)}});
      doc["bob"] = list;
    }
    out << canonical_dump(doc) << '\n';
    return kExitOk;
  }
  if (alice) print_matrix(out, "U(a,b,c,d) on qubits (1,4):", alice_basis(p).rows);
  if (bob) {
    for (int m : ms) {
      print_matrix(out, "G^(" + std::to_string(m) + ") on qubits (2,5):", bob_basis(m, p).rows);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// resources

/// Our row, measured from a fresh run and a full branch sweep.
inline SchemeResources live_scheme_row() {
  const TargetParams p(0.5, 0.5, 0.5, 0.5, 0, 0, 0);
  const ProtocolTranscript t = run_protocol(p, ForceBranches{0, 0});
  const VerificationReport r = enumerate_branches(p);
  return scheme_from_ledger(t.ledger, std::abs(r.p_suc - 1.0) < kExactTol);
}

inline int cmd_resources(const std::string& format, std::ostream& out) {
  std::vector<SchemeResources> rows = reference_schemes();
  rows.push_back(live_scheme_row());
  if (format == "json") {
    json list = json::array();
    for (const auto& s : rows) {
      list.push_back(json{{"name", s.name},
                          {"qubits_total", s.qubits_total()},
                          {"qubits_channel", s.qubits_channel},
                          {"qubits_ancilla", s.qubits_ancilla},
                          {"classical_bits", s.classical_bits},
                          {"cnot_total", s.cnot_total()},
                          {"cnot_sender", s.cnot_sender},
                          {"cnot_receiver", s.cnot_receiver},
                          {"success_probability",
                           s.success_probability == SuccessProbability::One ? "=1" : "<1"}});
    }
    out << canonical_dump(list) << '\n';
    return kExitOk;
  }
  out << "scheme     | qubits(channel+ancilla) | classical bits | CNOT(sender+receiver) | P_suc\n";
  for (const auto& s : rows) {
    std::string name = s.name;
    name.resize(std::max<std::size_t>(name.size(), 10), ' ');
    out << name << " | " << format_row(s) << '\n';
  }
  const bool ok = format_row(rows.back()) == kOurSchemeExpectedRow;
  return ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// entry point

/// Parses `args` (argv[0] included) and dispatches. Never exits the process.
inline int run_main(const std::vector<std::string>& args, const std::optional<std::string>& env_tol,
                    std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic joint remote preparation of a four-qubit cluster-type state over two GHZ channels",
               "jrsp"};
  app.require_subcommand(1);

  const auto add_params = [](CLI::App* sub, ParamFlags& pf) {
    sub->add_option("--coeffs", pf.coeffs, "real coefficients a,b,c,d");
    sub->add_option("--phases", pf.phases, "phases t1,t2,t3 (radians)");
    sub->add_flag("--degrees", pf.degrees, "read --phases in degrees");
  };
  const auto add_format = [](CLI::App* sub, std::string& format) {
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "execute one protocol round");
  add_params(run, run_opt.params);
  run->add_option("--force", run_opt.force, "force outcomes m,n");
  run->add_option("--seed", run_opt.seed, "seed for sampled outcomes");
  run->add_option("--tolerance", run_opt.tolerance, "fidelity tolerance");
  add_format(run, run_opt.format);

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "exhaustive branch and identity audit");
  add_params(verify, verify_opt.params);
  verify->add_option("--trials", verify_opt.trials, "random parameter draws");
  verify->add_option("--seed", verify_opt.seed, "seed for parameter draws");
  verify->add_option("--tolerance", verify_opt.tolerance, "fidelity tolerance");
  verify->add_option("--workers", verify_opt.workers, "worker threads (0 = all cores)");
  add_format(verify, verify_opt.format);

  BasesOptions bases_opt;
  auto* bases = app.add_subcommand("bases", "print measurement bases");
  add_params(bases, bases_opt.params);
  bases->add_option("--which", bases_opt.which, "alice or bob");
  bases->add_option("--m", bases_opt.m, "Alice's outcome selecting G^(m)");
  add_format(bases, bases_opt.format);

  std::string resources_format = "text";
  auto* resources = app.add_subcommand("resources", "resource comparison table");
  add_format(resources, resources_format);

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opt, env_tol, out, err);
    if (*verify) {
      verify_opt.explicit_params = verify->count("--coeffs") + verify->count("--phases") > 0;
      return cmd_verify(verify_opt, env_tol, out, err);
    }
    if (*bases) return cmd_bases(bases_opt, out, err);
    if (*resources) return cmd_resources(resources_format, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace jrsp::cli
