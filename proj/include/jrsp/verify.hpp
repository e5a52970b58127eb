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
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "jrsp/bases.hpp"
#include "jrsp/protocol.hpp"
#include "jrsp/statevec.hpp"

namespace jrsp {

inline constexpr double kDefaultTolerance = 1e-10;

struct BranchResult {
  int m;
  int n;
  double p_m;
  double p_n_given_m;
  double joint_prob;
  PauliCorrection correction;
  double fidelity;
  ResourceLedger ledger;
};

struct Table1Row {
  int m;
  int n;
  double collapse_fidelity;  // brute-force collapse vs. closed-form D_mn
  double restore_fidelity;   // R_mn D_mn vs. |T>
  bool pass;
};

struct Table1Audit {
  bool pass = true;
  std::vector<Table1Row> rows;
};

struct VerificationReport {
  TargetParams params;
  std::vector<BranchResult> branches;
  double min_fidelity;
  double channel_residual;
  std::array<double, 4> l_residuals;
  double basis_residual;
  Table1Audit table1;
  double p_suc;
  double total_prob;
  double tolerance;

  bool table1_pass() const { return table1.pass; }
};

/// Projects a normalized two-qubit row onto the register (first, second).
inline StateVector pair_state(const std::array<Complex, 4>& row, Label first, Label second) {
  return StateVector({first, second}, {row[0], row[1], row[2], row[3]});
}

/// Rebuilds the channel as 1/2 sum_m |u_m>_{14} |L_m>_{2536} and returns the
/// largest amplitude deviation from channel_state().
inline double check_channel_decomposition(const TargetParams& p) {
  const MeasurementBasis u = alice_basis(p);
  std::vector<Complex> acc(64);
  for (int m = 0; m < 4; ++m) {
    const StateVector term = permute(tensor(pair_state(u.rows[m], 1, 4), l_state(m, p)), registers::channel);
    const auto amps = term.amplitudes();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += 0.5 * amps[i];
  }
  return max_abs_diff(acc, channel_state().amplitudes());
}

/// Rebuilds |L_m> as 1/2 sum_n |v_n>_{25} |D_mn>_{36}.
inline double check_l_decomposition(int m, const TargetParams& p) {
  require_outcome(m, "m");
  const MeasurementBasis v = bob_basis(m, p);
  std::vector<Complex> acc(16);
  for (int n = 0; n < 4; ++n) {
    const StateVector term = permute(tensor(pair_state(v.rows[n], 2, 5), d_state(m, n, p)), registers::residual);
    const auto amps = term.amplitudes();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += 0.5 * amps[i];
  }
  return max_abs_diff(acc, l_state(m, p).amplitudes());
}

/// Collapses the channel with two forced measurements, without consulting the
/// closed-form |L_m> or |D_mn>.
inline StateVector brute_force_collapse(int m, int n, const TargetParams& p) {
  const auto first = measure_pair(channel_state(), {1, 4}, alice_basis(p), Forced{m});
  const auto second = measure_pair(first.post_state, {2, 5}, bob_basis(m, p), Forced{n});
  return permute(second.post_state, registers::receiver);
}

inline Table1Audit check_table1(const TargetParams& p, double tol = kDefaultTolerance) {
  Table1Audit audit;
  const StateVector t = intermediate_target(p);
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const StateVector d = d_state(m, n, p);
      const double collapse = fidelity(brute_force_collapse(m, n, p), d);
      const PauliCorrection r = correction(m, n);
      const double restore = fidelity(apply_word(apply_word(d, 3, r.q3), 6, r.q6), t);
      const bool ok = collapse >= 1.0 - tol && restore >= 1.0 - tol;
      audit.rows.push_back(Table1Row{m, n, collapse, restore, ok});
      audit.pass = audit.pass && ok;
    }
  }
  return audit;
}

/// Largest |B B^dagger - I| entry over Alice's basis and all four G^(m).
inline double basis_unitarity_suite(const TargetParams& p) {
  double worst = alice_basis(p).unitarity_residual();
  for (int m = 0; m < 4; ++m) worst = std::max(worst, bob_basis(m, p).unitarity_residual());
  return worst;
}

inline VerificationReport enumerate_branches(const TargetParams& p, double tol = kDefaultTolerance) {
  VerificationReport report{
      p, {}, 1.0, check_channel_decomposition(p), {}, basis_unitarity_suite(p), check_table1(p, tol), 0.0, 0.0, tol,
  };
  for (int m = 0; m < 4; ++m) report.l_residuals[m] = check_l_decomposition(m, p);
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const ProtocolTranscript t = run_protocol(p, ForceBranches{m, n});
      const double joint = t.p_m * t.p_n_given_m;
      report.branches.push_back(
          BranchResult{m, n, t.p_m, t.p_n_given_m, joint, t.correction, t.final_fidelity, t.ledger});
      report.min_fidelity = std::min(report.min_fidelity, t.final_fidelity);
      report.total_prob += joint;
      if (t.final_fidelity >= 1.0 - tol) report.p_suc += joint;
    }
  }
  return report;
}

/// Random target parameters: (a,b,c,d) is a normalized vector of absolute
/// Gaussians, phases are uniform on [0, 2pi). Uses its own Box-Muller so a seed
/// gives the same draws on every standard library.
class ParamSampler {
 public:
  explicit ParamSampler(std::uint64_t seed) : rng_(seed) {}

  TargetParams next() {
    std::array<double, 4> g{};
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (double& x : g) {
        x = std::abs(gaussian());
        n2 += x * x;
      }
    } while (n2 < 1e-300);
    const double inv = 1.0 / std::sqrt(n2);
    std::array<double, 3> t{};
    for (double& x : t) x = 2.0 * std::numbers::pi * uniform01(rng_);
    return TargetParams(g[0] * inv, g[1] * inv, g[2] * inv, g[3] * inv, t[0], t[1], t[2]);
  }

 private:
  double gaussian() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01(rng_);
    } while (u1 <= 0.0);
    const double u2 = uniform01(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::mt19937_64 rng_;
  std::optional<double> spare_;
};

/// The four one-hot coefficient vectors and the balanced vector, zero phases.
inline std::vector<TargetParams> edge_case_params() {
  return {
      TargetParams(1, 0, 0, 0, 0, 0, 0),
      TargetParams(0, 1, 0, 0, 0, 0, 0),
      TargetParams(0, 0, 1, 0, 0, 0, 0),
      TargetParams(0, 0, 0, 1, 0, 0, 0),
      TargetParams(0.5, 0.5, 0.5, 0.5, 0, 0, 0),
  };
}

/// `trials` seeded draws followed by the deterministic edge cases.
inline std::vector<TargetParams> sweep_params(std::size_t trials, std::uint64_t seed) {
  ParamSampler sampler(seed);
  std::vector<TargetParams> out;
  out.reserve(trials + 5);
  for (std::size_t i = 0; i < trials; ++i) out.push_back(sampler.next());
  for (auto& p : edge_case_params()) out.push_back(p);
  return out;
}

}  // namespace jrsp
