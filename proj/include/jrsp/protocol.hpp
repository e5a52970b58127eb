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

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "jrsp/bases.hpp"
#include "jrsp/statevec.hpp"

namespace jrsp {

enum class Party { Alice, Bob, Charlie };

inline const char* to_string(Party p) {
  switch (p) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::Charlie: return "charlie";
  }
  return "?";
}

/// A two-bit measurement outcome broadcast to one or more parties.
struct ClassicalMessage {
  Party sender;
  std::vector<Party> receivers;
  int payload;

  int bit_cost() const { return 2 * static_cast<int>(receivers.size()); }
};

struct ResourceLedger {
  int channel_qubits = 0;
  int ancilla_qubits = 0;
  int classical_bits = 0;
  int cnot_count = 0;

  int total_qubits() const { return channel_qubits + ancilla_qubits; }
  bool operator==(const ResourceLedger&) const = default;
};

inline constexpr ResourceLedger kExpectedLedger{6, 2, 6, 2};

struct AliceOutcome {
  int m;
  double p_m;
  StateVector residual;  // labels (2,3,5,6)
  ClassicalMessage message;
};

struct BobOutcome {
  int n;
  double p_n;
  StateVector collapsed;  // labels (3,6)
  ClassicalMessage message;
};

/// Alice measures (1,4) in the basis built from (a,b,c,d) and announces m to
/// Bob and Charlie.
inline AliceOutcome step1_alice(const StateVector& channel, const TargetParams& p, const MeasurePolicy& policy) {
  auto r = measure_pair(channel, {1, 4}, alice_basis(p), policy);
  ClassicalMessage msg{Party::Alice, {Party::Bob, Party::Charlie}, r.outcome};
  return AliceOutcome{r.outcome, r.probability, std::move(r.post_state), std::move(msg)};
}

/// Bob measures (2,5) in G^(m) and announces n to Charlie.
inline BobOutcome step2_bob(const StateVector& residual, int m, const TargetParams& p, const MeasurePolicy& policy) {
  for (Label q : {2, 3, 5, 6}) {
    if (!residual.has(q)) throw Error(ErrorKind::UnknownQubit, "residual lacks qubit " + std::to_string(q));
  }
  auto r = measure_pair(residual, {2, 5}, bob_basis(m, p), policy);
  ClassicalMessage msg{Party::Bob, {Party::Charlie}, r.outcome};
  return BobOutcome{r.outcome, r.probability, permute(r.post_state, registers::receiver), std::move(msg)};
}

/// Charlie applies R_mn to qubits 3 and 6.
inline StateVector step3_correct(const StateVector& collapsed, int m, int n) {
  const PauliCorrection r = correction(m, n);
  return apply_word(apply_word(collapsed, 3, r.q3), 6, r.q6);
}

/// Appends ancillas |00> on (7,8), copies 3 -> 7 and 6 -> 8 with CNOTs and
/// returns the register in order (3,7,6,8). Counts into `ledger`.
inline StateVector step4_expand(const StateVector& t, ResourceLedger& ledger) {
  const StateVector ancillas = StateVector::basis_state({7, 8}, {0, 0});
  StateVector s = tensor(t, ancillas);
  ledger.ancilla_qubits += static_cast<int>(ancillas.num_qubits());
  s = apply_cnot(s, 3, 7);
  ++ledger.cnot_count;
  s = apply_cnot(s, 6, 8);
  ++ledger.cnot_count;
  return permute(s, registers::final_order);
}

inline StateVector step4_expand(const StateVector& t) {
  ResourceLedger scratch;
  return step4_expand(t, scratch);
}

struct SampleBranches {
  std::uint64_t seed = 0;
};

struct ForceBranches {
  int m = 0;
  int n = 0;
};

using BranchPolicy = std::variant<SampleBranches, ForceBranches>;

struct ProtocolStates {
  StateVector channel;
  StateVector after_alice;
  StateVector after_bob;
  StateVector after_correction;
  StateVector final_state;
};

struct ProtocolTranscript {
  TargetParams params;
  int m;
  int n;
  double p_m;
  double p_n_given_m;
  PauliCorrection correction;
  std::vector<ClassicalMessage> messages;  // arrival order at Charlie
  ProtocolStates states;
  ResourceLedger ledger;
  double final_fidelity;
  std::optional<std::uint64_t> seed;
};

/// Runs all four steps. Under SampleBranches the seed drives a 64-bit
/// Mersenne Twister whose first two outputs seed Alice's and Bob's draws.
inline ProtocolTranscript run_protocol(const TargetParams& p, const BranchPolicy& policy) {
  MeasurePolicy alice_policy = Forced{};
  MeasurePolicy bob_policy = Forced{};
  std::optional<std::uint64_t> seed;
  if (const auto* forced = std::get_if<ForceBranches>(&policy)) {
    require_outcome(forced->m, "m");
    require_outcome(forced->n, "n");
    alice_policy = Forced{forced->m};
    bob_policy = Forced{forced->n};
  } else {
    seed = std::get<SampleBranches>(policy).seed;
    std::mt19937_64 rng(*seed);
    const std::uint64_t alice_seed = rng();
    const std::uint64_t bob_seed = rng();
    alice_policy = Sample{alice_seed};
    bob_policy = Sample{bob_seed};
  }

  ResourceLedger ledger;
  StateVector channel = channel_state();
  ledger.channel_qubits = static_cast<int>(channel.num_qubits());

  AliceOutcome alice = step1_alice(channel, p, alice_policy);
  ledger.classical_bits += alice.message.bit_cost();

  // Bob chooses his basis from the payload he received.
  BobOutcome bob = step2_bob(alice.residual, alice.message.payload, p, bob_policy);
  ledger.classical_bits += bob.message.bit_cost();

  StateVector corrected = step3_correct(bob.collapsed, alice.message.payload, bob.message.payload);
  StateVector final_state = step4_expand(corrected, ledger);
  const double f = fidelity(final_state, target_state(p));

  return ProtocolTranscript{
      p,
      alice.m,
      bob.n,
      alice.p_m,
      bob.p_n,
      correction(alice.m, bob.n),
      {alice.message, bob.message},
      ProtocolStates{std::move(channel), alice.residual, bob.collapsed, std::move(corrected), std::move(final_state)},
      ledger,
      f,
      seed,
  };
}

}  // namespace jrsp
