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

#include <string>
#include <vector>

#include "jrsp/protocol.hpp"

namespace jrsp {

enum class SuccessProbability { LessThanOne, One };

struct SchemeResources {
  std::string name;
  int qubits_channel;
  int qubits_ancilla;
  int classical_bits;
  int cnot_sender;
  int cnot_receiver;
  SuccessProbability success_probability;

  int qubits_total() const { return qubits_channel + qubits_ancilla; }
  int cnot_total() const { return cnot_sender + cnot_receiver; }
  bool operator==(const SchemeResources&) const = default;
};

/// Published resource counts of earlier four-qubit cluster-state JRSP schemes
/// (Zhan et al. 2011, An et al. 2011, Wang et al. 2012 and 2013, Hou 2013).
/// Reference data only; these schemes are not simulated here.
inline const std::vector<SchemeResources>& reference_schemes() {
  using enum SuccessProbability;
  static const std::vector<SchemeResources> rows{
      {"ZHM11", 12, 0, 8, 0, 0, LessThanOne},
      {"ABD11", 6, 2, 4, 0, 2, LessThanOne},
      {"WY12", 8, 1, 4, 6, 0, LessThanOne},
      {"WY13", 6, 4, 4, 0, 4, LessThanOne},
      {"H13", 6, 3, 4, 2, 2, LessThanOne},
  };
  return rows;
}

inline const char* kOurSchemeName = "Our scheme";
inline const char* kOurSchemeExpectedRow = "8(6+2) | 6 | 2(0+2) | =1";

/// "total(channel+ancilla) | bits | cnots(sender+receiver) | <1 or =1"
inline std::string format_row(const SchemeResources& s) {
  return std::to_string(s.qubits_total()) + "(" + std::to_string(s.qubits_channel) + "+" +
         std::to_string(s.qubits_ancilla) + ") | " + std::to_string(s.classical_bits) + " | " +
         std::to_string(s.cnot_total()) + "(" + std::to_string(s.cnot_sender) + "+" +
         std::to_string(s.cnot_receiver) + ") | " +
         (s.success_probability == SuccessProbability::One ? "=1" : "<1");
}

/// Receiver performs every CNOT; senders only measure.
inline SchemeResources scheme_from_ledger(const ResourceLedger& ledger, bool unit_success) {
  return SchemeResources{kOurSchemeName,
                         ledger.channel_qubits,
                         ledger.ancilla_qubits,
                         ledger.classical_bits,
                         0,
                         ledger.cnot_count,
                         unit_success ? SuccessProbability::One : SuccessProbability::LessThanOne};
}

}  // namespace jrsp
