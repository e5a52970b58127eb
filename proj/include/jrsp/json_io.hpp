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

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "jrsp/bases.hpp"
#include "jrsp/protocol.hpp"
#include "jrsp/verify.hpp"

namespace jrsp {

using json = nlohmann::json;

namespace detail {

inline void dump_number(std::string& out, double x) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

inline void dump_string(std::string& out, const std::string& s) {
  out += json(s).dump();
}

inline void dump_canonical(std::string& out, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_string(out, it.key());
        out += indent < 0 ? ":" : ": ";
        dump_canonical(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_canonical(out, v, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      dump_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

/// Sorted keys, floats as %.17g. Parsing the output and dumping again
/// reproduces it byte for byte.
inline std::string canonical_dump(const json& j, int indent = 2) {
  std::string out;
  detail::dump_canonical(out, j, indent, 0);
  return out;
}

inline json to_json(const TargetParams& p) {
  return json{{"a", p.a()}, {"b", p.b()}, {"c", p.c()}, {"d", p.d()},
              {"theta", json::array({p.thetas()[0], p.thetas()[1], p.thetas()[2]})}};
}

inline json to_json(const PauliWord& w) {
  json ops = json::array();
  for (Pauli op : w.ops()) ops.push_back(std::string(1, to_char(op)));
  return ops;
}

inline json to_json(const PauliCorrection& r) { return json{{"q3", to_json(r.q3)}, {"q6", to_json(r.q6)}}; }

inline json to_json(const ResourceLedger& l) {
  return json{{"channel_qubits", l.channel_qubits},
              {"ancilla_qubits", l.ancilla_qubits},
              {"classical_bits", l.classical_bits},
              {"cnot_count", l.cnot_count}};
}

inline json to_json(const ClassicalMessage& msg) {
  json to = json::array();
  for (Party p : msg.receivers) to.push_back(to_string(p));
  return json{{"from", to_string(msg.sender)}, {"to", to}, {"payload", msg.payload}, {"bits", msg.bit_cost()}};
}

inline json to_json(const ProtocolTranscript& t) {
  json messages = json::array();
  for (const auto& msg : t.messages) messages.push_back(to_json(msg));
  return json{
      {"params", to_json(t.params)},
      {"m", t.m},
      {"n", t.n},
      {"p_m", t.p_m},
      {"p_n_given_m", t.p_n_given_m},
      {"correction", to_json(t.correction)},
      {"final_fidelity", t.final_fidelity},
      {"ledger", to_json(t.ledger)},
      {"messages", messages},
      {"seed", t.seed ? json(*t.seed) : json(nullptr)},
  };
}

inline json to_json(const VerificationReport& r) {
  json branches = json::array();
  for (const auto& b : r.branches) {
    branches.push_back(json{{"m", b.m},
                            {"n", b.n},
                            {"p_m", b.p_m},
                            {"p_n_given_m", b.p_n_given_m},
                            {"joint_prob", b.joint_prob},
                            {"correction", to_json(b.correction)},
                            {"fidelity", b.fidelity}});
  }
  return json{
      {"params", to_json(r.params)},
      {"branches", branches},
      {"min_fidelity", r.min_fidelity},
      {"channel_residual", r.channel_residual},
      {"l_residuals", json::array({r.l_residuals[0], r.l_residuals[1], r.l_residuals[2], r.l_residuals[3]})},
      {"basis_residual", r.basis_residual},
      {"table1_pass", r.table1_pass()},
      {"p_suc", r.p_suc},
      {"total_prob", r.total_prob},
      {"tolerance", r.tolerance},
  };
}

}  // namespace jrsp
