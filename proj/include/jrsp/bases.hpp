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

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "jrsp/statevec.hpp"

namespace jrsp {

inline constexpr double kParamNormTol = 1e-12;

/// Description of the four-qubit cluster-type target
///   a|0000> + b e^{i t1}|0011> + c e^{i t2}|1100> + d e^{i t3}|1111>.
/// Coefficients are real with a^2+b^2+c^2+d^2 = 1; phases are kept in [0, 2pi).
class TargetParams {
 public:
  TargetParams(double a, double b, double c, double d, double theta1, double theta2, double theta3)
      : coeffs_{a, b, c, d}, thetas_{theta1, theta2, theta3} {
    double n2 = 0.0;
    for (double x : coeffs_) {
      if (!std::isfinite(x)) throw Error(ErrorKind::InvalidParams, "non-finite coefficient");
      n2 += x * x;
    }
    if (std::abs(n2 - 1.0) >= kParamNormTol) {
      throw Error(ErrorKind::InvalidParams, "coefficients are not normalized");
    }
    for (double& t : thetas_) {
      if (!std::isfinite(t)) throw Error(ErrorKind::InvalidParams, "non-finite phase");
      t = canonical_angle(t);
    }
  }

  double a() const { return coeffs_[0]; }
  double b() const { return coeffs_[1]; }
  double c() const { return coeffs_[2]; }
  double d() const { return coeffs_[3]; }
  const std::array<double, 4>& coeffs() const { return coeffs_; }
  const std::array<double, 3>& thetas() const { return thetas_; }

  /// k-th complex amplitude of the target: a, b e^{i t1}, c e^{i t2}, d e^{i t3}.
  Complex amplitude(int k) const {
    if (k == 0) return coeffs_[0];
    return std::polar(coeffs_[k], thetas_[k - 1]);
  }

  /// e^{i t_k} for k = 1..3 and 1 for k = 0.
  Complex phase(int k) const { return k == 0 ? Complex{1, 0} : std::polar(1.0, thetas_[k - 1]); }

  static double canonical_angle(double t) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(t, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
  }

 private:
  std::array<double, 4> coeffs_;
  std::array<double, 3> thetas_;
};

inline bool check_outcome(int k) { return k >= 0 && k <= 3; }

inline void require_outcome(int k, const char* what) {
  if (!check_outcome(k)) throw Error(ErrorKind::BadOutcomeIndex, std::string(what) + " = " + std::to_string(k));
}

/// Register label orders used throughout the protocol.
namespace registers {
inline const std::vector<Label> channel{1, 2, 3, 4, 5, 6};
inline const std::vector<Label> residual{2, 5, 3, 6};
inline const std::vector<Label> receiver{3, 6};
inline const std::vector<Label> final_order{3, 7, 6, 8};
}  // namespace registers

namespace detail {

// One signed term: sign * amplitude(index) of the target parameters.
struct Term {
  int index;
  int sign;
};

using FourTerms = std::array<Term, 4>;

// |L_m> on (2,5,3,6): coefficients of |0000>, |0101>, |1010>, |1111>.
inline constexpr std::array<FourTerms, 4> kLTable{{
    {{{0, +1}, {1, +1}, {2, +1}, {3, +1}}},
    {{{1, +1}, {0, -1}, {3, +1}, {2, -1}}},
    {{{2, +1}, {3, -1}, {0, -1}, {1, +1}}},
    {{{3, +1}, {2, +1}, {1, -1}, {0, -1}}},
}};

// |D_mn> on (3,6): coefficients of |00>, |01>, |10>, |11>, transcribed row by row.
inline constexpr std::array<std::array<FourTerms, 4>, 4> kDTable{{
    {{
        {{{0, +1}, {1, +1}, {2, +1}, {3, +1}}},
        {{{0, +1}, {1, -1}, {2, +1}, {3, -1}}},
        {{{0, +1}, {1, -1}, {2, -1}, {3, +1}}},
        {{{0, +1}, {1, +1}, {2, -1}, {3, -1}}},
    }},
    {{
        {{{1, +1}, {0, -1}, {3, +1}, {2, -1}}},
        {{{1, +1}, {0, +1}, {3, +1}, {2, +1}}},
        {{{1, +1}, {0, +1}, {3, -1}, {2, -1}}},
        {{{1, +1}, {0, -1}, {3, -1}, {2, +1}}},
    }},
    {{
        {{{2, +1}, {3, -1}, {0, -1}, {1, +1}}},
        {{{2, +1}, {3, +1}, {0, -1}, {1, -1}}},
        {{{2, +1}, {3, +1}, {0, +1}, {1, +1}}},
        {{{2, +1}, {3, -1}, {0, +1}, {1, -1}}},
    }},
    {{
        {{{3, +1}, {2, +1}, {1, -1}, {0, -1}}},
        {{{3, +1}, {2, -1}, {1, -1}, {0, +1}}},
        {{{3, +1}, {2, -1}, {1, +1}, {0, -1}}},
        {{{3, +1}, {2, +1}, {1, +1}, {0, +1}}},
    }},
}};

}  // namespace detail

inline StateVector target_state(const TargetParams& p) {
  std::vector<Complex> amps(16);
  amps[0b0000] = p.amplitude(0);
  amps[0b0011] = p.amplitude(1);
  amps[0b1100] = p.amplitude(2);
  amps[0b1111] = p.amplitude(3);
  return StateVector(registers::final_order, std::move(amps));
}

/// Two GHZ triples on (1,2,3) and (4,5,6).
inline StateVector channel_state() {
  const std::vector<Complex> ghz{std::sqrt(0.5), 0, 0, 0, 0, 0, 0, std::sqrt(0.5)};
  return tensor(StateVector::normalized({1, 2, 3}, ghz), StateVector::normalized({4, 5, 6}, ghz));
}

/// Alice's real orthogonal basis on qubits (1,4), built from (a,b,c,d) only.
inline MeasurementBasis alice_basis(const TargetParams& p) {
  const double a = p.a(), b = p.b(), c = p.c(), d = p.d();
  MeasurementBasis basis;
  basis.owner = BasisOwner::Alice;
  basis.rows = {{
      {a, b, c, d},
      {b, -a, d, -c},
      {c, -d, -a, b},
      {d, c, -b, -a},
  }};
  return basis;
}

/// Bob's basis G^(m) on qubits (2,5). Only the phases of `p` are read: entry
/// (n, j) is  s(n, j) e^{-i theta_{m xor j}} / 2  with theta_0 = 0 and the
/// Hadamard-like sign pattern s shared by all four m.
inline MeasurementBasis bob_basis(int m, const TargetParams& p) {
  require_outcome(m, "m");
  static constexpr std::array<std::array<int, 4>, 4> sign{{
      {+1, +1, +1, +1},
      {+1, -1, +1, -1},
      {+1, -1, -1, +1},
      {+1, +1, -1, -1},
  }};
  MeasurementBasis basis;
  basis.owner = BasisOwner::Bob;
  basis.m = m;
  for (int n = 0; n < 4; ++n) {
    for (int j = 0; j < 4; ++j) {
      basis.rows[n][j] = 0.5 * sign[n][j] * std::conj(p.phase(m ^ j));
    }
  }
  return basis;
}

/// Closed-form residual on (2,5,3,6) after Alice observes m.
inline StateVector l_state(int m, const TargetParams& p) {
  require_outcome(m, "m");
  static constexpr std::array<std::size_t, 4> slots{0b0000, 0b0101, 0b1010, 0b1111};
  std::vector<Complex> amps(16);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& term = detail::kLTable[m][k];
    amps[slots[k]] = static_cast<double>(term.sign) * p.coeffs()[term.index];
  }
  return StateVector(registers::residual, std::move(amps));
}

/// Closed-form state of Charlie's qubits (3,6) after outcomes (m, n).
inline StateVector d_state(int m, int n, const TargetParams& p) {
  require_outcome(m, "m");
  require_outcome(n, "n");
  std::vector<Complex> amps(4);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& term = detail::kDTable[m][n][k];
    amps[k] = static_cast<double>(term.sign) * p.amplitude(term.index);
  }
  return StateVector(registers::receiver, std::move(amps));
}

/// a|00> + b e^{i t1}|01> + c e^{i t2}|10> + d e^{i t3}|11> on (3,6).
inline StateVector intermediate_target(const TargetParams& p) {
  return StateVector(registers::receiver, {p.amplitude(0), p.amplitude(1), p.amplitude(2), p.amplitude(3)});
}

enum class Pauli { I, X, Z };

inline char to_char(Pauli op) {
  switch (op) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

inline const Gate& gate_of(Pauli op) {
  switch (op) {
    case Pauli::X: return gates::X;
    case Pauli::Z: return gates::Z;
    case Pauli::I: break;
  }
  return gates::I;
}

/// Operator product on one qubit, written left to right as in "ZX": the
/// rightmost factor acts first.
class PauliWord {
 public:
  PauliWord() : ops_{Pauli::I} {}
  PauliWord(std::initializer_list<Pauli> ops) : ops_(ops) {
    if (ops_.empty() || ops_.size() > 2) throw Error(ErrorKind::InvalidParams, "Pauli word length must be 1 or 2");
  }

  const std::vector<Pauli>& ops() const { return ops_; }

  std::string str() const {
    std::string s;
    for (Pauli op : ops_) s += to_char(op);
    return s;
  }

  bool operator==(const PauliWord&) const = default;

 private:
  std::vector<Pauli> ops_;
};

struct PauliCorrection {
  PauliWord q3;
  PauliWord q6;

  std::string str() const { return q3.str() + "(3) x " + q6.str() + "(6)"; }
  bool operator==(const PauliCorrection&) const = default;
};

inline PauliCorrection correction(int m, int n) {
  require_outcome(m, "m");
  require_outcome(n, "n");
  using enum Pauli;
  static const std::array<std::array<PauliCorrection, 4>, 4> table{{
      {{{{I}, {I}}, {{I}, {Z}}, {{Z}, {Z}}, {{Z}, {I}}}},
      {{{{I}, {Z, X}}, {{I}, {X}}, {{Z}, {X}}, {{Z}, {Z, X}}}},
      {{{{Z, X}, {Z}}, {{Z, X}, {I}}, {{X}, {I}}, {{X}, {Z}}}},
      {{{{Z, X}, {X}}, {{Z, X}, {Z, X}}, {{X}, {Z, X}}, {{X}, {X}}}},
  }};
  return table[m][n];
}

/// Applies `word` to `qubit`, rightmost factor first.
inline StateVector apply_word(const StateVector& state, Label qubit, const PauliWord& word) {
  StateVector out = state;
  const auto& ops = word.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) out = apply_one_qubit(out, qubit, gate_of(*it));
  return out;
}

}  // namespace jrsp
