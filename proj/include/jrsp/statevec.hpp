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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace jrsp {

using Complex = std::complex<double>;

/// Qubit identifier. The protocol uses the integers 1..8.
using Label = int;

inline constexpr std::size_t kMaxQubits = 12;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kImpossibleProb = 1e-15;

enum class ErrorKind {
  LabelCollision,
  UnknownQubit,
  NotUnitary,
  SameQubit,
  ImpossibleOutcome,
  RegisterMismatch,
  BadPermutation,
  BadOutcomeIndex,
  NotNormalized,
  NonFinite,
  BadRegister,
  InvalidParams,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LabelCollision: return "LabelCollision";
    case ErrorKind::UnknownQubit: return "UnknownQubit";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::SameQubit: return "SameQubit";
    case ErrorKind::ImpossibleOutcome: return "ImpossibleOutcome";
    case ErrorKind::RegisterMismatch: return "RegisterMismatch";
    case ErrorKind::BadPermutation: return "BadPermutation";
    case ErrorKind::BadOutcomeIndex: return "BadOutcomeIndex";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::BadRegister: return "BadRegister";
    case ErrorKind::InvalidParams: return "InvalidParams";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

using Gate = std::array<std::array<Complex, 2>, 2>;
using BasisMatrix = std::array<std::array<Complex, 4>, 4>;

namespace gates {
inline const Gate I{{{Complex{1, 0}, Complex{0, 0}}, {Complex{0, 0}, Complex{1, 0}}}};
inline const Gate X{{{Complex{0, 0}, Complex{1, 0}}, {Complex{1, 0}, Complex{0, 0}}}};
inline const Gate Z{{{Complex{1, 0}, Complex{0, 0}}, {Complex{0, 0}, Complex{-1, 0}}}};
}  // namespace gates

template <std::size_t N>
double unitarity_residual(const std::array<std::array<Complex, N>, N>& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      Complex acc{0, 0};
      for (std::size_t k = 0; k < N; ++k) acc += m[i][k] * std::conj(m[j][k]);
      if (i == j) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

inline Gate adjoint(const Gate& g) {
  return Gate{{{std::conj(g[0][0]), std::conj(g[1][0])}, {std::conj(g[0][1]), std::conj(g[1][1])}}};
}

enum class BasisOwner { Generic, Alice, Bob };

/// Four orthonormal two-qubit vectors. Row k is the outcome-k vector expressed
/// in the computational basis |00>,|01>,|10>,|11> of the measured pair.
struct MeasurementBasis {
  BasisMatrix rows{};
  BasisOwner owner = BasisOwner::Generic;
  int m = -1;  // Bob's basis index, -1 otherwise

  double unitarity_residual() const { return jrsp::unitarity_residual(rows); }

  static MeasurementBasis computational() {
    MeasurementBasis b;
    for (std::size_t k = 0; k < 4; ++k) b.rows[k][k] = 1.0;
    return b;
  }
};

/// Dense state vector over an ordered, labelled qubit register. The first label
/// is the most significant bit of the amplitude index.
class StateVector {
 public:
  StateVector(std::vector<Label> labels, std::vector<Complex> amplitudes)
      : labels_(std::move(labels)), amps_(std::move(amplitudes)) {
    if (labels_.empty() || labels_.size() > kMaxQubits) {
      throw Error(ErrorKind::BadRegister,
                  "register must hold 1.." + std::to_string(kMaxQubits) + " qubits");
    }
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorKind::LabelCollision, "duplicate qubit label");
    }
    if (amps_.size() != (std::size_t{1} << labels_.size())) {
      throw Error(ErrorKind::BadRegister, "amplitude count does not match 2^num_qubits");
    }
    for (const auto& z : amps_) {
      if (!is_finite(z)) throw Error(ErrorKind::NonFinite, "non-finite amplitude");
    }
    if (std::abs(norm_squared() - 1.0) >= kNormTol) {
      throw Error(ErrorKind::NotNormalized,
                  "squared norm deviates from 1 by " + std::to_string(std::abs(norm_squared() - 1.0)));
    }
  }

  /// Normalizes `amplitudes` before validating; throws on a zero vector.
  static StateVector normalized(std::vector<Label> labels, std::vector<Complex> amplitudes) {
    double n2 = 0.0;
    for (const auto& z : amplitudes) n2 += std::norm(z);
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
      throw Error(ErrorKind::NotNormalized, "cannot normalize a zero or non-finite vector");
    }
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& z : amplitudes) z *= scale;
    return StateVector(std::move(labels), std::move(amplitudes));
  }

  /// Computational basis state; `bits` lists one bit per label in register order.
  static StateVector basis_state(std::vector<Label> labels, const std::vector<int>& bits) {
    if (bits.size() != labels.size()) {
      throw Error(ErrorKind::BadRegister, "bit pattern length does not match register");
    }
    std::size_t index = 0;
    for (int b : bits) index = (index << 1) | static_cast<std::size_t>(b != 0);
    std::vector<Complex> amps(std::size_t{1} << labels.size());
    amps[index] = 1.0;
    return StateVector(std::move(labels), std::move(amps));
  }

  std::size_t num_qubits() const { return labels_.size(); }
  const std::vector<Label>& labels() const { return labels_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  const Complex& operator[](std::size_t index) const { return amps_[index]; }

  double norm_squared() const {
    double n2 = 0.0;
    for (const auto& z : amps_) n2 += std::norm(z);
    return n2;
  }

  bool has(Label q) const { return std::find(labels_.begin(), labels_.end(), q) != labels_.end(); }

  /// Register position of `q` (0 = most significant).
  std::size_t position(Label q) const {
    auto it = std::find(labels_.begin(), labels_.end(), q);
    if (it == labels_.end()) throw Error(ErrorKind::UnknownQubit, "qubit " + std::to_string(q));
    return static_cast<std::size_t>(it - labels_.begin());
  }

  /// Index-space bit mask for `q`.
  std::size_t mask(Label q) const { return std::size_t{1} << (num_qubits() - 1 - position(q)); }

 private:
  std::vector<Label> labels_;
  std::vector<Complex> amps_;
};

inline StateVector tensor(const StateVector& s1, const StateVector& s2) {
  std::vector<Label> labels = s1.labels();
  for (Label q : s2.labels()) {
    if (s1.has(q)) throw Error(ErrorKind::LabelCollision, "qubit " + std::to_string(q) + " on both sides");
    labels.push_back(q);
  }
  const auto a = s1.amplitudes();
  const auto b = s2.amplitudes();
  std::vector<Complex> amps;
  amps.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) amps.push_back(x * y);
  }
  return StateVector(std::move(labels), std::move(amps));
}

inline StateVector apply_one_qubit(const StateVector& state, Label qubit, const Gate& gate) {
  const std::size_t bit = state.mask(qubit);
  if (unitarity_residual(gate) >= kUnitaryTol) throw Error(ErrorKind::NotUnitary, "one-qubit gate");
  const auto in = state.amplitudes();
  std::vector<Complex> out(in.begin(), in.end());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i & bit) continue;
    const Complex lo = in[i];
    const Complex hi = in[i | bit];
    out[i] = gate[0][0] * lo + gate[0][1] * hi;
    out[i | bit] = gate[1][0] * lo + gate[1][1] * hi;
  }
  return StateVector(state.labels(), std::move(out));
}

inline StateVector apply_cnot(const StateVector& state, Label control, Label target) {
  if (control == target) throw Error(ErrorKind::SameQubit, "CNOT control equals target");
  const std::size_t cbit = state.mask(control);
  const std::size_t tbit = state.mask(target);
  const auto in = state.amplitudes();
  std::vector<Complex> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[(i & cbit) ? (i ^ tbit) : i] = in[i];
  return StateVector(state.labels(), std::move(out));
}

inline double fidelity(const StateVector& s1, const StateVector& s2) {
  if (s1.labels() != s2.labels()) {
    throw Error(ErrorKind::RegisterMismatch, "fidelity needs identical label order");
  }
  Complex overlap{0, 0};
  const auto a = s1.amplitudes();
  const auto b = s2.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

inline StateVector permute(const StateVector& state, const std::vector<Label>& order) {
  const std::size_t n = state.num_qubits();
  if (order.size() != n) throw Error(ErrorKind::BadPermutation, "wrong number of labels");
  std::vector<std::size_t> src_mask(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!state.has(order[k])) throw Error(ErrorKind::BadPermutation, "label " + std::to_string(order[k]));
    src_mask[k] = state.mask(order[k]);
  }
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorKind::BadPermutation, "repeated label");
    }
  }
  const auto in = state.amplitudes();
  std::vector<Complex> out(in.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::size_t src = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (j & (std::size_t{1} << (n - 1 - k))) src |= src_mask[k];
    }
    out[j] = in[src];
  }
  return StateVector(order, std::move(out));
}

/// Largest |amplitude difference| between two states on the same register.
inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::RegisterMismatch, "length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/// Uniform double in [0, 1) with 53 random bits; independent of the standard
/// library's distribution implementations so sampled runs replay everywhere.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Sample {
  std::uint64_t seed = 0;
};

struct Forced {
  int outcome = 0;
};

using MeasurePolicy = std::variant<Sample, Forced>;

struct MeasureResult {
  int outcome;
  double probability;
  StateVector post_state;
};

/// Projective measurement of `pair` in `basis`. The first label of the pair is
/// the high bit of the two-qubit basis index. Measured qubits leave the register.
inline MeasureResult measure_pair(const StateVector& state, std::pair<Label, Label> pair,
                                  const MeasurementBasis& basis, const MeasurePolicy& policy) {
  if (pair.first == pair.second) throw Error(ErrorKind::SameQubit, "measured pair repeats a qubit");
  const std::size_t hi = state.mask(pair.first);
  const std::size_t lo = state.mask(pair.second);
  if (state.num_qubits() < 3) throw Error(ErrorKind::BadRegister, "measurement would empty the register");
  if (basis.unitarity_residual() >= kUnitaryTol) throw Error(ErrorKind::NotUnitary, "measurement basis");

  std::vector<Label> rest_labels;
  for (Label q : state.labels()) {
    if (q != pair.first && q != pair.second) rest_labels.push_back(q);
  }
  const std::size_t n_rest = rest_labels.size();
  std::vector<std::size_t> rest_mask(n_rest);
  for (std::size_t k = 0; k < n_rest; ++k) rest_mask[k] = state.mask(rest_labels[k]);

  const auto amps = state.amplitudes();
  const std::size_t dim_rest = std::size_t{1} << n_rest;
  std::array<std::vector<Complex>, 4> proj;
  std::array<double, 4> probs{};
  for (std::size_t k = 0; k < 4; ++k) {
    proj[k].assign(dim_rest, Complex{0, 0});
    for (std::size_t r = 0; r < dim_rest; ++r) {
      std::size_t base = 0;
      for (std::size_t t = 0; t < n_rest; ++t) {
        if (r & (std::size_t{1} << (n_rest - 1 - t))) base |= rest_mask[t];
      }
      Complex acc{0, 0};
      for (std::size_t j = 0; j < 4; ++j) {
        const std::size_t idx = base | ((j & 2) ? hi : 0) | ((j & 1) ? lo : 0);
        acc += std::conj(basis.rows[k][j]) * amps[idx];
      }
      proj[k][r] = acc;
      probs[k] += std::norm(acc);
    }
  }

  int outcome = 0;
  if (const auto* forced = std::get_if<Forced>(&policy)) {
    if (forced->outcome < 0 || forced->outcome > 3) {
      throw Error(ErrorKind::BadOutcomeIndex, "outcome " + std::to_string(forced->outcome));
    }
    outcome = forced->outcome;
    if (probs[outcome] < kImpossibleProb) {
      throw Error(ErrorKind::ImpossibleOutcome, "outcome " + std::to_string(outcome));
    }
  } else {
    std::mt19937_64 rng(std::get<Sample>(policy).seed);
    const double u = uniform01(rng);
    double total = 0.0;
    for (double p : probs) total += p;
    double cdf = 0.0;
    outcome = -1;
    for (int k = 0; k < 4; ++k) {
      if (probs[k] < kImpossibleProb) continue;
      outcome = k;
      cdf += probs[k] / total;
      if (u < cdf) break;
    }
  }
  const double p = probs[outcome];
  return MeasureResult{outcome, p, StateVector::normalized(std::move(rest_labels), std::move(proj[outcome]))};
}

}  // namespace jrsp
