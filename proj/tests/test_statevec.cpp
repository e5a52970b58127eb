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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "jrsp/bases.hpp"
#include "jrsp/statevec.hpp"
#include "oracle.hpp"

using namespace jrsp;
using Catch::Approx;

namespace {

StateVector ket(std::vector<Label> labels, std::vector<int> bits) {
  return StateVector::basis_state(std::move(labels), bits);
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected jrsp::Error");
  return ErrorKind::InvalidParams;
}

}  // namespace

TEST_CASE("StateVector construction validates its invariants", "[statevec]") {
  CHECK(kind_of([] { StateVector({1, 1}, {1, 0, 0, 0}); }) == ErrorKind::LabelCollision);
  CHECK(kind_of([] { StateVector({1, 2}, {1, 0}); }) == ErrorKind::BadRegister);
  CHECK(kind_of([] { StateVector({1}, {1, 1}); }) == ErrorKind::NotNormalized);
  CHECK(kind_of([] { StateVector({1}, {Complex{NAN, 0}, 0}); }) == ErrorKind::NonFinite);
  CHECK(kind_of([] { StateVector({}, {}); }) == ErrorKind::BadRegister);
  CHECK(kind_of([] { StateVector::normalized({1}, {0, 0}); }) == ErrorKind::NotNormalized);
}

TEST_CASE("tensor", "[statevec]") {
  SECTION("basis product") {
    const auto s = tensor(ket({1}, {0}), ket({2}, {0}));
    CHECK(s.labels() == std::vector<Label>{1, 2});
    CHECK(s[0] == Complex{1, 0});
    CHECK(s[1] == Complex{0, 0});
    CHECK(s[2] == Complex{0, 0});
    CHECK(s[3] == Complex{0, 0});
  }
  SECTION("two GHZ triples") {
    const std::vector<Complex> ghz{std::sqrt(0.5), 0, 0, 0, 0, 0, 0, std::sqrt(0.5)};
    const auto s = tensor(StateVector::normalized({1, 2, 3}, ghz), StateVector::normalized({4, 5, 6}, ghz));
    REQUIRE(s.amplitudes().size() == 64);
    for (std::size_t i = 0; i < 64; ++i) {
      const bool support = i == 0b000000 || i == 0b000111 || i == 0b111000 || i == 0b111111;
      CHECK(std::abs(s[i] - Complex{support ? 0.5 : 0.0, 0}) < 1e-15);
    }
  }
  SECTION("norm of random products") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto s = tensor(oracle::random_state({1}, rng), oracle::random_state({2}, rng));
      CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
    }
  }
  SECTION("amplitudes agree with the assignment oracle") {
    std::mt19937_64 rng(12);
    const auto a = oracle::random_state({4, 1}, rng);
    const auto b = oracle::random_state({7, 2, 9}, rng);
    const auto s = tensor(a, b);
    for (const auto& bits : oracle::assignments(s.labels())) {
      CHECK(std::abs(oracle::amplitude(s, bits) - oracle::amplitude(a, bits) * oracle::amplitude(b, bits)) < 1e-15);
    }
  }
  SECTION("overlapping labels") {
    CHECK(kind_of([] { tensor(ket({1, 2}, {0, 0}), ket({2}, {0})); }) == ErrorKind::LabelCollision);
  }
}

TEST_CASE("apply_one_qubit", "[statevec]") {
  const TargetParams p(0.1, 0.3, 0.5, std::sqrt(1 - 0.01 - 0.09 - 0.25), 0.4, 1.7, 2.9);

  SECTION("X on the low qubit swaps pairs") {
    const auto t = intermediate_target(p);
    const auto s = apply_one_qubit(t, 6, gates::X);
    CHECK(s[0] == t[1]);
    CHECK(s[1] == t[0]);
    CHECK(s[2] == t[3]);
    CHECK(s[3] == t[2]);
  }
  SECTION("Z then X on qubit 6 maps D_10 onto |T> exactly") {
    const auto d = d_state(1, 0, p);
    const auto s = apply_one_qubit(apply_one_qubit(d, 6, gates::Z), 6, gates::X);
    CHECK(max_abs_diff(s.amplitudes(), intermediate_target(p).amplitudes()) < 1e-15);
  }
  SECTION("identity leaves the state untouched") {
    std::mt19937_64 rng(3);
    const auto s = oracle::random_state({1, 2, 3}, rng);
    for (Label q : {1, 2, 3}) CHECK(max_abs_diff(apply_one_qubit(s, q, gates::I).amplitudes(), s.amplitudes()) == 0);
  }
  SECTION("gate followed by its adjoint is the identity") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
      const auto s = oracle::random_state({1, 2, 3, 4}, rng);
      std::uniform_real_distribution<double> ang(0, 2 * M_PI);
      const double th = ang(rng), a = ang(rng), b = ang(rng), c = ang(rng);
      const Complex ph = std::polar(1.0, a);
      const Gate g{{{ph * std::polar(std::cos(th), b), ph * std::polar(std::sin(th), c)},
                    {-ph * std::polar(std::sin(th), -c), ph * std::polar(std::cos(th), -b)}}};
      REQUIRE(unitarity_residual(g) < 1e-12);
      const Label q = 1 + trial % 4;
      const auto back = apply_one_qubit(apply_one_qubit(s, q, g), q, adjoint(g));
      CHECK(max_abs_diff(back.amplitudes(), s.amplitudes()) < 1e-12);
      CHECK(std::abs(apply_one_qubit(s, q, g).norm_squared() - 1) < 1e-12);
    }
  }
  SECTION("errors") {
    const auto s = ket({1, 2}, {0, 1});
    CHECK(kind_of([&] { apply_one_qubit(s, 9, gates::X); }) == ErrorKind::UnknownQubit);
    const Gate bad{{{1, 1}, {0, 1}}};
    CHECK(kind_of([&] { apply_one_qubit(s, 1, bad); }) == ErrorKind::NotUnitary);
  }
}

TEST_CASE("apply_cnot", "[statevec]") {
  CHECK(apply_cnot(ket({3, 7}, {0, 0}), 3, 7)[0b00] == Complex{1, 0});
  CHECK(apply_cnot(ket({3, 7}, {1, 0}), 3, 7)[0b11] == Complex{1, 0});
  CHECK(apply_cnot(ket({7, 3}, {0, 1}), 3, 7)[0b11] == Complex{1, 0});
  CHECK(kind_of([] { apply_cnot(ket({3, 7}, {0, 0}), 3, 3); }) == ErrorKind::SameQubit);
  CHECK(kind_of([] { apply_cnot(ket({3, 7}, {0, 0}), 3, 8); }) == ErrorKind::UnknownQubit);

  SECTION("copies |T> onto the ancillas in register order (3,7,6,8)") {
    const TargetParams p(0.5, 0.5, 0.5, 0.5, 1.0, 2.0, 3.0);
    auto s = tensor(intermediate_target(p), ket({7, 8}, {0, 0}));
    s = permute(apply_cnot(apply_cnot(s, 3, 7), 6, 8), {3, 7, 6, 8});
    CHECK(max_abs_diff(s.amplitudes(), target_state(p).amplitudes()) < 1e-15);
  }
  SECTION("CNOT is an involution") {
    std::mt19937_64 rng(5);
    const auto s = oracle::random_state({1, 2, 3}, rng);
    CHECK(max_abs_diff(apply_cnot(apply_cnot(s, 1, 3), 1, 3).amplitudes(), s.amplitudes()) == 0);
  }
}

TEST_CASE("fidelity", "[statevec]") {
  std::mt19937_64 rng(6);
  const auto s = oracle::random_state({1, 2, 3}, rng);
  CHECK(fidelity(s, s) == Approx(1.0).margin(1e-14));
  std::vector<Complex> neg(s.amplitudes().begin(), s.amplitudes().end());
  for (auto& z : neg) z = -z;
  CHECK(fidelity(s, StateVector(s.labels(), neg)) == Approx(1.0).margin(1e-14));
  std::vector<Complex> rotated(s.amplitudes().begin(), s.amplitudes().end());
  for (auto& z : rotated) z *= std::polar(1.0, 0.77);
  CHECK(fidelity(s, StateVector(s.labels(), rotated)) == Approx(1.0).margin(1e-14));

  const TargetParams one_hot(1, 0, 0, 0, 0, 0, 0);
  CHECK(fidelity(ket({3, 7, 6, 8}, {0, 0, 0, 0}), target_state(one_hot)) == 1.0);
  CHECK(fidelity(ket({1}, {0}), ket({1}, {1})) == 0.0);

  CHECK(kind_of([&] { fidelity(s, permute(s, {3, 2, 1})); }) == ErrorKind::RegisterMismatch);
  CHECK(kind_of([&] { fidelity(s, ket({1}, {0})); }) == ErrorKind::RegisterMismatch);
}

TEST_CASE("permute", "[statevec]") {
  const auto swapped = permute(ket({3, 6}, {0, 1}), {6, 3});
  CHECK(swapped.labels() == std::vector<Label>{6, 3});
  CHECK(swapped[0b10] == Complex{1, 0});

  std::mt19937_64 rng(7);
  const auto s = oracle::random_state({1, 2, 3, 4, 5}, rng);
  CHECK(max_abs_diff(permute(s, s.labels()).amplitudes(), s.amplitudes()) == 0);

  SECTION("round trip and oracle agreement over random permutations") {
    std::vector<Label> order = s.labels();
    for (int trial = 0; trial < 40; ++trial) {
      std::shuffle(order.begin(), order.end(), rng);
      const auto t = permute(s, order);
      CHECK(t.amplitudes().size() == s.amplitudes().size());
      const auto expected = oracle::amps_in_order(s, order);
      CHECK(max_abs_diff(t.amplitudes(), expected) == 0);
      CHECK(max_abs_diff(permute(t, s.labels()).amplitudes(), s.amplitudes()) == 0);

      const auto u = oracle::random_state(s.labels(), rng);
      CHECK(fidelity(permute(u, order), t) == Approx(fidelity(u, s)).margin(1e-14));
    }
  }
  CHECK(kind_of([&] { permute(s, {1, 2, 3}); }) == ErrorKind::BadPermutation);
  CHECK(kind_of([&] { permute(s, {1, 2, 3, 4, 4}); }) == ErrorKind::BadPermutation);
  CHECK(kind_of([&] { permute(s, {1, 2, 3, 4, 9}); }) == ErrorKind::BadPermutation);
}

TEST_CASE("measure_pair", "[statevec]") {
  SECTION("channel, one-hot Alice basis, outcome 0") {
    const TargetParams p(1, 0, 0, 0, 0, 0, 0);
    const auto channel = channel_state();
    const auto u = alice_basis(p);
    const auto r = measure_pair(channel, {1, 4}, u, Forced{0});
    const auto raw = oracle::project(channel, 1, 4, u.rows[0]);
    const double oracle_p = oracle::norm2(raw);
    REQUIRE(oracle_p == Approx(0.25).margin(1e-15));  // frozen from the oracle
    CHECK(r.probability == Approx(0.25).margin(1e-15));
    CHECK(r.post_state.labels() == std::vector<Label>{2, 3, 5, 6});
    CHECK(fidelity(r.post_state, ket({2, 3, 5, 6}, {0, 0, 0, 0})) == Approx(1.0).margin(1e-15));
  }
  SECTION("computational basis gives diagonal probabilities") {
    std::mt19937_64 rng(8);
    const auto s = oracle::random_state({1, 2, 3, 4}, rng);
    for (int k = 0; k < 4; ++k) {
      double expected = 0.0;
      for (const auto& a : oracle::assignments(s.labels())) {
        if (a.at(3) == (k >> 1) && a.at(1) == (k & 1)) expected += std::norm(oracle::amplitude(s, a));
      }
      CHECK(measure_pair(s, {3, 1}, MeasurementBasis::computational(), Forced{k}).probability ==
            Approx(expected).margin(1e-14));
    }
  }
  SECTION("uniform Alice outcomes on the channel") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 25; ++trial) {
      std::array<double, 4> c{};
      double n = 0;
      for (auto& x : c) {
        x = g(rng);
        n += x * x;
      }
      n = std::sqrt(n);
      const TargetParams p(c[0] / n, c[1] / n, c[2] / n, c[3] / n, 0, 0, 0);
      for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(measure_pair(channel_state(), {1, 4}, alice_basis(p), Forced{k}).probability - 0.25) < 1e-12);
      }
    }
  }
  SECTION("completeness and reconstruction for random states and bases") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 40; ++trial) {
      const auto s = oracle::random_state({1, 2, 3, 4, 5}, rng);
      MeasurementBasis basis;
      basis.rows = oracle::random_basis(rng);
      Label q1 = 1 + static_cast<Label>(rng() % 5);
      Label q2 = 1 + static_cast<Label>(rng() % 5);
      if (q1 == q2) q2 = q1 % 5 + 1;
      double total = 0;
      std::vector<Complex> rebuilt(32);
      for (int k = 0; k < 4; ++k) {
        const auto r = measure_pair(s, {q1, q2}, basis, Forced{k});
        total += r.probability;
        CHECK(r.probability == Approx(oracle::norm2(oracle::project(s, q1, q2, basis.rows[k]))).margin(1e-13));
        const StateVector row({q1, q2}, {basis.rows[k][0], basis.rows[k][1], basis.rows[k][2], basis.rows[k][3]});
        const auto term = permute(tensor(row, r.post_state), s.labels());
        for (std::size_t i = 0; i < 32; ++i) rebuilt[i] += std::sqrt(r.probability) * term[i];
      }
      CHECK(std::abs(total - 1) < 1e-12);
      CHECK(max_abs_diff(rebuilt, s.amplitudes()) < 1e-10);
    }
  }
  SECTION("sampling follows the seed") {
    std::mt19937_64 rng(13);
    const auto s = oracle::random_state({1, 2, 3}, rng);
    MeasurementBasis basis;
    basis.rows = oracle::random_basis(rng);
    std::array<int, 4> counts{};
    for (std::uint64_t seed = 0; seed < 4000; ++seed) {
      const auto a = measure_pair(s, {1, 2}, basis, Sample{seed});
      const auto b = measure_pair(s, {1, 2}, basis, Sample{seed});
      REQUIRE(a.outcome == b.outcome);
      ++counts[a.outcome];
    }
    for (int k = 0; k < 4; ++k) {
      const double p = oracle::norm2(oracle::project(s, 1, 2, basis.rows[k]));
      CHECK(std::abs(counts[k] / 4000.0 - p) < 0.05);
    }
  }
  SECTION("errors") {
    const auto s = ket({1, 2, 3}, {0, 0, 0});
    const auto comp = MeasurementBasis::computational();
    CHECK(kind_of([&] { measure_pair(s, {1, 2}, comp, Forced{3}); }) == ErrorKind::ImpossibleOutcome);
    CHECK(kind_of([&] { measure_pair(s, {1, 9}, comp, Forced{0}); }) == ErrorKind::UnknownQubit);
    CHECK(kind_of([&] { measure_pair(s, {1, 2}, comp, Forced{4}); }) == ErrorKind::BadOutcomeIndex);
    MeasurementBasis bad;
    bad.rows[0][0] = 1;
    CHECK(kind_of([&] { measure_pair(s, {1, 2}, bad, Forced{0}); }) == ErrorKind::NotUnitary);
    CHECK(kind_of([&] { measure_pair(ket({1, 2}, {0, 0}), {1, 2}, comp, Forced{0}); }) == ErrorKind::BadRegister);
  }
}

TEST_CASE("Gate and register norm is preserved across random circuits", "[statevec][property]") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = oracle::random_state({1, 2, 3, 4}, rng);
    for (int step = 0; step < 10; ++step) {
      const Label a = 1 + static_cast<Label>(rng() % 4);
      const Label b = a % 4 + 1;
      switch (rng() % 4) {
        case 0: s = apply_one_qubit(s, a, gates::X); break;
        case 1: s = apply_one_qubit(s, a, gates::Z); break;
        case 2: s = apply_cnot(s, a, b); break;
        default: {
          auto order = s.labels();
          std::shuffle(order.begin(), order.end(), rng);
          s = permute(s, order);
        }
      }
      REQUIRE(std::abs(s.norm_squared() - 1) < 1e-12);
    }
  }
}
