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
#include <set>

#include "jrsp/bases.hpp"
#include "jrsp/protocol.hpp"
#include "jrsp/verify.hpp"

using namespace jrsp;
using Catch::Approx;

namespace {

TargetParams random_params(std::uint64_t seed) { return ParamSampler(seed).next(); }

}  // namespace

TEST_CASE("ClassicalMessage bit cost", "[protocol]") {
  CHECK(ClassicalMessage{Party::Alice, {Party::Bob, Party::Charlie}, 3}.bit_cost() == 4);
  CHECK(ClassicalMessage{Party::Bob, {Party::Charlie}, 0}.bit_cost() == 2);
}

TEST_CASE("step1_alice", "[protocol]") {
  SECTION("one-hot coefficients, outcome 0") {
    const auto r = step1_alice(channel_state(), TargetParams(1, 0, 0, 0, 0, 0, 0), Forced{0});
    CHECK(r.m == 0);
    CHECK(r.p_m == Approx(0.25).margin(1e-15));
    CHECK(r.residual.labels() == std::vector<Label>{2, 3, 5, 6});
    CHECK(std::abs(r.residual[0] - 1.0) < 1e-15);
  }
  SECTION("uniform outcomes and closed-form residuals") {
    const auto p = random_params(31);
    for (int m = 0; m < 4; ++m) {
      const auto r = step1_alice(channel_state(), p, Forced{m});
      CHECK(std::abs(r.p_m - 0.25) < 1e-12);
      CHECK(fidelity(permute(r.residual, registers::residual), l_state(m, p)) >= 1 - 1e-10);
      CHECK(r.message.sender == Party::Alice);
      CHECK(r.message.receivers == std::vector<Party>{Party::Bob, Party::Charlie});
      CHECK(r.message.payload == m);
      CHECK(r.message.bit_cost() == 4);
    }
  }
}

TEST_CASE("step2_bob", "[protocol]") {
  const auto p = random_params(32);
  const double t1 = p.thetas()[0], t2 = p.thetas()[1], t3 = p.thetas()[2];

  SECTION("m=1, n=0 collapse") {
    const auto alice = step1_alice(channel_state(), p, Forced{1});
    const auto bob = step2_bob(alice.residual, 1, p, Forced{0});
    const StateVector expected({3, 6}, {p.b() * std::polar(1.0, t1), -p.a(), p.d() * std::polar(1.0, t3),
                                        -p.c() * std::polar(1.0, t2)});
    CHECK(bob.collapsed.labels() == registers::receiver);
    CHECK(fidelity(bob.collapsed, expected) >= 1 - 1e-10);
    CHECK(bob.message.receivers == std::vector<Party>{Party::Charlie});
    CHECK(bob.message.bit_cost() == 2);
  }
  SECTION("all n equally likely") {
    for (int m = 0; m < 4; ++m) {
      const auto alice = step1_alice(channel_state(), p, Forced{m});
      for (int n = 0; n < 4; ++n) {
        const auto bob = step2_bob(alice.residual, m, p, Forced{n});
        CHECK(std::abs(bob.p_n - 0.25) < 1e-12);
        CHECK(fidelity(bob.collapsed, d_state(m, n, p)) >= 1 - 1e-10);
      }
    }
  }
  SECTION("zero phases, row (0,0) needs no correction") {
    const TargetParams q(0.1, 0.3, 0.5, std::sqrt(0.65), 0, 0, 0);
    const auto alice = step1_alice(channel_state(), q, Forced{0});
    const auto bob = step2_bob(alice.residual, 0, q, Forced{0});
    CHECK(fidelity(bob.collapsed, intermediate_target(q)) >= 1 - 1e-12);
  }
  SECTION("rejects a residual without Bob's qubits") {
    CHECK_THROWS_AS(step2_bob(StateVector::basis_state({3, 6, 7}, {0, 0, 0}), 0, p, Forced{0}), Error);
  }
}

TEST_CASE("step3_correct", "[protocol]") {
  const auto p = random_params(33);
  const auto d00 = d_state(0, 0, p);
  CHECK(max_abs_diff(step3_correct(d00, 0, 0).amplitudes(), d00.amplitudes()) == 0);

  const auto d11 = d_state(1, 1, p);
  CHECK(max_abs_diff(step3_correct(d11, 1, 1).amplitudes(), apply_one_qubit(d11, 6, gates::X).amplitudes()) == 0);
  CHECK(fidelity(step3_correct(d11, 1, 1), intermediate_target(p)) >= 1 - 1e-10);

  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) CHECK(fidelity(step3_correct(d_state(m, n, p), m, n), intermediate_target(p)) >= 1 - 1e-10);
  }
  CHECK_THROWS_AS(step3_correct(d00, 4, 0), Error);
}

TEST_CASE("step4_expand", "[protocol]") {
  const auto zero = step4_expand(StateVector::basis_state({3, 6}, {0, 0}));
  CHECK(zero.labels() == registers::final_order);
  CHECK(zero[0b0000] == Complex{1, 0});
  const auto ones = step4_expand(StateVector::basis_state({3, 6}, {1, 1}));
  CHECK(ones[0b1111] == Complex{1, 0});

  const auto p = random_params(34);
  ResourceLedger ledger;
  const auto full = step4_expand(intermediate_target(p), ledger);
  CHECK(max_abs_diff(full.amplitudes(), target_state(p).amplitudes()) < 1e-15);
  CHECK(ledger.ancilla_qubits == 2);
  CHECK(ledger.cnot_count == 2);
}

TEST_CASE("run_protocol", "[protocol]") {
  SECTION("forced branches") {
    for (std::uint64_t seed : {41u, 42u, 43u}) {
      const auto p = random_params(seed);
      const auto t00 = run_protocol(p, ForceBranches{0, 0});
      CHECK(t00.correction == correction(0, 0));
      CHECK(t00.final_fidelity >= 1 - 1e-10);
      const auto t10 = run_protocol(p, ForceBranches{1, 0});
      CHECK(t10.correction.str() == "I(3) x ZX(6)");
      CHECK(t10.final_fidelity >= 1 - 1e-10);
      CHECK(!t10.seed.has_value());
    }
  }
  SECTION("sampled runs replay from the seed") {
    const auto p = random_params(44);
    std::set<std::pair<int, int>> seen;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto a = run_protocol(p, SampleBranches{seed});
      const auto b = run_protocol(p, SampleBranches{seed});
      REQUIRE(a.m == b.m);
      REQUIRE(a.n == b.n);
      CHECK(a.seed == seed);
      CHECK(std::abs(a.p_m - 0.25) < 1e-12);
      CHECK(std::abs(a.p_n_given_m - 0.25) < 1e-12);
      CHECK(a.final_fidelity >= 1 - 1e-10);
      seen.insert({a.m, a.n});
    }
    CHECK(seen.size() == 16);
  }
  SECTION("transcript contents") {
    const auto p = random_params(45);
    const auto t = run_protocol(p, ForceBranches{2, 3});
    CHECK(t.ledger == kExpectedLedger);
    CHECK(t.ledger.total_qubits() == 8);
    REQUIRE(t.messages.size() == 2);
    CHECK(t.messages[0].sender == Party::Alice);
    CHECK(t.messages[1].sender == Party::Bob);
    CHECK(t.states.channel.num_qubits() == 6);
    CHECK(t.states.after_alice.num_qubits() == 4);
    CHECK(t.states.after_bob.labels() == registers::receiver);
    CHECK(fidelity(t.states.after_correction, intermediate_target(p)) >= 1 - 1e-10);
    CHECK(t.states.final_state.labels() == registers::final_order);
  }
  SECTION("Bob's basis depends only on the payload and the phases") {
    const auto p = random_params(46);
    for (int m = 0; m < 4; ++m) {
      const auto t = run_protocol(p, ForceBranches{m, 1});
      const TargetParams phases_only(1, 0, 0, 0, p.thetas()[0], p.thetas()[1], p.thetas()[2]);
      const auto replay =
          measure_pair(t.states.after_alice, {2, 5}, bob_basis(t.messages[0].payload, phases_only), Forced{1});
      CHECK(fidelity(permute(replay.post_state, registers::receiver), t.states.after_bob) >= 1 - 1e-12);
      CHECK(replay.probability == Approx(t.p_n_given_m).margin(1e-15));
    }
  }
  CHECK_THROWS_AS(run_protocol(random_params(47), ForceBranches{0, 4}), Error);
}
