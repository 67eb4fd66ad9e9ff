#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "boxlab/circuit.hpp"
#include "boxlab/locality.hpp"

using namespace boxlab;

namespace {

// The 8 extremal boxes of the binary no-signaling polytope beyond the 16
// deterministic ones: a XOR b = xy XOR alpha*x XOR beta*y XOR gamma.
Behavior pr_family(std::size_t alpha, std::size_t beta, std::size_t gamma) {
  std::vector<double> t(16, 0.0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          if ((a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma))
            t[((x * 2 + y) * 2 + a) * 2 + b] = 0.5;
  return Behavior(2, 2, 2, 2, std::move(t));
}

Behavior random_no_signaling(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(24);
  double total = 0.0;
  for (double& x : w) {
    x = u(rng);
    total += x;
  }
  std::vector<double> table(16, 0.0);
  std::size_t idx = 0;
  for (std::size_t s = 0; s < 16; ++s, ++idx) {
    const Behavior v = strategy_behavior(s, 2, 2, 2, 2);
    for (std::size_t i = 0; i < 16; ++i) table[i] += (w[idx] / total) * v.table()[i];
  }
  for (std::size_t alpha = 0; alpha < 2; ++alpha)
    for (std::size_t beta = 0; beta < 2; ++beta)
      for (std::size_t gamma = 0; gamma < 2; ++gamma, ++idx) {
        const Behavior v = pr_family(alpha, beta, gamma);
        for (std::size_t i = 0; i < 16; ++i)
          table[i] += (w[idx] / total) * v.table()[i];
      }
  return Behavior(2, 2, 2, 2, std::move(table));
}

}  // namespace

TEST_CASE("swap op is the deterministic wire exchange") {
  const PartyOp swap = swap_op();
  // (x=1, lambda=0) -> (a=0, m=1) with probability one.
  CHECK(swap.at(0, 1, 1, 0) == 1.0);
  CHECK(swap.at(1, 0, 1, 0) == 0.0);
  CHECK(swap.at(0, 0, 0, 0) == 1.0);
  CHECK(swap.at(1, 1, 1, 1) == 1.0);

  // Column-stochastic permutation: every column a point mass, every output
  // symbol hit exactly once.
  std::vector<int> hits(4, 0);
  for (std::size_t in = 0; in < 4; ++in) {
    int ones = 0;
    for (std::size_t out = 0; out < 4; ++out) {
      const double v = swap.channel.at(out, in);
      CHECK((v == 0.0 || v == 1.0));
      if (v == 1.0) {
        ++ones;
        ++hits[out];
      }
    }
    CHECK(ones == 1);
  }
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("pr circuit wiring") {
  const CtcCircuit circuit = pr_ctc_circuit();
  CHECK(circuit.future_box.at(1, 1, 0, 1) == 0.5);
  CHECK(circuit.alice.input_size == 2);
  CHECK(circuit.alice.ctc_size == 2);
  CHECK(circuit.bob.output_size == 2);

  const CtcInstance inst = compile(circuit, 0, 0);
  CHECK(inst.v.size() == 4);
  CHECK(inst.r_out.size() == 4);
  CHECK(inst.r_in.size() == 1);
}

TEST_CASE("compiled pr circuit has constant-column induced maps") {
  const CtcCircuit circuit = pr_ctc_circuit();
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      const Channel m = induced_map(compile(circuit, x, y));
      for (std::size_t row = 0; row < 4; ++row)
        for (std::size_t col = 1; col < 4; ++col)
          CHECK(m.at(row, col) == m.at(row, 0));
      const FixedPointReport report = evolve(compile(circuit, x, y));
      CHECK(report.fp_space_dim == 0);
    }
}

TEST_CASE("consistent state for inputs (1,1) is the anticorrelated pair") {
  // Brute force: with swaps, both messages equal the inputs, so the future
  // box sees (1,1) and every induced column is its output block
  // [0, 1/2, 1/2, 0]; the unique fixed point of a constant-column map is
  // that column.
  const FixedPointReport report = evolve(compile(pr_ctc_circuit(), 1, 1));
  CHECK(report.consistent_v[0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(report.consistent_v[1] == Catch::Approx(0.5).margin(1e-12));
  CHECK(report.consistent_v[2] == Catch::Approx(0.5).margin(1e-12));
  CHECK(report.consistent_v[3] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("pr circuit reproduces the pr box") {
  const Behavior observed = observable_behavior(pr_ctc_circuit());
  CHECK(max_abs_difference(observed, pr_box()) <= 1e-9);
  CHECK(chsh_success(observed) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("constant future box yields a deterministic behavior") {
  std::vector<double> t(16, 0.0);
  for (std::size_t m1 = 0; m1 < 2; ++m1)
    for (std::size_t m2 = 0; m2 < 2; ++m2)
      t[((m1 * 2 + m2) * 2 + 1) * 2 + 0] = 1.0;  // always outputs (1, 0)
  const CtcCircuit circuit(swap_op(), swap_op(), Behavior(2, 2, 2, 2, t));
  const Behavior observed = observable_behavior(circuit);
  CHECK(max_abs_difference(observed, deterministic_box({1, 1}, {0, 0})) <=
        1e-9);
}

TEST_CASE("any no-signaling future box is reproduced exactly") {
  std::mt19937_64 rng(7177);
  for (int rep = 0; rep < 50; ++rep) {
    const Behavior target = random_no_signaling(rng);
    REQUIRE(is_no_signaling(target, 1e-9).no_signaling);
    const CtcCircuit circuit(swap_op(), swap_op(), target);
    const Behavior observed = observable_behavior(circuit);
    CHECK(max_abs_difference(observed, target) <= 1e-9);
  }
}

TEST_CASE("swapped-in deviations stay no-signaling") {
  const CtcCircuit circuit = pr_ctc_circuit();

  // Keeping the swaps reproduces the PR box with zero deviation.
  const DeviationReport same =
      deviation_test(circuit, circuit.alice, circuit.bob);
  CHECK(max_abs_difference(same.behavior, pr_box()) <= 1e-9);
  CHECK(same.ns_report.max_dev_alice == 0.0);
  CHECK(same.ns_report.max_dev_bob == 0.0);

  // Alice outputs her own input and forwards the arriving symbol.
  const Alphabet pair = Alphabet::product({2, 2});
  const PartyOp echo(2, 2, 2, 2,
                     Channel::deterministic(pair, pair, [](std::size_t i) {
                       const std::size_t x = i / 2;
                       const std::size_t lambda = i % 2;
                       return x * 2 + lambda;
                     }));
  const DeviationReport echoed = deviation_test(circuit, echo, circuit.bob);
  CHECK(echoed.ns_report.no_signaling);

  // Random deterministic and stochastic deviations on both sides.
  Rng rng(2024);
  for (int rep = 0; rep < 40; ++rep) {
    const PartyOp a = random_deterministic_party_op(circuit.alice, rng);
    const PartyOp b = random_deterministic_party_op(circuit.bob, rng);
    const DeviationReport report = deviation_test(circuit, a, b);
    CHECK(report.ns_report.max_dev_alice <= 1e-9);
    CHECK(report.ns_report.max_dev_bob <= 1e-9);
  }
  for (int rep = 0; rep < 15; ++rep) {
    const PartyOp a = random_stochastic_party_op(circuit.alice, rng);
    const PartyOp b = random_stochastic_party_op(circuit.bob, rng);
    const DeviationReport report = deviation_test(circuit, a, b);
    CHECK(report.ns_report.max_dev_alice <= 1e-9);
    CHECK(report.ns_report.max_dev_bob <= 1e-9);
  }
}

TEST_CASE("compiled evolution factors through the future messages") {
  // Reconstruct epsilon independently by direct summation over the circuit
  // pieces and check the conditional-independence structure of the curve:
  // the next time-travelling state depends on the wires only through the
  // messages sent to the common future.
  const CtcCircuit circuit = pr_ctc_circuit();
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      const CtcInstance inst = compile(circuit, x, y);
      for (std::size_t l1 = 0; l1 < 2; ++l1)
        for (std::size_t l2 = 0; l2 < 2; ++l2) {
          const std::size_t vin = l1 * 2 + l2;
          const auto column = inst.epsilon.column(vin);
          for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b)
              for (std::size_t lp1 = 0; lp1 < 2; ++lp1)
                for (std::size_t lp2 = 0; lp2 < 2; ++lp2) {
                  double expected = 0.0;
                  for (std::size_t m1 = 0; m1 < 2; ++m1)
                    for (std::size_t m2 = 0; m2 < 2; ++m2)
                      expected += circuit.alice.at(a, m1, x, l1) *
                                  circuit.bob.at(b, m2, y, l2) *
                                  circuit.future_box.at(m1, m2, lp1, lp2);
                  const double got = column[(a * 2 + b) * 4 + (lp1 * 2 + lp2)];
                  CHECK(got == expected);  // exact: all products are exact
                }

          // With swaps the messages are (x, y) for every v, so the V'
          // block of each column must equal the future box's (x, y) block
          // exactly; any deviation would be a structural violation.
          for (std::size_t lp1 = 0; lp1 < 2; ++lp1)
            for (std::size_t lp2 = 0; lp2 < 2; ++lp2) {
              double vmarg = 0.0;
              for (std::size_t ro = 0; ro < 4; ++ro)
                vmarg += column[ro * 4 + (lp1 * 2 + lp2)];
              CHECK(vmarg - circuit.future_box.at(x, y, lp1, lp2) == 0.0);
            }
        }
    }
}

TEST_CASE("circuit wiring mismatches are rejected") {
  // Ternary message wire against a binary future box.
  const Alphabet in = Alphabet::product({2, 2});
  const Alphabet out = Alphabet::product({2, 3});
  const PartyOp wide(2, 2, 2, 3,
                     Channel::deterministic(in, out, [](std::size_t i) {
                       return (i % 2) * 3 + (i / 2);
                     }));
  CHECK_THROWS_AS(CtcCircuit(wide, swap_op(), pr_box()), AlphabetMismatch);
  CHECK_THROWS_AS(compile(pr_ctc_circuit(), 2, 0), OutOfRange);
}

TEST_CASE("ternary wires compile and reproduce a ternary future box") {
  // Wire sizes beyond binary: inputs ternary, ctc wires ternary.
  const PartyOp swap3 = swap_op(3, 3);
  // No-signaling ternary box: independent uniform outputs shifted by inputs.
  std::vector<double> t(3 * 3 * 3 * 3, 0.0);
  for (std::size_t m1 = 0; m1 < 3; ++m1)
    for (std::size_t m2 = 0; m2 < 3; ++m2)
      for (std::size_t o1 = 0; o1 < 3; ++o1)
        for (std::size_t o2 = 0; o2 < 3; ++o2)
          if (o1 == (m1 + 1) % 3)
            t[((m1 * 3 + m2) * 3 + o1) * 3 + o2] = 1.0 / 3.0;
  const Behavior box(3, 3, 3, 3, std::move(t));
  REQUIRE(is_no_signaling(box, 1e-9).no_signaling);

  const CtcCircuit circuit(swap3, swap3, box);
  const Behavior observed = observable_behavior(circuit);
  CHECK(max_abs_difference(observed, box) <= 1e-9);
}
