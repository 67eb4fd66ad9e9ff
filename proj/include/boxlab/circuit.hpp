#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "boxlab/behavior.hpp"
#include "boxlab/channel.hpp"
#include "boxlab/ctc.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/parallel.hpp"
#include "boxlab/rng.hpp"

namespace boxlab {

/// One party's local operation: a stochastic map from (own input wire, wire
/// arriving on the time-like curve) to (own output wire, message wire headed
/// to the common future).
struct PartyOp {
  std::size_t input_size;
  std::size_t ctc_size;
  std::size_t output_size;
  std::size_t future_size;
  Channel channel;  // (input x ctc) -> (output x future)

  PartyOp(std::size_t input_size_, std::size_t ctc_size_,
          std::size_t output_size_, std::size_t future_size_, Channel channel_)
      : input_size(input_size_), ctc_size(ctc_size_),
        output_size(output_size_), future_size(future_size_),
        channel(std::move(channel_)) {
    if (channel.input_alphabet() != Alphabet::product({input_size, ctc_size}))
      throw AlphabetMismatch("party-op input is not (input x ctc)");
    if (channel.output_alphabet() !=
        Alphabet::product({output_size, future_size}))
      throw AlphabetMismatch("party-op output is not (output x future)");
  }

  double at(std::size_t out_sym, std::size_t future_sym, std::size_t in_sym,
            std::size_t ctc_sym) const {
    return channel.at(out_sym * future_size + future_sym,
                      in_sym * ctc_size + ctc_sym);
  }
};

/// The swap operation: output the arriving time-travelled symbol, forward the
/// own input to the common future.
inline PartyOp swap_op(std::size_t input_size = 2, std::size_t ctc_size = 2) {
  const Alphabet in = Alphabet::product({input_size, ctc_size});
  const Alphabet out = Alphabet::product({ctc_size, input_size});
  Channel c = Channel::deterministic(in, out, [=](std::size_t i) {
    const std::size_t x = i / ctc_size;
    const std::size_t lambda = i % ctc_size;
    return lambda * input_size + x;
  });
  return PartyOp(input_size, ctc_size, ctc_size, input_size, std::move(c));
}

/// The full setup: two local operations and a box evaluated in the parties'
/// common future, whose outputs travel back in time and re-enter the local
/// operations as the ctc wires.
struct CtcCircuit {
  PartyOp alice;
  PartyOp bob;
  Behavior future_box;  // inputs (m1, m2), outputs (lambda1', lambda2')

  CtcCircuit(PartyOp alice_, PartyOp bob_, Behavior future_box_)
      : alice(std::move(alice_)), bob(std::move(bob_)),
        future_box(std::move(future_box_)) {
    if (future_box.x_size() != alice.future_size ||
        future_box.y_size() != bob.future_size)
      throw AlphabetMismatch("future-box inputs do not match message wires");
    if (future_box.a_size() != alice.ctc_size ||
        future_box.b_size() != bob.ctc_size)
      throw AlphabetMismatch("future-box outputs do not match ctc wires");
  }
};

/// Swaps on both sides and a PR box in the common future.
inline CtcCircuit pr_ctc_circuit() {
  return CtcCircuit(swap_op(), swap_op(), pr_box());
}

/// Compile the circuit at fixed classical inputs (x, y) into a Deutsch
/// instance. The causality-respecting register enters as a singleton (the
/// inputs are exogenous) and leaves as the output pair (a, b); the
/// causality-violating register V = (lambda1, lambda2) enters the party
/// operations and is regenerated only by the future box, so the curve is
/// open: nothing on V interacts with its own younger self.
inline CtcInstance compile(const CtcCircuit& circuit, std::size_t x,
                           std::size_t y) {
  if (x >= circuit.alice.input_size || y >= circuit.bob.input_size)
    throw OutOfRange("circuit input out of range");

  const std::size_t l1 = circuit.alice.ctc_size;
  const std::size_t l2 = circuit.bob.ctc_size;
  const std::size_t na = circuit.alice.output_size;
  const std::size_t nb = circuit.bob.output_size;
  const std::size_t m1s = circuit.alice.future_size;
  const std::size_t m2s = circuit.bob.future_size;
  const std::size_t nv = l1 * l2;
  const std::size_t nro = na * nb;

  std::vector<double> eps(nv * (nro * nv), 0.0);
  for (std::size_t lam1 = 0; lam1 < l1; ++lam1) {
    for (std::size_t lam2 = 0; lam2 < l2; ++lam2) {
      const std::size_t vin = lam1 * l2 + lam2;
      double* column = eps.data() + vin * (nro * nv);
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t m1 = 0; m1 < m1s; ++m1) {
          const double pa = circuit.alice.at(a, m1, x, lam1);
          if (pa == 0.0) continue;
          for (std::size_t b = 0; b < nb; ++b) {
            for (std::size_t m2 = 0; m2 < m2s; ++m2) {
              const double pb = circuit.bob.at(b, m2, y, lam2);
              if (pb == 0.0) continue;
              const double pab = pa * pb;
              for (std::size_t lp1 = 0; lp1 < l1; ++lp1)
                for (std::size_t lp2 = 0; lp2 < l2; ++lp2)
                  column[(a * nb + b) * nv + (lp1 * l2 + lp2)] +=
                      pab * circuit.future_box.at(m1, m2, lp1, lp2);
            }
          }
        }
      }
    }
  }

  const Alphabet r_in = Alphabet::simple(1);
  const Alphabet r_out = Alphabet::product({na, nb});
  const Alphabet v = Alphabet::product({l1, l2});
  Channel epsilon(Alphabet::product({1, nv}),
                  Alphabet::product({nro, nv}), std::move(eps));
  return CtcInstance(r_in, r_out, v, std::move(epsilon),
                     Dist::point(r_in, 0));
}

/// The behavior an outside observer sees: evolve the compiled instance for
/// every input pair and read the output-pair distribution off the final
/// causality-respecting state.
inline Behavior observable_behavior(const CtcCircuit& circuit,
                                    double tol = 1e-9) {
  const std::size_t nx = circuit.alice.input_size;
  const std::size_t ny = circuit.bob.input_size;
  const std::size_t na = circuit.alice.output_size;
  const std::size_t nb = circuit.bob.output_size;
  std::vector<double> table(nx * ny * na * nb, 0.0);
  parallel_for(nx * ny, [&](std::size_t cell) {
    const std::size_t x = cell / ny;
    const std::size_t y = cell % ny;
    const FixedPointReport report = evolve(compile(circuit, x, y), tol);
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t b = 0; b < nb; ++b)
        table[detail::behavior_index(ny, na, nb, x, y, a, b)] =
            report.final_r[a * nb + b];
  });
  return Behavior(nx, ny, na, nb, std::move(table));
}

/// Behavior plus no-signaling verdict for a circuit where the parties swap in
/// alternative local operations. The future box stays untouched.
struct DeviationReport {
  Behavior behavior;
  NoSignalingReport ns_report;
};

inline DeviationReport deviation_test(const CtcCircuit& circuit,
                                      const PartyOp& alice_alt,
                                      const PartyOp& bob_alt,
                                      double tol = 1e-9) {
  CtcCircuit deviated(alice_alt, bob_alt, circuit.future_box);
  Behavior behavior = observable_behavior(deviated, tol);
  NoSignalingReport ns = is_no_signaling(behavior, tol);
  return DeviationReport{std::move(behavior), std::move(ns)};
}

/// Uniformly random deterministic local operation with the same wire sizes.
inline PartyOp random_deterministic_party_op(const PartyOp& like, Rng& rng) {
  const Alphabet in = Alphabet::product({like.input_size, like.ctc_size});
  const Alphabet out = Alphabet::product({like.output_size, like.future_size});
  std::vector<std::size_t> target(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) target[i] = rng.next_below(out.size());
  Channel c = Channel::deterministic(in, out,
                                     [&](std::size_t i) { return target[i]; });
  return PartyOp(like.input_size, like.ctc_size, like.output_size,
                 like.future_size, std::move(c));
}

/// Random column-stochastic local operation with the same wire sizes.
inline PartyOp random_stochastic_party_op(const PartyOp& like, Rng& rng) {
  const Alphabet in = Alphabet::product({like.input_size, like.ctc_size});
  const Alphabet out = Alphabet::product({like.output_size, like.future_size});
  std::vector<double> data(in.size() * out.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    double total = 0.0;
    for (std::size_t o = 0; o < out.size(); ++o) {
      data[i * out.size() + o] = rng.next_unit() + 1e-3;
      total += data[i * out.size() + o];
    }
    for (std::size_t o = 0; o < out.size(); ++o) data[i * out.size() + o] /= total;
  }
  Channel c(in, out, std::move(data));
  return PartyOp(like.input_size, like.ctc_size, like.output_size,
                 like.future_size, std::move(c));
}

}  // namespace boxlab
