#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "boxlab/alphabet.hpp"
#include "boxlab/behavior.hpp"
#include "boxlab/channel.hpp"
#include "boxlab/dist.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/numeric.hpp"
#include "boxlab/rng.hpp"

namespace boxlab {

/// Direction on the unit sphere; the measurement settings and hidden vectors
/// of the singlet protocols live here.
struct UnitVector3 {
  double x, y, z;

  UnitVector3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (std::abs(norm - 1.0) > 1e-12)
      throw OutOfRange("unit vector has norm " + std::to_string(norm));
  }

  static UnitVector3 normalized(double x_, double y_, double z_) {
    const double norm = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
    if (norm < 1e-12) throw OutOfRange("cannot normalize a zero vector");
    return UnitVector3(x_ / norm, y_ / norm, z_ / norm);
  }

  /// Direction at `angle` radians from the z axis, inside the xz plane.
  static UnitVector3 in_plane(double angle) {
    UnitVector3 v(0.0, 0.0, 1.0);
    v.x = std::sin(angle);
    v.z = std::cos(angle);
    return v;
  }

  double dot(const UnitVector3& o) const { return x * o.x + y * o.y + z * o.z; }
};

/// sgn with the measure-zero tie broken upward: sgn(0) = +1.
inline int sign_of(double t) { return t >= 0.0 ? 1 : -1; }

/// Half-space indicator: chi(t) = 0 for t >= 0, 1 otherwise.
inline int chi(double t) { return t >= 0.0 ? 0 : 1; }

// ---------------------------------------------------------------------------
// Measurement-dependent local models
// ---------------------------------------------------------------------------

/// Local model whose shared randomness is allowed to depend on both parties'
/// inputs: a family of distributions over Lambda indexed by (x, y) plus local
/// response channels.
struct MDModel {
  Alphabet lambda;
  std::size_t x_size;
  std::size_t y_size;
  std::vector<Dist> lambda_given_xy;  // indexed x * y_size + y
  Channel alice_response;             // (X x Lambda) -> A
  Channel bob_response;               // (Y x Lambda) -> B

  MDModel(Alphabet lambda_, std::size_t x_size_, std::size_t y_size_,
          std::vector<Dist> lambda_given_xy_, Channel alice_response_,
          Channel bob_response_)
      : lambda(std::move(lambda_)), x_size(x_size_), y_size(y_size_),
        lambda_given_xy(std::move(lambda_given_xy_)),
        alice_response(std::move(alice_response_)),
        bob_response(std::move(bob_response_)) {
    if (lambda_given_xy.size() != x_size * y_size)
      throw AlphabetMismatch("need one Lambda distribution per input pair");
    for (const Dist& d : lambda_given_xy)
      if (d.alphabet().size() != lambda.size())
        throw AlphabetMismatch("Lambda distribution on the wrong alphabet");
    if (alice_response.input_alphabet() !=
        Alphabet::product({x_size, lambda.size()}))
      throw AlphabetMismatch("alice response is not (X x Lambda)");
    if (bob_response.input_alphabet() !=
        Alphabet::product({y_size, lambda.size()}))
      throw AlphabetMismatch("bob response is not (Y x Lambda)");
  }

  std::size_t a_size() const { return alice_response.output_alphabet().size(); }
  std::size_t b_size() const { return bob_response.output_alphabet().size(); }
};

/// The behavior generated by a measurement-dependent model:
/// P(a,b|x,y) = sum_lambda P(lambda|x,y) P(a|x,lambda) P(b|y,lambda).
inline Behavior md_behavior(const MDModel& model) {
  const std::size_t nl = model.lambda.size();
  const std::size_t na = model.a_size();
  const std::size_t nb = model.b_size();
  std::vector<double> table(model.x_size * model.y_size * na * nb, 0.0);
  for (std::size_t x = 0; x < model.x_size; ++x) {
    for (std::size_t y = 0; y < model.y_size; ++y) {
      const Dist& pl = model.lambda_given_xy[x * model.y_size + y];
      for (std::size_t l = 0; l < nl; ++l) {
        const double w = pl[l];
        if (w == 0.0) continue;
        for (std::size_t a = 0; a < na; ++a) {
          const double pa = model.alice_response.at(a, x * nl + l);
          if (pa == 0.0) continue;
          for (std::size_t b = 0; b < nb; ++b)
            table[detail::behavior_index(model.y_size, na, nb, x, y, a, b)] +=
                w * pa * model.bob_response.at(b, y * nl + l);
        }
      }
    }
  }
  return Behavior(model.x_size, model.y_size, na, nb, std::move(table));
}

/// Universal construction: sample Lambda = (a, b) from the target's own
/// output distribution for the actual inputs and let both parties project
/// their component. Reproduces any behavior, signaling or not.
inline MDModel md_from_target(const Behavior& target) {
  const std::size_t na = target.a_size();
  const std::size_t nb = target.b_size();
  const Alphabet lambda = Alphabet::product({na, nb});
  std::vector<Dist> lgxy;
  lgxy.reserve(target.x_size() * target.y_size());
  for (std::size_t x = 0; x < target.x_size(); ++x)
    for (std::size_t y = 0; y < target.y_size(); ++y) {
      std::vector<double> w(lambda.size());
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b)
          w[a * nb + b] = target.at(x, y, a, b);
      lgxy.push_back(Dist::from_weights_clamped(lambda, std::move(w)));
    }
  Channel alice = Channel::deterministic(
      Alphabet::product({target.x_size(), lambda.size()}),
      Alphabet::simple(na),
      [=](std::size_t i) { return (i % (na * nb)) / nb; });
  Channel bob = Channel::deterministic(
      Alphabet::product({target.y_size(), lambda.size()}),
      Alphabet::simple(nb),
      [=](std::size_t i) { return (i % (na * nb)) % nb; });
  return MDModel(lambda, target.x_size(), target.y_size(), std::move(lgxy),
                 std::move(alice), std::move(bob));
}

/// Mutual information (bits) between the shared randomness and the input
/// pair, I(Lambda ; XY), under the given input distribution.
inline double hidden_influence(const MDModel& model, const Dist& input_dist) {
  const std::size_t nxy = model.x_size * model.y_size;
  if (input_dist.alphabet().size() != nxy)
    throw AlphabetMismatch("input distribution must cover X x Y");
  const std::size_t nl = model.lambda.size();
  std::vector<double> joint(nl * nxy, 0.0);
  for (std::size_t xy = 0; xy < nxy; ++xy) {
    const Dist& pl = model.lambda_given_xy[xy];
    for (std::size_t l = 0; l < nl; ++l)
      joint[l * nxy + xy] = pl[l] * input_dist[xy];
  }
  return mutual_information(
      Dist::from_weights_clamped(Alphabet::product({nl, nxy}),
                                 std::move(joint)));
}

// ---------------------------------------------------------------------------
// Singlet simulation protocols
// ---------------------------------------------------------------------------

/// One run of the shared-randomness-plus-one-bit protocol, reread as a zigzag
/// with the bit c travelling to the common past. Draw order from the stream:
/// lambda1, then lambda2 (three gaussians each).
struct TonerBaconSample {
  int a;  // +-1
  int b;  // +-1
  int c;  // +-1, the retro-causal bit
  UnitVector3 lambda1;
  UnitVector3 lambda2;
};

inline TonerBaconSample toner_bacon_sample(const UnitVector3& x_hat,
                                           const UnitVector3& y_hat,
                                           Rng& rng) {
  const auto l1 = rng.next_unit_vector3();
  const auto l2 = rng.next_unit_vector3();
  const UnitVector3 lambda1(l1[0], l1[1], l1[2]);
  const UnitVector3 lambda2(l2[0], l2[1], l2[2]);

  const int s1 = sign_of(x_hat.dot(lambda1));
  const int s2 = sign_of(x_hat.dot(lambda2));
  const int a = -s1;
  const int c = s1 * s2;
  const double by = y_hat.x * (lambda1.x + c * lambda2.x) +
                    y_hat.y * (lambda1.y + c * lambda2.y) +
                    y_hat.z * (lambda1.z + c * lambda2.z);
  const int b = sign_of(by);
  return TonerBaconSample{a, b, c, lambda1, lambda2};
}

inline TonerBaconSample toner_bacon_sample(const UnitVector3& x_hat,
                                           const UnitVector3& y_hat,
                                           std::uint64_t seed) {
  Rng rng(seed);
  return toner_bacon_sample(x_hat, y_hat, rng);
}

/// One run of the PR-box-assisted protocol, reread as a zigzag with the two
/// box inputs travelling to the common past. Draw order: lambda1, lambda2
/// (three gaussians each), then one bit for the box output p.
///
/// Frozen sign convention (calibrated against E[AB] = -cos(angle)): Alice
/// outputs (-1)^(p XOR chi(x.l1)), Bob outputs the NEGATIVE of
/// (-1)^(q XOR chi(y.(l1+l2))).
struct PrAssistedSample {
  int a;          // +-1
  int b;          // +-1
  int x_payload;  // Alice's box input, one retro-causal bit
  int y_payload;  // Bob's box input, the other retro-causal bit
};

inline PrAssistedSample pr_assisted_singlet_sample(const UnitVector3& x_hat,
                                                   const UnitVector3& y_hat,
                                                   Rng& rng) {
  const auto l1 = rng.next_unit_vector3();
  const auto l2 = rng.next_unit_vector3();
  const UnitVector3 lambda1(l1[0], l1[1], l1[2]);
  const UnitVector3 lambda2(l2[0], l2[1], l2[2]);

  const int s1 = chi(x_hat.dot(lambda1));
  const int s2 = chi(x_hat.dot(lambda2));
  const int x = s1 ^ s2;

  // lambda_plus/minus enter only through the sign of their dot products, so
  // the normalization in their definition can be dropped.
  const double tp = y_hat.x * (lambda1.x + lambda2.x) +
                    y_hat.y * (lambda1.y + lambda2.y) +
                    y_hat.z * (lambda1.z + lambda2.z);
  const double tm = y_hat.x * (lambda1.x - lambda2.x) +
                    y_hat.y * (lambda1.y - lambda2.y) +
                    y_hat.z * (lambda1.z - lambda2.z);
  const int t_plus = chi(tp);
  const int t_minus = chi(tm);
  const int y = t_plus ^ t_minus;

  const int p = rng.next_bit();
  const int q = p ^ (x & y);

  const int a = ((p ^ s1) != 0) ? -1 : 1;
  const int b = -(((q ^ t_plus) != 0) ? -1 : 1);
  return PrAssistedSample{a, b, x, y};
}

inline PrAssistedSample pr_assisted_singlet_sample(const UnitVector3& x_hat,
                                                   const UnitVector3& y_hat,
                                                   std::uint64_t seed) {
  Rng rng(seed);
  return pr_assisted_singlet_sample(x_hat, y_hat, rng);
}

// ---------------------------------------------------------------------------
// Monte Carlo estimation and the zigzag decomposition summary
// ---------------------------------------------------------------------------

enum class ZigzagProtocol { toner_bacon, pr_assisted };

inline const char* protocol_name(ZigzagProtocol p) {
  return p == ZigzagProtocol::toner_bacon ? "toner_bacon" : "pr_assisted";
}

struct CorrelationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// Empirical E[ab] over n runs of the chosen protocol from one stream.
inline CorrelationEstimate estimate_correlation(ZigzagProtocol protocol,
                                                const UnitVector3& x_hat,
                                                const UnitVector3& y_hat,
                                                std::uint64_t n, Rng& rng) {
  if (n == 0) throw OutOfRange("sample count must be >= 1");
  double sum = 0.0;  // integer-valued, exact
  for (std::uint64_t i = 0; i < n; ++i) {
    int ab;
    if (protocol == ZigzagProtocol::toner_bacon) {
      const TonerBaconSample s = toner_bacon_sample(x_hat, y_hat, rng);
      ab = s.a * s.b;
    } else {
      const PrAssistedSample s = pr_assisted_singlet_sample(x_hat, y_hat, rng);
      ab = s.a * s.b;
    }
    sum += ab;
  }
  CorrelationEstimate est;
  est.n = n;
  est.mean = sum / double(n);
  const double variance =
      n > 1 ? (double(n) - double(n) * est.mean * est.mean) / double(n - 1)
            : 0.0;
  est.std_error = std::sqrt(std::max(variance, 0.0) / double(n));
  return est;
}

inline CorrelationEstimate estimate_correlation(ZigzagProtocol protocol,
                                                const UnitVector3& x_hat,
                                                const UnitVector3& y_hat,
                                                std::uint64_t n,
                                                std::uint64_t seed,
                                                std::uint64_t stream) {
  Rng rng(seed, stream);
  return estimate_correlation(protocol, x_hat, y_hat, n, rng);
}

/// What travels to the common past, and how strongly it is tied to the
/// inputs. The marginal estimate looks at the payload alone (it comes out
/// at the estimator's bias floor: the payload without the sphere vectors is
/// uniform for every input). The hidden-influence estimate conditions on the
/// shared sphere vectors, where the payload is a deterministic function of
/// the inputs, and therefore measures I((sphere vectors, payload) ; inputs)
/// over a uniform all-pairs grid of directions.
struct ZigzagSummary {
  ZigzagProtocol protocol;
  int payload_bits = 0;
  std::size_t grid_directions = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double payload_marginal_mi_bits = 0.0;
  double hidden_influence_bits = 0.0;
};

inline ZigzagSummary zigzag_decomposition(ZigzagProtocol protocol,
                                          std::size_t grid_directions = 6,
                                          std::uint64_t samples = 1000000,
                                          std::uint64_t seed = 1) {
  if (grid_directions < 2) throw OutOfRange("need at least two directions");
  if (samples == 0) throw OutOfRange("sample count must be >= 1");
  const std::size_t n = grid_directions;
  std::vector<UnitVector3> dirs;
  dirs.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    dirs.push_back(UnitVector3::in_plane(2.0 * M_PI * double(j) / double(n)));

  const std::size_t payload_values =
      protocol == ZigzagProtocol::toner_bacon ? 2 : 4;
  const std::size_t pairs = n * n;

  std::vector<std::uint64_t> joint(payload_values * pairs, 0);
  KahanSum conditional_entropy;  // sum over samples of H(payload | lambdas)
  Rng rng(seed);

  for (std::uint64_t s = 0; s < samples; ++s) {
    const auto l1 = rng.next_unit_vector3();
    const auto l2 = rng.next_unit_vector3();
    const UnitVector3 lambda1(l1[0], l1[1], l1[2]);
    const UnitVector3 lambda2(l2[0], l2[1], l2[2]);

    std::size_t marginal_payload = 0;
    const std::size_t pair_index = std::size_t(s % pairs);
    std::vector<double> conditional(payload_values, 0.0);

    if (protocol == ZigzagProtocol::toner_bacon) {
      // c depends on Alice's direction only.
      std::size_t plus = 0;
      std::vector<int> c_of(n);
      for (std::size_t i = 0; i < n; ++i) {
        c_of[i] = sign_of(dirs[i].dot(lambda1)) * sign_of(dirs[i].dot(lambda2));
        if (c_of[i] > 0) ++plus;
      }
      conditional[0] = double(plus) / double(n);    // c = +1
      conditional[1] = 1.0 - conditional[0];        // c = -1
      marginal_payload = c_of[pair_index / n] > 0 ? 0 : 1;
    } else {
      std::vector<int> x_of(n), y_of(n);
      for (std::size_t i = 0; i < n; ++i) {
        x_of[i] = chi(dirs[i].dot(lambda1)) ^ chi(dirs[i].dot(lambda2));
        const double tp = dirs[i].x * (lambda1.x + lambda2.x) +
                          dirs[i].y * (lambda1.y + lambda2.y) +
                          dirs[i].z * (lambda1.z + lambda2.z);
        const double tm = dirs[i].x * (lambda1.x - lambda2.x) +
                          dirs[i].y * (lambda1.y - lambda2.y) +
                          dirs[i].z * (lambda1.z - lambda2.z);
        y_of[i] = chi(tp) ^ chi(tm);
      }
      std::size_t x_ones = 0, y_ones = 0;
      for (std::size_t i = 0; i < n; ++i) {
        x_ones += std::size_t(x_of[i]);
        y_ones += std::size_t(y_of[i]);
      }
      const double px = double(x_ones) / double(n);
      const double py = double(y_ones) / double(n);
      conditional[0] = (1.0 - px) * (1.0 - py);
      conditional[1] = (1.0 - px) * py;
      conditional[2] = px * (1.0 - py);
      conditional[3] = px * py;
      marginal_payload =
          std::size_t(x_of[pair_index / n]) * 2 + std::size_t(y_of[pair_index % n]);
    }

    ++joint[marginal_payload * pairs + pair_index];
    double h = 0.0;
    for (double pv : conditional) h -= xlog2x(pv);
    conditional_entropy.add(h);
  }

  // Plug-in mutual information from the joint payload/input-pair counts.
  std::vector<std::uint64_t> payload_counts(payload_values, 0);
  std::vector<std::uint64_t> pair_counts(pairs, 0);
  for (std::size_t pv = 0; pv < payload_values; ++pv)
    for (std::size_t g = 0; g < pairs; ++g) {
      payload_counts[pv] += joint[pv * pairs + g];
      pair_counts[g] += joint[pv * pairs + g];
    }
  double mi = 0.0;
  for (std::size_t pv = 0; pv < payload_values; ++pv)
    for (std::size_t g = 0; g < pairs; ++g) {
      const std::uint64_t c = joint[pv * pairs + g];
      if (c == 0) continue;
      const double pj = double(c) / double(samples);
      const double pm = (double(payload_counts[pv]) / double(samples)) *
                        (double(pair_counts[g]) / double(samples));
      mi += pj * std::log2(pj / pm);
    }

  ZigzagSummary summary;
  summary.protocol = protocol;
  summary.payload_bits = protocol == ZigzagProtocol::toner_bacon ? 1 : 2;
  summary.grid_directions = n;
  summary.samples = samples;
  summary.seed = seed;
  summary.payload_marginal_mi_bits = std::max(mi, 0.0);
  summary.hidden_influence_bits = conditional_entropy.value() / double(samples);
  return summary;
}

}  // namespace boxlab
