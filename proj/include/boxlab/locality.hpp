#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "boxlab/behavior.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/numeric.hpp"
#include "boxlab/simplex.hpp"

namespace boxlab {

/// Outcome of the Bell-locality membership test. When is_local, `weights`
/// holds a convex combination over deterministic strategy pairs that
/// reproduces the behavior; the strategy order is fixed by
/// strategy_responses() below.
struct LocalityCertificate {
  bool is_local = false;
  std::vector<double> weights;   // present (non-empty) iff is_local
  double violation_gap = 0.0;    // ~0 when local; L1/2 witness otherwise
};

namespace detail {
inline std::size_t checked_pow(std::size_t base, std::size_t exp,
                               std::size_t cap) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && v > cap / base + 1) return cap + 1;
    v *= base;
    if (v > cap) return cap + 1;
  }
  return v;
}
}  // namespace detail

/// Number of deterministic strategy pairs |A|^|X| * |B|^|Y| for the given
/// behavior dimensions (capped to avoid overflow).
inline std::size_t strategy_count(std::size_t x_size, std::size_t y_size,
                                  std::size_t a_size, std::size_t b_size,
                                  std::size_t cap = 1000000) {
  const std::size_t nf = detail::checked_pow(a_size, x_size, cap);
  const std::size_t ng = detail::checked_pow(b_size, y_size, cap);
  if (nf > cap || ng > cap || nf > cap / ng) return cap + 1;
  return nf * ng;
}

/// Decode a strategy-pair index into response maps (f, g). The pair index is
/// f_index * |B|^|Y| + g_index, where f_index has f(0) as its least
/// significant base-|A| digit (and likewise for g).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
strategy_responses(std::size_t pair_index, std::size_t x_size,
                   std::size_t y_size, std::size_t a_size,
                   std::size_t b_size) {
  std::size_t ng = 1;
  for (std::size_t y = 0; y < y_size; ++y) ng *= b_size;
  std::size_t f_index = pair_index / ng;
  std::size_t g_index = pair_index % ng;
  std::vector<std::size_t> f(x_size), g(y_size);
  for (std::size_t x = 0; x < x_size; ++x) {
    f[x] = f_index % a_size;
    f_index /= a_size;
  }
  for (std::size_t y = 0; y < y_size; ++y) {
    g[y] = g_index % b_size;
    g_index /= b_size;
  }
  return {std::move(f), std::move(g)};
}

inline Behavior strategy_behavior(std::size_t pair_index, std::size_t x_size,
                                  std::size_t y_size, std::size_t a_size,
                                  std::size_t b_size) {
  auto [f, g] = strategy_responses(pair_index, x_size, y_size, a_size, b_size);
  return deterministic_box(f, g, a_size, b_size);
}

/// Convex mixture of deterministic strategy pairs.
inline Behavior mix_strategies(const std::vector<double>& weights,
                               std::size_t x_size, std::size_t y_size,
                               std::size_t a_size, std::size_t b_size) {
  const std::size_t entries = x_size * y_size * a_size * b_size;
  std::vector<KahanSum> acc(entries);
  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (weights[s] == 0.0) continue;
    auto [f, g] = strategy_responses(s, x_size, y_size, a_size, b_size);
    for (std::size_t x = 0; x < x_size; ++x)
      for (std::size_t y = 0; y < y_size; ++y)
        acc[detail::behavior_index(y_size, a_size, b_size, x, y, f[x], g[y])]
            .add(weights[s]);
  }
  std::vector<double> table(entries);
  for (std::size_t i = 0; i < entries; ++i) table[i] = acc[i].value();
  return Behavior(x_size, y_size, a_size, b_size, std::move(table));
}

/// Bell-locality membership by linear programming: the behavior is local
/// exactly when some convex weight vector over all deterministic strategy
/// pairs reproduces its table. Solved with the in-repo phase-1 simplex; a
/// returned certificate is replayed against the input as a soundness check.
inline LocalityCertificate is_bell_local(const Behavior& beh, double tol = 1e-9,
                                         std::size_t max_strategies = 1000000) {
  const std::size_t n_strategies =
      strategy_count(beh.x_size(), beh.y_size(), beh.a_size(), beh.b_size(),
                     max_strategies);
  if (n_strategies > max_strategies)
    throw DimensionTooLarge("deterministic strategy count exceeds cap of " +
                            std::to_string(max_strategies));

  const std::size_t entries =
      beh.x_size() * beh.y_size() * beh.a_size() * beh.b_size();
  const std::size_t rows = entries + 1;  // table match + total weight one

  std::vector<double> a(rows * n_strategies, 0.0);
  for (std::size_t s = 0; s < n_strategies; ++s) {
    auto [f, g] =
        strategy_responses(s, beh.x_size(), beh.y_size(), beh.a_size(),
                           beh.b_size());
    for (std::size_t x = 0; x < beh.x_size(); ++x)
      for (std::size_t y = 0; y < beh.y_size(); ++y) {
        const std::size_t row = detail::behavior_index(
            beh.y_size(), beh.a_size(), beh.b_size(), x, y, f[x], g[y]);
        a[row * n_strategies + s] = 1.0;
      }
    a[entries * n_strategies + s] = 1.0;
  }
  std::vector<double> b = beh.table();
  b.push_back(1.0);

  // The weight-normalization row is one-sided (total weight at most one), so
  // the residual objective cannot be gamed by inflating the mixture mass.
  SimplexResult lp = l1_feasibility(rows, n_strategies, a, b, 1e-9, 1);
  if (!lp.optimal)
    throw ConvergenceFailure("locality LP hit its iteration cap");

  LocalityCertificate cert;
  cert.violation_gap = lp.objective / 2.0;  // total variation style witness
  cert.is_local = lp.objective <= std::max(tol, 1e-12);
  if (cert.is_local) {
    double total = 0.0;
    for (double& w : lp.x) {
      w = std::max(w, 0.0);
      total += w;
    }
    for (double& w : lp.x) w /= total;
    cert.weights = std::move(lp.x);
    const Behavior replay =
        mix_strategies(cert.weights, beh.x_size(), beh.y_size(), beh.a_size(),
                       beh.b_size());
    if (max_abs_difference(replay, beh) > 1e-7)
      throw Error("locality certificate failed its replay check");
  }
  return cert;
}

}  // namespace boxlab
