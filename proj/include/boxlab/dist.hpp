#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boxlab/alphabet.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/numeric.hpp"

namespace boxlab {

/// Probability distribution over a finite alphabet. Immutable after
/// construction; weights are normalized to machine precision.
class Dist {
 public:
  /// Validating constructor. Entries in (-1e-12, 0) are round-off and get
  /// clamped to zero; anything more negative is rejected. The sum may
  /// deviate from 1 by at most 1e-9 and is renormalized away.
  Dist(Alphabet alphabet, std::vector<double> weights)
      : Dist(std::move(alphabet), std::move(weights), kValidationTol) {}

  static Dist uniform(Alphabet alphabet) {
    std::vector<double> w(alphabet.size(), 1.0 / double(alphabet.size()));
    return Dist(std::move(alphabet), std::move(w), Unchecked{});
  }

  static Dist point(Alphabet alphabet, std::size_t symbol) {
    if (symbol >= alphabet.size())
      throw OutOfRange("point-mass symbol out of range");
    std::vector<double> w(alphabet.size(), 0.0);
    w[symbol] = 1.0;
    return Dist(std::move(alphabet), std::move(w), Unchecked{});
  }

  /// Construction path for internally computed weight vectors: clamps
  /// round-off negatives and renormalizes without the user-facing checks.
  static Dist from_weights_clamped(Alphabet alphabet,
                                   std::vector<double> weights) {
    return Dist(std::move(alphabet), std::move(weights), kValidationTol);
  }

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

  friend bool operator==(const Dist& a, const Dist& b) {
    return a.alphabet_ == b.alphabet_ && a.weights_ == b.weights_;
  }

 private:
  struct Unchecked {};
  Dist(Alphabet alphabet, std::vector<double> weights, Unchecked)
      : alphabet_(std::move(alphabet)), weights_(std::move(weights)) {}

  Dist(Alphabet alphabet, std::vector<double> weights, double sum_tol)
      : alphabet_(std::move(alphabet)), weights_(std::move(weights)) {
    if (weights_.size() != alphabet_.size())
      throw AlphabetMismatch("weight vector length does not match alphabet");
    for (double& w : weights_) {
      if (w < 0.0) {
        if (w < -kConstructionTol)
          throw NegativeWeight("negative weight " + std::to_string(w));
        w = 0.0;
      }
    }
    const double total = kahan_total(weights_);
    if (std::abs(total - 1.0) > sum_tol)
      throw NotNormalized("weights sum to " + std::to_string(total));
    for (double& w : weights_) w /= total;
  }

  Alphabet alphabet_;
  std::vector<double> weights_;
};

/// Validating constructor in free-function form.
inline Dist dist_new(Alphabet alphabet, std::vector<double> weights) {
  return Dist(std::move(alphabet), std::move(weights));
}

/// Shannon entropy in bits.
inline double entropy(const Dist& d) {
  KahanSum s;
  for (double w : d.weights()) s.add(xlog2x(w));
  return std::max(-s.value(), 0.0);
}

/// Product distribution; the result's factor list concatenates the operands'
/// factor lists, with the first operand's index varying slowest.
inline Dist tensor(const Dist& d1, const Dist& d2) {
  Alphabet alphabet = Alphabet::product(d1.alphabet(), d2.alphabet());
  std::vector<double> w;
  w.reserve(d1.size() * d2.size());
  for (double a : d1.weights())
    for (double b : d2.weights()) w.push_back(a * b);
  return Dist::from_weights_clamped(std::move(alphabet), std::move(w));
}

/// Marginal onto the given factor indices (0-based, in original factor
/// order); all other factors are summed out.
inline Dist marginal(const Dist& d, const std::vector<std::size_t>& keep) {
  const Alphabet& alphabet = d.alphabet();
  if (!alphabet.is_product())
    throw NotProduct("marginal requires a product alphabet");
  if (keep.empty()) throw NotProduct("marginal keep-set must be non-empty");

  std::vector<std::size_t> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) !=
      keep_sorted.end())
    throw OutOfRange("duplicate factor index in keep-set");
  if (keep_sorted.back() >= alphabet.factor_count())
    throw OutOfRange("keep-set factor index out of range");

  if (keep_sorted.size() == alphabet.factor_count()) return d;

  std::vector<std::size_t> kept_sizes;
  for (std::size_t f : keep_sorted) kept_sizes.push_back(alphabet.shape()[f]);
  Alphabet out_alphabet = kept_sizes.size() == 1
                              ? Alphabet::simple(kept_sizes[0])
                              : Alphabet::product(kept_sizes);

  std::vector<KahanSum> sums(out_alphabet.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::vector<std::size_t> digits = alphabet.digits_of(i);
    std::size_t out_idx = 0;
    for (std::size_t f : keep_sorted)
      out_idx = out_idx * alphabet.shape()[f] + digits[f];
    sums[out_idx].add(d[i]);
  }
  std::vector<double> w(out_alphabet.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = sums[i].value();
  return Dist::from_weights_clamped(std::move(out_alphabet), std::move(w));
}

/// Merge consecutive factors into groups, e.g. regrouped(d, {2, 1}) turns a
/// three-factor distribution into a two-factor one. The flat weights are
/// unchanged; only the declared factor structure moves.
inline Dist regrouped(const Dist& d, const std::vector<std::size_t>& groups) {
  const auto& shape = d.alphabet().shape();
  std::vector<std::size_t> new_shape;
  std::size_t f = 0;
  for (std::size_t g : groups) {
    if (g == 0 || f + g > shape.size())
      throw NotProduct("factor grouping does not match alphabet");
    std::size_t merged = 1;
    for (std::size_t j = 0; j < g; ++j) merged *= shape[f++];
    new_shape.push_back(merged);
  }
  if (f != shape.size())
    throw NotProduct("factor grouping does not cover all factors");
  return Dist::from_weights_clamped(Alphabet::product(new_shape),
                                    std::vector<double>(d.weights()));
}

/// Mutual information in bits between the two factors of a joint
/// distribution, I = H(M1) + H(M2) - H(joint).
inline double mutual_information(const Dist& joint) {
  if (joint.alphabet().factor_count() != 2)
    throw NotProduct("mutual information requires exactly two factors");
  const Dist m1 = marginal(joint, {0});
  const Dist m2 = marginal(joint, {1});
  const double i = entropy(m1) + entropy(m2) - entropy(joint);
  return std::max(i, 0.0);
}

}  // namespace boxlab
