#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "boxlab/alphabet.hpp"
#include "boxlab/dist.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/numeric.hpp"

namespace boxlab {

/// Bipartite conditional distribution P(a,b|x,y) over finite input/output
/// alphabets. The table is stored in (x, y, a, b) row-major order, x slowest,
/// and every (x, y) block is a normalized distribution over (a, b).
class Behavior {
 public:
  Behavior(std::size_t x_size, std::size_t y_size, std::size_t a_size,
           std::size_t b_size, std::vector<double> table)
      : x_size_(x_size), y_size_(y_size), a_size_(a_size), b_size_(b_size),
        table_(std::move(table)) {
    if (x_size_ == 0 || y_size_ == 0 || a_size_ == 0 || b_size_ == 0)
      throw OutOfRange("behavior alphabet sizes must be >= 1");
    if (table_.size() != x_size_ * y_size_ * a_size_ * b_size_)
      throw AlphabetMismatch("behavior table size does not match alphabets");
    for (std::size_t x = 0; x < x_size_; ++x) {
      for (std::size_t y = 0; y < y_size_; ++y) {
        KahanSum block;
        for (std::size_t a = 0; a < a_size_; ++a) {
          for (std::size_t b = 0; b < b_size_; ++b) {
            double& v = table_[index(x, y, a, b)];
            if (v < 0.0) {
              if (v < -kConstructionTol)
                throw NegativeWeight("negative behavior entry " +
                                     std::to_string(v));
              v = 0.0;
            }
            block.add(v);
          }
        }
        const double total = block.value();
        if (std::abs(total - 1.0) > kValidationTol)
          throw NotNormalized("behavior block (" + std::to_string(x) + "," +
                              std::to_string(y) + ") sums to " +
                              std::to_string(total));
        for (std::size_t a = 0; a < a_size_; ++a)
          for (std::size_t b = 0; b < b_size_; ++b)
            table_[index(x, y, a, b)] /= total;
      }
    }
  }

  std::size_t x_size() const { return x_size_; }
  std::size_t y_size() const { return y_size_; }
  std::size_t a_size() const { return a_size_; }
  std::size_t b_size() const { return b_size_; }
  const std::vector<double>& table() const { return table_; }

  std::size_t index(std::size_t x, std::size_t y, std::size_t a,
                    std::size_t b) const {
    return ((x * y_size_ + y) * a_size_ + a) * b_size_ + b;
  }

  double at(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return table_[index(x, y, a, b)];
  }

  bool is_binary() const {
    return x_size_ == 2 && y_size_ == 2 && a_size_ == 2 && b_size_ == 2;
  }

  /// Output distribution over (a, b) for fixed inputs, as a two-factor Dist.
  Dist conditional(std::size_t x, std::size_t y) const {
    if (x >= x_size_ || y >= y_size_)
      throw OutOfRange("behavior input out of range");
    std::vector<double> w(a_size_ * b_size_);
    for (std::size_t a = 0; a < a_size_; ++a)
      for (std::size_t b = 0; b < b_size_; ++b)
        w[a * b_size_ + b] = at(x, y, a, b);
    return Dist::from_weights_clamped(Alphabet::product({a_size_, b_size_}),
                                      std::move(w));
  }

  friend bool operator==(const Behavior& p, const Behavior& q) {
    return p.x_size_ == q.x_size_ && p.y_size_ == q.y_size_ &&
           p.a_size_ == q.a_size_ && p.b_size_ == q.b_size_ &&
           p.table_ == q.table_;
  }

 private:
  std::size_t x_size_, y_size_, a_size_, b_size_;
  std::vector<double> table_;
};

/// Largest absolute table difference; behaviors must share alphabet sizes.
inline double max_abs_difference(const Behavior& p, const Behavior& q) {
  if (p.x_size() != q.x_size() || p.y_size() != q.y_size() ||
      p.a_size() != q.a_size() || p.b_size() != q.b_size())
    throw AlphabetMismatch("behavior dimensions differ");
  double m = 0.0;
  for (std::size_t i = 0; i < p.table().size(); ++i)
    m = std::max(m, std::abs(p.table()[i] - q.table()[i]));
  return m;
}

namespace detail {
inline std::size_t behavior_index(std::size_t y_size, std::size_t a_size,
                                  std::size_t b_size, std::size_t x,
                                  std::size_t y, std::size_t a, std::size_t b) {
  return ((x * y_size + y) * a_size + a) * b_size + b;
}
}  // namespace detail

/// The extremal no-signaling box: P(a,b|x,y) = 1/2 when a XOR b = x AND y,
/// and 0 otherwise.
inline Behavior pr_box() {
  std::vector<double> t(16, 0.0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          t[detail::behavior_index(2, 2, 2, x, y, a, b)] =
              ((a ^ b) == (x & y)) ? 0.5 : 0.0;
  return Behavior(2, 2, 2, 2, std::move(t));
}

/// Local deterministic box a = f(x), b = g(y).
inline Behavior deterministic_box(const std::vector<std::size_t>& f,
                                  const std::vector<std::size_t>& g,
                                  std::size_t a_size = 2,
                                  std::size_t b_size = 2) {
  const std::size_t x_size = f.size();
  const std::size_t y_size = g.size();
  if (x_size == 0 || y_size == 0)
    throw OutOfRange("deterministic box needs non-empty response maps");
  std::vector<double> t(x_size * y_size * a_size * b_size, 0.0);
  for (std::size_t x = 0; x < x_size; ++x) {
    if (f[x] >= a_size) throw OutOfRange("f(x) out of output range");
    for (std::size_t y = 0; y < y_size; ++y) {
      if (g[y] >= b_size) throw OutOfRange("g(y) out of output range");
      t[detail::behavior_index(y_size, a_size, b_size, x, y, f[x], g[y])] = 1.0;
    }
  }
  return Behavior(x_size, y_size, a_size, b_size, std::move(t));
}

/// Binary family interpolating between uniform noise (p = 1/2), the best
/// classical box (p = 3/4) and the PR box (p = 1): the winning constraint
/// a XOR b = xy holds with probability p under every input pair.
inline Behavior isotropic_chsh_box(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw OutOfRange("isotropic parameter must lie in [0, 1]");
  std::vector<double> t(16, 0.0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          t[detail::behavior_index(2, 2, 2, x, y, a, b)] =
              ((a ^ b) == (x & y)) ? p / 2.0 : (1.0 - p) / 2.0;
  return Behavior(2, 2, 2, 2, std::move(t));
}

/// Per-direction no-signaling deviations. Alice's direction measures how much
/// her output marginal moves when Bob's input changes, and vice versa.
struct NoSignalingReport {
  bool no_signaling = true;
  double max_dev_alice = 0.0;  // marginal of a vs. choice of y
  double max_dev_bob = 0.0;    // marginal of b vs. choice of x
  struct Row {
    char party;           // 'A' or 'B'
    std::size_t output;   // a or b
    std::size_t own_input;
    double deviation;     // max over the other party's input pairs
  };
  std::vector<Row> rows;
};

/// Checks that each party's output marginal is independent of the other
/// party's input, up to tol.
inline NoSignalingReport is_no_signaling(const Behavior& beh, double tol) {
  NoSignalingReport report;
  // Alice: P(a|x) must not depend on y.
  for (std::size_t a = 0; a < beh.a_size(); ++a) {
    for (std::size_t x = 0; x < beh.x_size(); ++x) {
      std::vector<double> marg(beh.y_size());
      for (std::size_t y = 0; y < beh.y_size(); ++y) {
        KahanSum s;
        for (std::size_t b = 0; b < beh.b_size(); ++b) s.add(beh.at(x, y, a, b));
        marg[y] = s.value();
      }
      double dev = 0.0;
      for (std::size_t y1 = 0; y1 + 1 < marg.size(); ++y1)
        for (std::size_t y2 = y1 + 1; y2 < marg.size(); ++y2)
          dev = std::max(dev, std::abs(marg[y1] - marg[y2]));
      report.rows.push_back({'A', a, x, dev});
      report.max_dev_alice = std::max(report.max_dev_alice, dev);
    }
  }
  // Bob: P(b|y) must not depend on x.
  for (std::size_t b = 0; b < beh.b_size(); ++b) {
    for (std::size_t y = 0; y < beh.y_size(); ++y) {
      std::vector<double> marg(beh.x_size());
      for (std::size_t x = 0; x < beh.x_size(); ++x) {
        KahanSum s;
        for (std::size_t a = 0; a < beh.a_size(); ++a) s.add(beh.at(x, y, a, b));
        marg[x] = s.value();
      }
      double dev = 0.0;
      for (std::size_t x1 = 0; x1 + 1 < marg.size(); ++x1)
        for (std::size_t x2 = x1 + 1; x2 < marg.size(); ++x2)
          dev = std::max(dev, std::abs(marg[x1] - marg[x2]));
      report.rows.push_back({'B', b, y, dev});
      report.max_dev_bob = std::max(report.max_dev_bob, dev);
    }
  }
  report.no_signaling =
      report.max_dev_alice <= tol && report.max_dev_bob <= tol;
  return report;
}

/// Probability of satisfying a XOR b = xy under uniformly random inputs.
/// Binary behaviors only.
inline double chsh_success(const Behavior& beh) {
  if (!beh.is_binary())
    throw NotBinary("CHSH score requires binary inputs and outputs");
  KahanSum s;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) s.add(beh.at(x, y, a, b));
  return 0.25 * s.value();
}

}  // namespace boxlab
