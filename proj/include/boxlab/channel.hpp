#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boxlab/alphabet.hpp"
#include "boxlab/dist.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/numeric.hpp"

namespace boxlab {

/// Stochastic map between finite alphabets. The matrix is indexed
/// (output, input) and stored column-major by input, so column i is the
/// output distribution for input symbol i. Every column sums to one.
class Channel {
 public:
  /// data must hold input_size * output_size entries, column-major by input
  /// (entry (o | i) at data[i * output_size + o]). Columns are validated the
  /// same way Dist validates weight vectors.
  Channel(Alphabet input, Alphabet output, std::vector<double> data)
      : input_(std::move(input)), output_(std::move(output)),
        data_(std::move(data)) {
    if (data_.size() != input_.size() * output_.size())
      throw AlphabetMismatch("channel matrix size does not match alphabets");
    const std::size_t out_n = output_.size();
    for (std::size_t i = 0; i < input_.size(); ++i) {
      KahanSum col_sum;
      for (std::size_t o = 0; o < out_n; ++o) {
        double& v = data_[i * out_n + o];
        if (v < 0.0) {
          if (v < -kConstructionTol)
            throw NegativeWeight("negative channel entry " + std::to_string(v));
          v = 0.0;
        }
        col_sum.add(v);
      }
      const double total = col_sum.value();
      if (std::abs(total - 1.0) > kValidationTol)
        throw NotNormalized("channel column " + std::to_string(i) +
                            " sums to " + std::to_string(total));
      for (std::size_t o = 0; o < out_n; ++o) data_[i * out_n + o] /= total;
    }
  }

  static Channel identity(const Alphabet& alphabet) {
    std::vector<double> data(alphabet.size() * alphabet.size(), 0.0);
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      data[i * alphabet.size() + i] = 1.0;
    return Channel(alphabet, alphabet, std::move(data));
  }

  /// Channel that ignores its input and always emits q.
  static Channel constant(Alphabet input, const Dist& q) {
    std::vector<double> data;
    data.reserve(input.size() * q.size());
    for (std::size_t i = 0; i < input.size(); ++i)
      data.insert(data.end(), q.weights().begin(), q.weights().end());
    return Channel(std::move(input), q.alphabet(), std::move(data));
  }

  /// Deterministic channel o = f(i).
  static Channel deterministic(Alphabet input, Alphabet output,
                               const std::function<std::size_t(std::size_t)>& f) {
    std::vector<double> data(input.size() * output.size(), 0.0);
    for (std::size_t i = 0; i < input.size(); ++i) {
      const std::size_t o = f(i);
      if (o >= output.size())
        throw OutOfRange("deterministic channel target out of range");
      data[i * output.size() + o] = 1.0;
    }
    return Channel(std::move(input), std::move(output), std::move(data));
  }

  const Alphabet& input_alphabet() const { return input_; }
  const Alphabet& output_alphabet() const { return output_; }

  double at(std::size_t out_sym, std::size_t in_sym) const {
    return data_[in_sym * output_.size() + out_sym];
  }

  std::span<const double> column(std::size_t in_sym) const {
    return {data_.data() + in_sym * output_.size(), output_.size()};
  }

  const std::vector<double>& data() const { return data_; }

  Dist apply(const Dist& d) const {
    if (d.alphabet() != input_)
      throw AlphabetMismatch("distribution alphabet does not match channel input");
    std::vector<KahanSum> sums(output_.size());
    for (std::size_t i = 0; i < input_.size(); ++i) {
      const double w = d[i];
      if (w == 0.0) continue;
      const auto col = column(i);
      for (std::size_t o = 0; o < output_.size(); ++o) sums[o].add(col[o] * w);
    }
    std::vector<double> out(output_.size());
    for (std::size_t o = 0; o < out.size(); ++o) out[o] = sums[o].value();
    return Dist::from_weights_clamped(output_, std::move(out));
  }

 private:
  Alphabet input_;
  Alphabet output_;
  std::vector<double> data_;
};

inline Dist channel_apply(const Channel& c, const Dist& d) {
  return c.apply(d);
}

}  // namespace boxlab
