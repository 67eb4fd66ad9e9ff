#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boxlab/errors.hpp"

namespace boxlab {

/// Finite index set a distribution or channel leg lives on.
///
/// An alphabet may be declared as a product of factors; symbols of a product
/// are flat indices in row-major order with the FIRST factor varying slowest.
/// This index order is fixed across the whole library and its file formats.
class Alphabet {
 public:
  /// Plain alphabet {0, ..., n-1}.
  static Alphabet simple(std::size_t n) { return Alphabet({n}, {}); }

  /// Plain alphabet with one label per symbol; labels must be distinct.
  static Alphabet with_labels(std::vector<std::string> labels) {
    const std::size_t n = labels.size();
    return Alphabet({n}, std::move(labels));
  }

  /// Product alphabet with the given factor sizes (all >= 1).
  static Alphabet product(std::vector<std::size_t> factor_sizes) {
    return Alphabet(std::move(factor_sizes), {});
  }

  /// Product of two existing alphabets; factor lists concatenate.
  static Alphabet product(const Alphabet& first, const Alphabet& second) {
    std::vector<std::size_t> shape = first.shape_;
    shape.insert(shape.end(), second.shape_.begin(), second.shape_.end());
    return Alphabet(std::move(shape), {});
  }

  std::size_t size() const { return size_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t factor_count() const { return shape_.size(); }
  bool is_product() const { return shape_.size() >= 2; }
  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Flat index of a factor-digit tuple (first factor slowest).
  std::size_t index_of(std::span<const std::size_t> digits) const {
    if (digits.size() != shape_.size())
      throw AlphabetMismatch("digit tuple length does not match factor count");
    std::size_t idx = 0;
    for (std::size_t f = 0; f < shape_.size(); ++f) {
      if (digits[f] >= shape_[f]) throw OutOfRange("factor digit out of range");
      idx = idx * shape_[f] + digits[f];
    }
    return idx;
  }

  /// Factor digits of a flat index (inverse of index_of).
  std::vector<std::size_t> digits_of(std::size_t index) const {
    if (index >= size_) throw OutOfRange("symbol index out of range");
    std::vector<std::size_t> digits(shape_.size());
    for (std::size_t f = shape_.size(); f-- > 0;) {
      digits[f] = index % shape_[f];
      index /= shape_[f];
    }
    return digits;
  }

  /// Compatibility ignores labels: two alphabets match when their factor
  /// structure does.
  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.shape_ == b.shape_;
  }
  friend bool operator!=(const Alphabet& a, const Alphabet& b) {
    return !(a == b);
  }

 private:
  Alphabet(std::vector<std::size_t> shape, std::vector<std::string> labels)
      : shape_(std::move(shape)), labels_(std::move(labels)) {
    if (shape_.empty()) throw Error("alphabet needs at least one factor");
    size_ = 1;
    for (std::size_t s : shape_) {
      if (s == 0) throw Error("alphabet factor size must be >= 1");
      if (size_ > (std::size_t(1) << 48) / s)
        throw DimensionTooLarge("product alphabet too large");
      size_ *= s;
    }
    if (!labels_.empty()) {
      if (labels_.size() != size_)
        throw Error("label count does not match alphabet size");
      std::set<std::string> uniq(labels_.begin(), labels_.end());
      if (uniq.size() != labels_.size())
        throw Error("alphabet labels must be distinct");
    }
  }

  std::size_t size_ = 0;
  std::vector<std::size_t> shape_;
  std::vector<std::string> labels_;
};

}  // namespace boxlab
