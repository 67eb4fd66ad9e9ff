#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace boxlab {

// Tolerance policy used across the library: values produced internally are
// kept normalized to kConstructionTol; user-provided data is accepted up to
// kValidationTol and renormalized.
inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kValidationTol = 1e-9;

/// Compensated (Kahan) accumulator. Several invariants in this library are
/// stated at 1e-12 over sums with up to 2^16 terms, which plain left-to-right
/// accumulation does not reach.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double kahan_total(std::span<const double> xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

/// x * log2(x) with the 0 * log 0 = 0 convention.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace boxlab
