#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "boxlab/errors.hpp"

namespace boxlab {

struct SimplexResult {
  bool optimal = false;   // false only when the iteration cap was hit
  double objective = 0.0;
  std::vector<double> x;  // primal solution over the structural variables
  int iterations = 0;
};

/// Dense primal simplex with Bland's rule, specialized to the phase-1 style
/// L1 feasibility problem
///
///   minimize  sum(u) + sum(v)
///   s.t.      A x + u - v = b,   x, u, v >= 0.
///
/// The optimum is min ||A x - b||_1 over the nonnegative orthant; it is zero
/// exactly when A x = b has a nonnegative solution. The last
/// `one_sided_tail_rows` rows get no v column, so their constraint tightens
/// to A x <= b. Solution x is returned; pivot decisions use `tol`.
inline SimplexResult l1_feasibility(std::size_t rows, std::size_t cols,
                                    const std::vector<double>& a,
                                    const std::vector<double>& b,
                                    double tol = 1e-9,
                                    std::size_t one_sided_tail_rows = 0) {
  const std::size_t n = cols + 2 * rows;  // structural + residual pair columns
  const std::size_t width = n + 1;        // + right-hand side
  std::vector<double> t(rows * width, 0.0);
  std::vector<double> cost(n, 0.0);
  std::vector<std::size_t> basis(rows);

  for (std::size_t i = 0; i < rows; ++i) {
    const bool one_sided = i + one_sided_tail_rows >= rows;
    if (one_sided && b[i] < 0.0)
      throw Error("one-sided feasibility row needs a nonnegative rhs");
    const double sign = b[i] >= 0.0 ? 1.0 : -1.0;
    for (std::size_t j = 0; j < cols; ++j) t[i * width + j] = sign * a[i * cols + j];
    t[i * width + cols + i] = sign;                         // u_i
    if (!one_sided) t[i * width + cols + rows + i] = -sign; // v_i
    t[i * width + n] = sign * b[i];
    basis[i] = b[i] >= 0.0 ? cols + i : cols + rows + i;
  }
  for (std::size_t j = cols; j < n; ++j) cost[j] = 1.0;

  // Reduced-cost row for the initial residual basis (basis costs are all 1).
  std::vector<double> z(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double colsum = 0.0;
    for (std::size_t i = 0; i < rows; ++i) colsum += t[i * width + j];
    z[j] = cost[j] - colsum;
  }

  SimplexResult result;
  const int max_iterations = 2000 + 200 * int(rows + cols);
  for (int iter = 0; iter < max_iterations; ++iter) {
    // Bland: entering column = lowest index with negative reduced cost.
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (z[j] < -tol) {
        enter = j;
        break;
      }
    }
    if (enter == n) {
      result.optimal = true;
      result.iterations = iter;
      break;
    }
    // Ratio test; ties broken by the lowest basis label (Bland).
    std::size_t leave = rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      const double aij = t[i * width + enter];
      if (aij > tol) {
        const double ratio = t[i * width + n] / aij;
        if (ratio < best_ratio - 1e-15 ||
            (ratio < best_ratio + 1e-15 &&
             (leave == rows || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == rows)
      throw Error("unbounded feasibility LP (this should not happen)");

    // Pivot.
    const double piv = t[leave * width + enter];
    for (std::size_t j = 0; j <= n; ++j) t[leave * width + j] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave) continue;
      const double f = t[i * width + enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n; ++j)
        t[i * width + j] -= f * t[leave * width + j];
    }
    const double zf = z[enter];
    for (std::size_t j = 0; j < n; ++j) z[j] -= zf * t[leave * width + j];
    basis[leave] = enter;
    result.iterations = iter + 1;
  }

  result.x.assign(cols, 0.0);
  double residual_mass = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double value = t[i * width + n];
    if (basis[i] < cols)
      result.x[basis[i]] = std::max(value, 0.0);
    else
      residual_mass += std::max(value, 0.0);
  }
  result.objective = residual_mass;
  return result;
}

}  // namespace boxlab
