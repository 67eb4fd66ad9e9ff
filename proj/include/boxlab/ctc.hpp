#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "boxlab/alphabet.hpp"
#include "boxlab/channel.hpp"
#include "boxlab/dist.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/numeric.hpp"

namespace boxlab {

/// Classical Deutsch-style evolution: a causality-respecting register R and a
/// causality-violating register V evolve jointly under a stochastic map
/// epsilon from (R x V) to (R' x V). The post-evolution register R' may live
/// on a different alphabet than R (the compiled circuits use a singleton R
/// carrying fixed inputs and an output-pair R').
struct CtcInstance {
  Alphabet r_in;
  Alphabet r_out;
  Alphabet v;
  Channel epsilon;  // input (R x V), output (R' x V)
  Dist r_init;      // over R

  CtcInstance(Alphabet r_in_, Alphabet r_out_, Alphabet v_, Channel epsilon_,
              Dist r_init_)
      : r_in(std::move(r_in_)), r_out(std::move(r_out_)), v(std::move(v_)),
        epsilon(std::move(epsilon_)), r_init(std::move(r_init_)) {
    if (epsilon.input_alphabet() != Alphabet::product({r_in.size(), v.size()}))
      throw AlphabetMismatch("epsilon input is not R x V");
    if (epsilon.output_alphabet() !=
        Alphabet::product({r_out.size(), v.size()}))
      throw AlphabetMismatch("epsilon output is not R' x V");
    if (r_init.alphabet().size() != r_in.size())
      throw AlphabetMismatch("r_init does not live on R");
  }

  /// Convenience for the square case R = R'.
  static CtcInstance square(Alphabet r, Alphabet v, Channel epsilon,
                            Dist r_init) {
    Alphabet r_out = r;
    return CtcInstance(std::move(r), std::move(r_out), std::move(v),
                       std::move(epsilon), std::move(r_init));
  }
};

/// Result of evolving a CtcInstance: the self-consistent state on V, the
/// final state on R', and solver diagnostics.
struct FixedPointReport {
  Dist consistent_v;
  Dist final_r;
  int fp_space_dim = 0;     // affine dimension of the fixed polytope
  double residual = 0.0;    // max |sum eps * r_init * v - v|, re-derived
  double entropy_bits = 0.0;
  int iterations = 0;
};

/// The stochastic map on V whose fixed points are the self-consistent
/// states: M(v'|v) = sum_{r',r} eps(r',v'|r,v) r_init(r).
inline Channel induced_map(const CtcInstance& inst) {
  const std::size_t nv = inst.v.size();
  const std::size_t nr = inst.r_in.size();
  const std::size_t nro = inst.r_out.size();
  std::vector<double> m(nv * nv, 0.0);
  for (std::size_t vin = 0; vin < nv; ++vin) {
    for (std::size_t r = 0; r < nr; ++r) {
      const double w = inst.r_init[r];
      if (w == 0.0) continue;
      const auto col = inst.epsilon.column(r * nv + vin);
      for (std::size_t ro = 0; ro < nro; ++ro)
        for (std::size_t vout = 0; vout < nv; ++vout)
          m[vin * nv + vout] += w * col[ro * nv + vout];
    }
  }
  return Channel(inst.v, inst.v, std::move(m));
}

namespace detail {

struct KernelInfo {
  Eigen::MatrixXd basis;  // n x k, orthonormal columns spanning ker(M - I)
  std::size_t k = 0;
};

/// Orthonormal basis of ker(M - I) by singular value decomposition.
/// Singular values inside [tol/10, 10 tol] are ambiguous and refuse to be
/// classified; values below the band count as zero.
inline KernelInfo stochastic_kernel(const Channel& m, double tol) {
  if (m.input_alphabet() != m.output_alphabet())
    throw AlphabetMismatch("fixed points need a square channel");
  const Eigen::Index n = Eigen::Index(m.input_alphabet().size());
  Eigen::MatrixXd a =
      Eigen::Map<const Eigen::MatrixXd>(m.data().data(), n, n);
  a -= Eigen::MatrixXd::Identity(n, n);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = sigma(i);
    if (s >= tol / 10.0 && s <= 10.0 * tol)
      throw NumericalRankAmbiguity(
          "singular value " + std::to_string(s) +
          " sits in the ambiguity band around the rank threshold " +
          std::to_string(tol));
    if (s < tol) ++k;
  }
  if (k == 0)
    throw Error("stochastic map without fixed space (numerically impossible)");
  KernelInfo info;
  info.k = k;
  info.basis = svd.matrixV().rightCols(Eigen::Index(k));
  return info;
}

/// Euclidean projection onto the affine set {B c : 1^T B c = 1} for an
/// orthonormal basis B with column-sum vector s = B^T 1.
inline Eigen::VectorXd affine_project(const Eigen::MatrixXd& basis,
                                      const Eigen::VectorXd& s,
                                      const Eigen::VectorXd& w) {
  Eigen::VectorXd c = basis.transpose() * w;
  c += s * ((1.0 - s.dot(c)) / s.squaredNorm());
  return basis * c;
}

inline double entropy_nats(const Eigen::VectorXd& v) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) > 0.0) h -= v(i) * std::log(v(i));
  return h;
}

struct MaxEntSolution {
  std::vector<double> v;
  int iterations = 0;
  double kkt_residual = 0.0;
  std::size_t kernel_dim = 0;
  Eigen::MatrixXd kernel_basis;
};

/// Entropy maximization over {v >= 0, sum v = 1, M v = v}.
///
/// The fixed polytope is the simplex spanned by the per-class stationary
/// distributions, whose supports are disjoint, so coordinates outside the
/// kernel's row support are zero on the whole polytope and get eliminated
/// first. On the remaining support the affine projection of the uniform
/// vector is strictly positive and serves as the interior start. The global
/// phase runs multiplicative updates projected back onto the affine fixed
/// space; a damped Newton step in tangent coordinates polishes the last
/// digits, where entropy differences drop below double resolution.
///
/// With optimize = false the solver stops at the feasible starting point.
inline MaxEntSolution solve_max_entropy(const Channel& m, double tol,
                                        int max_iterations = 10000,
                                        const std::vector<double>* start =
                                            nullptr,
                                        bool optimize = true) {
  const KernelInfo kernel = stochastic_kernel(m, tol);
  const std::size_t n = m.input_alphabet().size();
  const std::size_t k = kernel.k;

  // Coordinates forced to zero across the whole polytope: rows of the kernel
  // basis that vanish.
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i)
    if (kernel.basis.row(Eigen::Index(i)).cwiseAbs().maxCoeff() > 1e-10)
      support.push_back(i);
  const std::size_t ns = support.size();
  if (ns == 0) throw Error("empty fixed-point support");

  Eigen::MatrixXd basis(ns, k);
  for (std::size_t i = 0; i < ns; ++i)
    basis.row(Eigen::Index(i)) = kernel.basis.row(Eigen::Index(support[i]));
  const Eigen::VectorXd s = basis.transpose() * Eigen::VectorXd::Ones(ns);

  MaxEntSolution solution;
  solution.kernel_dim = k;

  Eigen::VectorXd v;
  if (start != nullptr) {
    if (start->size() != n)
      throw AlphabetMismatch("start vector has the wrong size");
    Eigen::VectorXd w(ns);
    for (std::size_t i = 0; i < ns; ++i) w(Eigen::Index(i)) = (*start)[support[i]];
    v = affine_project(basis, s, w);
  } else {
    v = affine_project(basis, s, Eigen::VectorXd::Constant(ns, 1.0 / double(ns)));
  }
  if (!optimize) {
    v = v.cwiseMax(0.0);
    v /= v.sum();
    std::vector<double> feasible(n, 0.0);
    for (std::size_t i = 0; i < ns; ++i)
      feasible[support[i]] = v(Eigen::Index(i));
    solution.v = std::move(feasible);
    solution.kernel_basis = kernel.basis;
    return solution;
  }

  // Numerical rescue for a start that grazes the boundary.
  for (int round = 0; round < 32 && v.minCoeff() <= 0.0; ++round) {
    v = v.cwiseMax(1e-12);
    v = affine_project(basis, s, v);
  }
  if (v.minCoeff() <= 0.0)
    throw ConvergenceFailure("could not find an interior fixed point");

  if (k >= 2 && ns >= 2) {
    // Tangent directions: kernel combinations with zero coordinate sum.
    Eigen::JacobiSVD<Eigen::MatrixXd> ssvd(s, Eigen::ComputeFullU);
    const Eigen::MatrixXd tangent =
        basis * ssvd.matrixU().rightCols(Eigen::Index(k - 1));

    const auto projected_gradient = [&](const Eigen::VectorXd& x) {
      const Eigen::VectorXd g = -(x.array().log() + 1.0).matrix();
      return (tangent * (tangent.transpose() * g)).eval();
    };

    double eta = 1.0;
    int iter = 0;
    Eigen::VectorXd d = projected_gradient(v);
    // Multiplicative ascent with step halving on non-improvement.
    for (; iter < max_iterations && d.cwiseAbs().maxCoeff() > tol; ++iter) {
      bool accepted = false;
      while (eta > 1e-13) {
        const Eigen::VectorXd stepped =
            (v.array() * (eta * d).array().min(40.0).max(-40.0).exp())
                .matrix();
        const Eigen::VectorXd candidate = affine_project(basis, s, stepped);
        if (candidate.minCoeff() > 0.0 &&
            entropy_nats(candidate) > entropy_nats(v)) {
          v = candidate;
          eta = std::min(eta * 2.0, 16.0);
          accepted = true;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted) break;  // below measurable improvement; Newton takes over
      d = projected_gradient(v);
    }
    // Damped Newton in tangent coordinates: solve (T^T D T) beta = T^T g
    // with D = diag(1/v). Shares the iteration budget with the global phase.
    for (int newton = 0; newton < 64 && iter < max_iterations; ++newton) {
      const Eigen::VectorXd g = -(v.array().log() + 1.0).matrix();
      const Eigen::VectorXd rhs = tangent.transpose() * g;
      if (rhs.cwiseAbs().maxCoeff() <= tol * 0.01) break;
      const Eigen::MatrixXd h =
          tangent.transpose() * v.cwiseInverse().asDiagonal() * tangent;
      Eigen::VectorXd beta = h.ldlt().solve(rhs);
      double damp = 1.0;
      while (damp > 1e-13 && (v + damp * (tangent * beta)).minCoeff() <= 0.0)
        damp *= 0.5;
      if (damp <= 1e-13) break;
      v += damp * (tangent * beta);
      ++iter;
    }
    d = projected_gradient(v);
    solution.iterations = iter;
    solution.kkt_residual = d.cwiseAbs().maxCoeff();
    if (solution.kkt_residual > tol)
      throw ConvergenceFailure("entropy maximizer KKT residual " +
                               std::to_string(solution.kkt_residual) +
                               " above tolerance");
  }

  std::vector<double> full(n, 0.0);
  for (std::size_t i = 0; i < ns; ++i) full[support[i]] = v(Eigen::Index(i));
  solution.v = std::move(full);
  solution.kernel_basis = kernel.basis;
  return solution;
}

}  // namespace detail

/// Affine description of the fixed polytope of a column-stochastic map:
/// orthonormal kernel basis of M - I, the polytope's affine dimension, and a
/// feasible point (relative-interior when the polytope is not a singleton).
struct FixedPointSet {
  int dim = 0;
  Eigen::MatrixXd kernel_basis;
  std::vector<double> feasible;
};

inline FixedPointSet fixed_point_set(const Channel& m, double tol = 1e-9) {
  detail::MaxEntSolution sol =
      detail::solve_max_entropy(m, tol, 10000, nullptr, /*optimize=*/false);
  FixedPointSet set;
  set.kernel_basis = std::move(sol.kernel_basis);
  set.dim = int(sol.kernel_dim) - 1;
  set.feasible = std::move(sol.v);
  return set;
}

/// The entropy-maximizing fixed point of a column-stochastic map; unique by
/// strict concavity of entropy on the (convex) fixed polytope.
inline Dist max_entropy_fixed_point(const Channel& m, double tol = 1e-9) {
  detail::MaxEntSolution sol = detail::solve_max_entropy(m, tol);
  return Dist::from_weights_clamped(m.input_alphabet(), std::move(sol.v));
}

/// Full evolution of an instance: solve for the self-consistent state on V,
/// then propagate the causality-respecting register.
inline FixedPointReport evolve(const CtcInstance& inst, double tol = 1e-9,
                               int max_iterations = 10000) {
  const Channel m = induced_map(inst);
  detail::MaxEntSolution sol = detail::solve_max_entropy(m, tol, max_iterations);

  const std::size_t nv = inst.v.size();
  const std::size_t nr = inst.r_in.size();
  const std::size_t nro = inst.r_out.size();

  // One pass over epsilon gives both the final R' state and the V'
  // occupation used for the re-derived consistency residual.
  std::vector<KahanSum> acc_r(nro);
  std::vector<KahanSum> acc_v(nv);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t vin = 0; vin < nv; ++vin) {
      const double w = inst.r_init[r] * sol.v[vin];
      if (w == 0.0) continue;
      const auto col = inst.epsilon.column(r * nv + vin);
      for (std::size_t ro = 0; ro < nro; ++ro)
        for (std::size_t vout = 0; vout < nv; ++vout) {
          const double mass = w * col[ro * nv + vout];
          acc_r[ro].add(mass);
          acc_v[vout].add(mass);
        }
    }
  }
  double residual = 0.0;
  for (std::size_t vout = 0; vout < nv; ++vout)
    residual = std::max(residual, std::abs(acc_v[vout].value() - sol.v[vout]));

  std::vector<double> final_r(nro);
  for (std::size_t ro = 0; ro < nro; ++ro) final_r[ro] = acc_r[ro].value();

  FixedPointReport report{
      Dist::from_weights_clamped(inst.v, std::move(sol.v)),
      Dist::from_weights_clamped(inst.r_out, std::move(final_r)),
      int(sol.kernel_dim) - 1,
      residual,
      0.0,
      sol.iterations};
  report.entropy_bits = entropy(report.consistent_v);
  return report;
}

}  // namespace boxlab
