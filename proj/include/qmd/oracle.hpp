#ifndef QMD_ORACLE_HPP
#define QMD_ORACLE_HPP

// Independent checks on the guessing probability.
//
// For 2x2 operators, K = (T/2) I + (m/2) . sigma dominates q_i rho_i iff
// T - q_i >= |m - q_i v_i|, so the dual problem min tr K collapses to the
// three-variable convex program
//
//     p_guess = min_m  max_i ( q_i + |m - q_i v_i| ).
//
// dual_socp solves it with a deep-cut ellipsoid method. Every step yields a
// valid lower bound f(c) - sqrt(g' P g) on the optimum, so the returned gap
// is a certificate rather than an estimate.

#include "qmd/bloch.hpp"

#include <cstdint>
#include <random>
#include <span>

namespace qmd {

struct DualPoint {
  Vec3 m = Vec3::Zero();   ///< tr[K sigma] at the best iterate
  double value = 0.0;      ///< objective at m, an upper bound on p_guess
  double lower_bound = 0.0;
  double gap_estimate = 0.0;  ///< value - lower_bound
  int iterations = 0;
  bool converged = false;     ///< gap_estimate <= tol_opt
};

/// max_i (q_i + |m - q_i v_i|)
double dual_objective(const Ensemble& ensemble, const Vec3& m);

DualPoint dual_socp(const Ensemble& ensemble, double tol_opt = 1e-9, int max_iter = 100000);

/// Same as dual_socp but started from an arbitrary point.
DualPoint dual_socp_from(const Ensemble& ensemble, const Vec3& start, double tol_opt = 1e-9,
                         int max_iter = 100000);

/// Closed-form two-state optimum q_max + max(0, l - e) / 2. Throws WrongN
/// unless the ensemble has exactly two members.
double helstrom_two(const Ensemble& ensemble);

/// Completes PSD operators A_i to a POVM through S^{-1/2} A_i S^{-1/2},
/// S = sum A_i.
Povm normalize_povm(std::span<const Matrix2c> operators);

/// A random n-outcome POVM: random rank-one operators, some of them dropped,
/// completed with normalize_povm.
Povm random_povm(std::mt19937_64& rng, std::size_t n);

struct SampleReport {
  double best = 0.0;
  bool violation = false;  ///< some sample beat p_guess by more than 1e-9
  int trials = 0;
  Povm best_povm;
};

SampleReport primal_sampler(const Ensemble& ensemble, double p_guess, int trials, std::uint64_t seed);

}  // namespace qmd

#endif  // QMD_ORACLE_HPP
