#ifndef QMD_SOLVER_HPP
#define QMD_SOLVER_HPP

#include "qmd/bloch.hpp"
#include "qmd/null_conditions.hpp"
#include "qmd/simplex_geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmd {

/// K = (trace/2) I + (vector_part/2) . sigma, so tr K = trace and
/// tr[K sigma] = vector_part.
struct DualOperator {
  double trace = 0.0;
  Vec3 vector_part = Vec3::Zero();
};

struct KktResiduals {
  double primal = 0.0;       ///< POVM constraint violation
  double dual = 0.0;         ///< spread of q_i rho_i + r_i rho~_i over i, plus infeasibility
  double slackness = 0.0;    ///< max |p_i r_i (1 + u_i . w_i)|
  double duality_gap = 0.0;  ///< |success probability - tr K|
  double psd = 0.0;          ///< max_j of -lambda_min(K - q_j rho_j), clipped at 0

  double max() const;
  bool valid(double tol) const { return max() <= tol; }
};

struct Branch {
  enum class Kind { Single, Interior, Subset };

  Kind kind = Kind::Single;
  std::size_t n = 0;  ///< size of the ensemble that was solved directly
  /// Subsets chosen on the way down, in original 0-based indices.
  std::vector<std::vector<std::size_t>> path;
  bool oracle_fallback = false;
  std::string warning;

  /// "Interior(4)", "Single" or "Subset({1,2,3})" (one-based).
  std::string to_string() const;
};

/// Agreement between the independent routes to the same interior optimum.
struct CrossChecks {
  double radius_spread = 0.0;  ///< spread of the candidate radius over I
  double hyperboloid = 0.0;    ///< max | |c - s_i| - |c| - e_i |
  double barycentric = 0.0;    ///< analytic t_i(c) versus a linear solve
  double closed_form = 0.0;    ///< four-state closed-form POVM versus the construction
  std::vector<std::string> warnings;
};

struct ConditionTrace {
  std::vector<std::size_t> members;  ///< original indices
  ConditionReport report;
};

struct Solution {
  double p_guess = 0.0;
  Povm povm;
  std::optional<std::vector<ComplementaryState>> complementary;
  std::vector<std::size_t> active_subset;
  Branch branch;
  KktResiduals certificate;
  DualOperator dual;
  /// Condition table at the top level and along the chosen subset path.
  std::vector<ConditionTrace> conditions;
  CrossChecks checks;
};

struct SolverOptions {
  Tolerances tol;
};

/// Optimal guessing probability and measurement. Runs the interior
/// construction when D = N - 1 and the condition table holds, otherwise takes
/// the best (N-1)-subset; subset answers are lifted back and certified
/// against the full ensemble. Throws InvalidEnsemble via Ensemble, or
/// CertificateFailure if the final answer cannot be certified.
Solution solve(const Ensemble& ensemble, const SolverOptions& options = {});

/// Builds the optimum from c_w. Requires report.holds; throws
/// CertificateFailure when the KKT residuals exceed tol.cert.
Solution interior_solution(const Ensemble& ensemble, const DisplacedGeometry& geom,
                           const ConditionReport& report, const SolverOptions& options = {});

/// KKT residuals of a candidate solution. When complementary states are
/// absent, they are recovered from solution.dual.
KktResiduals kkt_certificate(const Ensemble& ensemble, const Solution& solution);

/// r_j = tr K - q_j and w_j = (tr[K sigma] - q_j v_j) / r_j, with w_j = 0
/// when r_j <= tol.
std::vector<ComplementaryState> complementary_from_dual(const Ensemble& ensemble, const DualOperator& dual,
                                                        double tol = kDefaultTol);

}  // namespace qmd

#endif  // QMD_SOLVER_HPP
