#ifndef QMD_NULL_CONDITIONS_HPP
#define QMD_NULL_CONDITIONS_HPP

// Analytic test for whether every optimal measurement of an ensemble with
// D = N - 1 has N non-zero elements, and the candidate point c_w it
// produces.
//
// The candidate c_w is the common point of the hyperboloid sheets
//     |c - s_i| - |c| = e_i,  i in I,
// inside the cone spanned by the opposite face. Writing Theta_i for the angle
// between c_w and s_i, every sheet gives
//     |c_w| = (l_i^2 - e_i^2) / (2 (l_i cos Theta_i + e_i)),
// and the angles are available in closed form: alpha (triangle) or beta and
// gamma (tetrahedron). The condition holds iff the sheets meet in the cone
// and c_w lies strictly inside the simplex, i.e. |c_w| < |v_g| where v_g is
// where the ray from s_0 through c_w leaves the opposite face.
//
// Indices are internal (see DisplacedGeometry); clause names print them
// one-based, so internal 0 appears as "1".

#include "qmd/bloch.hpp"
#include "qmd/simplex_geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmd {

struct HyperbolaCoefficients {
  std::size_t n = 0;
  PairTable X;
  PairTable Y;
  SiteTable Xbar = undefined_sites();  // n == 4 only
  SiteTable Ybar = undefined_sites();
  SiteTable Zbar = undefined_sites();
};

/// Requires l_i > e_i for i in I (ConditionPrerequisiteFailed) and
/// non-degenerate angles (DegenerateAngle).
HyperbolaCoefficients hyperbola_coeffs(const DisplacedGeometry& geom, const SimplexAngles& angles,
                                       double tol = kDefaultTol);

struct ConeAngles {
  SiteTable alpha = undefined_sites();  // n == 3
  SiteTable beta = undefined_sites();   // n == 4
  PairTable gamma;                      // gamma(z, x), n == 4
  SiteTable Gamma = undefined_sites();  // sin beta_x sin gamma(x, y), n == 4
  double theta_cap = 0.0;               // the single angle of the n == 2 case
};

/// alpha_x for both orderings of the triangle's pair. Throws
/// NegativeDiscriminant when 1 + X^2 - Y^2 < 0, which means the two
/// hyperbolas do not meet in the plane of the triangle.
ConeAngles alpha_angles(const HyperbolaCoefficients& coeffs);

struct BetaGammaResult {
  bool discriminant_ok = false;
  SiteTable discriminant = undefined_sites();  ///< Zbar^2 - (Xbar + sin^2 phi)(Ybar - sin^2 phi)
  std::size_t failed_site = 0;                 ///< first z with a negative discriminant
  ConeAngles angles;                           ///< filled only when discriminant_ok
};

BetaGammaResult beta_gamma_angles(const HyperbolaCoefficients& coeffs, const SimplexAngles& angles,
                                  const Tolerances& tol = {});

/// (l_i^2 - e_i^2) / (2 (l_i cos theta + e_i)) for member i.
double candidate_radius(const DisplacedGeometry& geom, double theta, std::size_t i,
                        double tol = kDefaultTol);

struct GaugePoint {
  double norm = 0.0;
  std::vector<double> tbar;  ///< weights of v_g on the opposite face; tbar[0] = 0
};

GaugePoint gauge_point(const DisplacedGeometry& geom, const SimplexAngles& simplex,
                       const ConeAngles& cone, double tol = kDefaultTol);

struct Clause {
  std::string name;
  bool holds = false;
  double residual = 0.0;  ///< signed margin; positive means satisfied
  bool boundary = false;  ///< |residual| within the strictness margin
};

struct ConditionReport {
  std::size_t n = 0;
  bool holds = false;
  std::vector<Clause> clauses;
  std::optional<double> cw_norm;
  std::optional<double> vg_norm;
  std::optional<std::vector<double>> tbar;
  std::optional<Vec3> cw;

  SiteTable radius = undefined_sites();  ///< candidate radius from each i in I
  std::optional<SimplexAngles> simplex;
  std::optional<HyperbolaCoefficients> coeffs;
  std::optional<ConeAngles> cone;
  /// |Gamma_z from x - Gamma_z from y|, the larger over z (n == 4)
  std::optional<double> gamma_choice_spread;

  /// "C0", "C1" or "C2" for n = 2, 3, 4.
  std::string label() const;
};

/// Evaluates the condition table clause by clause and stops at the first
/// failure. Throws WrongDimension unless D = n - 1 and n >= 2.
ConditionReport check_condition(const DisplacedGeometry& geom, const Tolerances& tol = {});

/// Report with the single failed clause "D = N-1", used when the affine
/// dimension rules the interior branch out before any clause is evaluated.
ConditionReport dimension_failure_report(const DisplacedGeometry& geom);

}  // namespace qmd

#endif  // QMD_NULL_CONDITIONS_HPP
