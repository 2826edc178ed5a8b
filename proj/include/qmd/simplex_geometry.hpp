#ifndef QMD_SIMPLEX_GEOMETRY_HPP
#define QMD_SIMPLEX_GEOMETRY_HPP

#include "qmd/bloch.hpp"

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace qmd {

/* Displaced geometry of an ensemble.

   Members are relabelled so that internal index 0 carries the largest
   weight q_0 (ties go to the lowest original index). With that anchor

       e_k = q_0 - q_k,    s_k = q_k v_k - q_0 v_0,    l_k = |s_k|,

   so s_0 = 0, e_0 = l_0 = 0 and e_k >= 0. Everything in the optimality
   conditions is expressed in terms of these quantities. The "opposite" set
   of indices {1, ..., n-1} is written I below.
 */
struct DisplacedGeometry {
  std::vector<std::size_t> order;  ///< order[k] = original index of internal member k
  std::vector<double> q;
  std::vector<Vec3> v;
  std::vector<double> e;
  std::vector<Vec3> s;
  std::vector<double> l;
  int dimension = 0;  ///< affine dimension D of {s_k}

  std::size_t size() const noexcept { return q.size(); }
};

DisplacedGeometry displaced_geometry(const Ensemble& ensemble, double tol_rank = 1e-8);

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

/// Per-site values indexed by internal index (entry 0 unused).
using SiteTable = std::array<double, 4>;

/// Values indexed by an ordered pair of internal indices.
struct PairTable {
  std::array<std::array<double, 4>, 4> values;

  PairTable() { for (auto& row : values) row.fill(kUndefined); }
  double& operator()(std::size_t x, std::size_t y) { return values[x][y]; }
  double operator()(std::size_t x, std::size_t y) const { return values[x][y]; }
};

inline SiteTable undefined_sites() { return {kUndefined, kUndefined, kUndefined, kUndefined}; }

struct SimplexAngles {
  std::size_t n = 0;
  PairTable theta;  ///< angle at s_0 between s_x and s_y (symmetric)
  SiteTable phi = undefined_sites();   ///< dihedral angle along the edge (s_0, s_z), n == 4
  SiteTable area = undefined_sites();  ///< area of (s_0, s_x, s_y) with {x,y} = I \ {z}, n == 4
  double volume = 0.0;                 ///< volume of the tetrahedron, n == 4
};

/// The two members of I other than z, ascending. Requires n == 4.
std::array<std::size_t, 2> complement_pair(std::size_t z);

/// Angles, face areas and volume of the displaced simplex. Requires
/// n in {3, 4} and D = n - 1; throws DegenerateSimplex otherwise or when a
/// length or sine falls below tol.
SimplexAngles simplex_angles(const DisplacedGeometry& geom, double tol = kDefaultTol);

/// Barycentric coordinates t of c with respect to affinely independent
/// vertices: sum t = 1 and sum t_k vertices_k = c (least squares when c is
/// off the affine hull). Throws DegenerateSimplex for dependent vertices.
std::vector<double> barycentric(std::span<const Vec3> vertices, const Vec3& c);

/// Unsigned angle between two non-zero vectors, in [0, pi].
double angle_between(const Vec3& a, const Vec3& b);

/// Angle between the half-planes spanned by (edge, a) and (edge, b).
double dihedral_angle(const Vec3& edge, const Vec3& a, const Vec3& b);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
double tetrahedron_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

}  // namespace qmd

#endif  // QMD_SIMPLEX_GEOMETRY_HPP
