#include "qmd/simplex_geometry.hpp"

#include "qmd/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qmd {

DisplacedGeometry displaced_geometry(const Ensemble& ensemble, double tol_rank) {
  const std::size_t n = ensemble.size();
  DisplacedGeometry g;
  g.order.resize(n);
  std::iota(g.order.begin(), g.order.end(), std::size_t{0});
  // stable: equal weights keep their original order
  std::stable_sort(g.order.begin(), g.order.end(), [&](std::size_t a, std::size_t b) {
    return ensemble[a].weight > ensemble[b].weight;
  });
  // only the anchor has to move; the remaining members keep ascending order
  const std::size_t anchor = g.order.front();
  g.order.clear();
  g.order.push_back(anchor);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != anchor) g.order.push_back(i);
  }

  for (std::size_t k = 0; k < n; ++k) {
    const auto& m = ensemble[g.order[k]];
    g.q.push_back(m.weight);
    g.v.push_back(m.bloch);
  }
  for (std::size_t k = 0; k < n; ++k) {
    g.e.push_back(k == 0 ? 0.0 : g.q[0] - g.q[k]);
    g.s.push_back(k == 0 ? Vec3::Zero() : Vec3(g.q[k] * g.v[k] - g.q[0] * g.v[0]));
    g.l.push_back(g.s.back().norm());
  }

  if (n > 1) {
    Eigen::MatrixXd cols(3, static_cast<Eigen::Index>(n - 1));
    for (std::size_t k = 1; k < n; ++k) cols.col(static_cast<Eigen::Index>(k - 1)) = g.s[k];
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(cols).singularValues();
    const double largest = sv.size() > 0 ? sv[0] : 0.0;
    // an all-zero configuration up to rounding has D = 0 regardless of scale
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * g.q[0];
    if (largest > floor) {
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] >= tol_rank * largest) ++g.dimension;
      }
    }
  }
  return g;
}

std::array<std::size_t, 2> complement_pair(std::size_t z) {
  switch (z) {
    case 1: return {2, 3};
    case 2: return {1, 3};
    case 3: return {1, 2};
    default: throw Error(ErrorCode::WrongN, "complement_pair needs z in {1,2,3}");
  }
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double dihedral_angle(const Vec3& edge, const Vec3& a, const Vec3& b) {
  return angle_between(edge.cross(a), edge.cross(b));
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double tetrahedron_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return std::abs((b - a).dot((c - a).cross(d - a))) / 6.0;
}

SimplexAngles simplex_angles(const DisplacedGeometry& geom, double tol) {
  const std::size_t n = geom.size();
  if ((n != 3 && n != 4) || geom.dimension != static_cast<int>(n) - 1) {
    throw Error(ErrorCode::DegenerateSimplex, "angles need a non-degenerate triangle or tetrahedron");
  }
  const double scale = *std::max_element(geom.l.begin(), geom.l.end());
  for (std::size_t k = 1; k < n; ++k) {
    if (geom.l[k] <= tol * scale) throw Error(ErrorCode::DegenerateSimplex, "vanishing edge");
  }

  SimplexAngles a;
  a.n = n;
  for (std::size_t x = 1; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double th = angle_between(geom.s[x], geom.s[y]);
      if (std::sin(th) <= tol) throw Error(ErrorCode::DegenerateSimplex, "collinear edges");
      a.theta(x, y) = a.theta(y, x) = th;
    }
  }
  if (n == 4) {
    const Vec3 origin = Vec3::Zero();
    for (std::size_t z = 1; z < 4; ++z) {
      const auto [x, y] = complement_pair(z);
      a.phi[z] = dihedral_angle(geom.s[z], geom.s[x], geom.s[y]);
      if (std::sin(a.phi[z]) <= tol) throw Error(ErrorCode::DegenerateSimplex, "flat dihedral angle");
      a.area[z] = triangle_area(origin, geom.s[x], geom.s[y]);
    }
    a.volume = tetrahedron_volume(origin, geom.s[1], geom.s[2], geom.s[3]);
  }
  return a;
}

std::vector<double> barycentric(std::span<const Vec3> vertices, const Vec3& c) {
  const std::size_t n = vertices.size();
  if (n == 0 || n > 4) throw Error(ErrorCode::DegenerateSimplex, "need 1 to 4 vertices");
  std::vector<double> t(n, 0.0);
  if (n == 1) {
    t[0] = 1.0;
    return t;
  }
  Eigen::MatrixXd edges(3, static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) edges.col(static_cast<Eigen::Index>(k - 1)) = vertices[k] - vertices[0];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(edges);
  qr.setThreshold(1e-12);
  if (qr.rank() < static_cast<Eigen::Index>(n - 1)) {
    throw Error(ErrorCode::DegenerateSimplex, "vertices are affinely dependent");
  }
  const Eigen::VectorXd rest = qr.solve(Vec3(c - vertices[0]));
  double sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    t[k] = rest[static_cast<Eigen::Index>(k - 1)];
    sum += t[k];
  }
  t[0] = 1.0 - sum;
  return t;
}

}  // namespace qmd
