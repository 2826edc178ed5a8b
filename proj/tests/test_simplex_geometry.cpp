#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "h_family.hpp"
#include "qmd/errors.hpp"
#include "qmd/simplex_geometry.hpp"
#include "support/random_ensembles.hpp"

#include <cmath>
#include <numbers>

using namespace qmd;
using std::numbers::pi;

namespace {

// Equal weights 2 and v_0 = 0 make s_k = 2 v_k = the given point.
DisplacedGeometry corner(const std::vector<Vec3>& s) {
  std::vector<WeightedState> members{{2.0, Vec3::Zero()}};
  for (const auto& v : s) members.push_back({2.0, v / 2.0});
  return displaced_geometry(Ensemble(members));
}

}  // namespace

TEST_CASE("displaced geometry examples") {
  SUBCASE("identical pure states") {
    const auto g = displaced_geometry(Ensemble({{0.7, Vec3(0, 0, 1)}, {0.3, Vec3(0, 0, 1)}}));
    CHECK(g.e[1] == doctest::Approx(0.4));
    CHECK((g.s[1] - Vec3(0, 0, -0.4)).norm() < 1e-15);
    CHECK(g.l[1] == doctest::Approx(0.4));
    CHECK(g.dimension == 1);
  }
  SUBCASE("orthogonal pure states") {
    const auto g = displaced_geometry(Ensemble({{0.5, Vec3(0, 0, 1)}, {0.5, Vec3(0, 0, -1)}}));
    CHECK(g.e[1] == 0.0);
    CHECK((g.s[1] - Vec3(0, 0, -1)).norm() < 1e-15);
    CHECK(g.l[1] == doctest::Approx(1.0));
    CHECK(g.dimension == 1);
  }
  SUBCASE("symmetric four-state family") {
    const auto g = displaced_geometry(qmd::cli::h_family(0.0));
    CHECK(g.dimension == 3);
    for (double e : g.e) CHECK(e == 0.0);
  }
}

TEST_CASE("anchor is the heaviest member, ties to the lowest index") {
  const Vec3 z(0, 0, 1);
  auto g = displaced_geometry(Ensemble({{0.2, z}, {0.3, -z}, {0.3, Vec3(1, 0, 0)}, {0.2, Vec3(0, 1, 0)}}));
  CHECK(g.order == std::vector<std::size_t>{1, 0, 2, 3});
  CHECK(g.s[0] == Vec3::Zero());
  CHECK(g.e[0] == 0.0);
  CHECK(g.l[0] == 0.0);
  for (double e : g.e) CHECK(e >= 0.0);

  g = displaced_geometry(Ensemble({{0.25, z}, {0.25, -z}, {0.25, Vec3(1, 0, 0)}, {0.25, Vec3(0, 1, 0)}}));
  CHECK(g.order == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("affine dimension") {
  CHECK(displaced_geometry(Ensemble({{1.0, Vec3(0, 0, 1)}})).dimension == 0);
  CHECK(corner({Vec3(1, 0, 0), Vec3(0.5, 0, 0)}).dimension == 1);
  CHECK(corner({Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)}).dimension == 2);
  CHECK(corner({Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)}).dimension == 3);
  // below the relative cutoff
  CHECK(corner({Vec3(1, 0, 0), Vec3(0, 1, 1e-10), Vec3(1, 1, 0)}).dimension == 2);
}

TEST_CASE("simplex angles examples") {
  SUBCASE("right angle") {
    const auto a = simplex_angles(corner({Vec3(1, 0, 0), Vec3(0, 1, 0)}));
    CHECK(a.theta(1, 2) == doctest::Approx(pi / 2));
    CHECK(a.theta(2, 1) == doctest::Approx(pi / 2));
  }
  SUBCASE("orthonormal corner") {
    const auto a = simplex_angles(corner({Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)}));
    for (std::size_t z = 1; z <= 3; ++z) {
      CHECK(a.phi[z] == doctest::Approx(pi / 2));
      CHECK(a.area[z] == doctest::Approx(0.5));
    }
    CHECK(a.volume == doctest::Approx(1.0 / 6.0));
  }
  SUBCASE("symmetric family") {
    // Edges |v_1 - v_2| = |v_3 - v_4| = 1 and sqrt(3/2) otherwise: an
    // isosceles tetrahedron with congruent faces, mirror-symmetric in 3 <-> 4.
    const auto g = displaced_geometry(qmd::cli::h_family(0.0));
    const auto a = simplex_angles(g);
    CHECK(a.theta(1, 2) == doctest::Approx(a.theta(1, 3)).epsilon(1e-12));
    CHECK(a.theta(2, 3) == doctest::Approx(std::acos(2.0 / 3.0)).epsilon(1e-12));
    CHECK(a.phi[2] == doctest::Approx(a.phi[3]).epsilon(1e-12));
    for (std::size_t z = 1; z <= 3; ++z) {
      CHECK(std::abs(a.area[z] - a.area[1]) < 1e-12);
      CHECK(std::abs(triangle_area(g.s[1], g.s[2], g.s[3]) - a.area[z]) < 1e-12);
    }
  }
  SUBCASE("degenerate input") {
    CHECK_THROWS_AS(simplex_angles(corner({Vec3(1, 0, 0), Vec3(2, 0, 0)})), Error);
    CHECK_THROWS_AS(simplex_angles(corner({Vec3(1, 0, 0)})), Error);
  }
}

TEST_CASE("complement pairs") {
  CHECK(complement_pair(1) == std::array<std::size_t, 2>{2, 3});
  CHECK(complement_pair(2) == std::array<std::size_t, 2>{1, 3});
  CHECK(complement_pair(3) == std::array<std::size_t, 2>{1, 2});
}

TEST_CASE("barycentric examples") {
  const std::vector<Vec3> tri{Vec3::Zero(), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  const auto at_vertex = barycentric(tri, tri[2]);
  CHECK(at_vertex[0] == doctest::Approx(0.0));
  CHECK(at_vertex[1] == doctest::Approx(0.0));
  CHECK(at_vertex[2] == doctest::Approx(1.0));

  const auto centroid = barycentric(tri, (tri[0] + tri[1] + tri[2]) / 3.0);
  for (double t : centroid) CHECK(t == doctest::Approx(1.0 / 3.0));

  const std::vector<Vec3> seg{Vec3::Zero(), Vec3(0, 0, 2)};
  const auto beyond = barycentric(seg, Vec3(0, 0, 3));
  CHECK(beyond[1] > 1.0);
  CHECK(beyond[0] < 0.0);

  const std::vector<Vec3> flat{Vec3::Zero(), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  CHECK_THROWS_AS(barycentric(flat, Vec3(1, 0, 0)), Error);
}

TEST_CASE("geometry is rotation invariant") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + k % 3;
    const Ensemble ens = qmd::testing::random_ensemble(rng, n);
    const Ensemble turned = qmd::testing::rotated(ens, qmd::testing::random_rotation(rng));
    const auto a = displaced_geometry(ens);
    const auto b = displaced_geometry(turned);
    REQUIRE(a.dimension == b.dimension);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(a.e[i] - b.e[i]) < 1e-10);
      CHECK(std::abs(a.l[i] - b.l[i]) < 1e-10);
    }
    if (n < 3 || a.dimension != static_cast<int>(n) - 1) continue;
    const auto sa = simplex_angles(a);
    const auto sb = simplex_angles(b);
    for (std::size_t x = 1; x < n; ++x) {
      for (std::size_t y = 1; y < n; ++y) {
        if (x != y) CHECK(std::abs(sa.theta(x, y) - sb.theta(x, y)) < 1e-10);
      }
    }
    if (n == 4) {
      for (std::size_t z = 1; z < 4; ++z) {
        CHECK(std::abs(sa.phi[z] - sb.phi[z]) < 1e-10);
        CHECK(std::abs(sa.area[z] - sb.area[z]) < 1e-10);
      }
      CHECK(std::abs(sa.volume - sb.volume) < 1e-10);
    }
  }
}

TEST_CASE("barycentric reconstructs points in the affine hull") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> coef(-1.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + k % 3;
    std::vector<Vec3> verts;
    for (std::size_t i = 0; i < n; ++i) verts.push_back(qmd::testing::in_ball(rng));
    std::vector<double> a(n);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) sum += (a[i] = coef(rng));
    a[n - 1] = 1.0 - sum;
    Vec3 c = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) c += a[i] * verts[i];

    const auto t = barycentric(verts, c);
    Vec3 back = Vec3::Zero();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      back += t[i] * verts[i];
      total += t[i];
    }
    CHECK((back - c).norm() < 1e-10);
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("tetrahedron volume equals a third of base times height") {
  std::mt19937_64 rng(23);
  int checked = 0;
  while (checked < 100) {
    const auto g = displaced_geometry(qmd::testing::random_ensemble(rng, 4));
    if (g.dimension != 3) continue;
    const auto a = simplex_angles(g);
    for (std::size_t z = 1; z < 4; ++z) {
      const auto [x, y] = complement_pair(z);
      const Vec3 normal = g.s[x].cross(g.s[y]).normalized();
      const double height = std::abs(normal.dot(g.s[z]));
      CHECK(std::abs(a.volume - a.area[z] * height / 3.0) < 1e-10);
      CHECK(std::abs(a.area[z] - triangle_area(Vec3::Zero(), g.s[x], g.s[y])) < 1e-14);
    }
    CHECK(std::abs(a.volume - tetrahedron_volume(g.s[0], g.s[1], g.s[2], g.s[3])) < 1e-14);
    ++checked;
  }
}

TEST_CASE("angle helpers") {
  CHECK(angle_between(Vec3(1, 0, 0), Vec3(-1, 0, 0)) == doctest::Approx(pi));
  CHECK(angle_between(Vec3(1, 0, 0), Vec3(1, 1, 0)) == doctest::Approx(pi / 4));
  CHECK(dihedral_angle(Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 1, 1)) == doctest::Approx(pi / 2));
  CHECK(dihedral_angle(Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(-1, 0, 5)) == doctest::Approx(pi));
}
