#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmd/bloch.hpp"
#include "qmd/errors.hpp"
#include "qmd/oracle.hpp"
#include "support/random_ensembles.hpp"

#include <cmath>
#include <complex>

using namespace qmd;
using qmd::testing::in_ball;
using qmd::testing::random_rotation;

namespace {

const Vec3 kX(1, 0, 0), kY(0, 1, 0), kZ(0, 0, 1);

Matrix2c pauli_sum(double t, const Vec3& b) {
  const std::complex<double> i(0, 1);
  Matrix2c m;
  m << t / 2 * (1 + b.z()), t / 2 * (b.x() - i * b.y()), t / 2 * (b.x() + i * b.y()), t / 2 * (1 - b.z());
  return m;
}

}  // namespace

TEST_CASE("from_density_matrix reads off trace and Bloch vector") {
  SUBCASE("maximally mixed") {
    const auto op = from_density_matrix(Matrix2c::Identity() / 2.0);
    CHECK(op.trace == doctest::Approx(1.0));
    CHECK(op.bloch.norm() == doctest::Approx(0.0));
  }
  SUBCASE("sigma_z eigenstate") {
    Matrix2c m = Matrix2c::Zero();
    m(0, 0) = 1.0;
    const auto op = from_density_matrix(m);
    CHECK(op.trace == doctest::Approx(1.0));
    CHECK((op.bloch - kZ).norm() < 1e-15);
  }
  SUBCASE("half sigma_x") {
    Matrix2c m = Matrix2c::Identity() / 2.0;
    m(0, 1) = m(1, 0) = 0.25;
    const auto op = from_density_matrix(m);
    CHECK((op.bloch - Vec3(0.5, 0, 0)).norm() < 1e-15);
  }
}

TEST_CASE("from_density_matrix rejects bad input") {
  Matrix2c m = Matrix2c::Identity() / 2.0;
  m(0, 1) = 0.3;
  try {
    from_density_matrix(m);
    FAIL("expected NonHermitian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitian);
  }
  try {
    from_density_matrix(-Matrix2c::Identity());
    FAIL("expected NonPositiveTrace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveTrace);
  }
}

TEST_CASE("density matrix round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> trace(0.1, 3.0);
  for (int k = 0; k < 200; ++k) {
    const Matrix2c m = pauli_sum(trace(rng), in_ball(rng));
    const auto op = from_density_matrix(m);
    CHECK((op.matrix() - m).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("operator helpers") {
  CHECK(min_eigenvalue(2.0, Vec3(0, 0, 1)) == doctest::Approx(0.5));
  const Matrix2c m = operator_matrix(1.0, Vec3(0.2, -0.1, 0.4));
  CHECK((m - pauli_sum(1.0, Vec3(0.2, -0.1, 0.4))).norm() < 1e-15);
  HermitianOperator2 a{1.0, Vec3(0, 0, 1.0 + 1e-12)};
  CHECK(a.is_psd());
  a.bloch = Vec3(0, 0, 1.01);
  CHECK_FALSE(a.is_psd());

  const PovmElement e{0.3, Vec3(0.6, 0, 0.8)};
  const auto back = povm_element_from_operator(povm_operator(e));
  CHECK(back.p == doctest::Approx(0.3));
  CHECK((back.u - e.u).norm() < 1e-12);
  CHECK(povm_element_from_operator(Matrix2c::Zero()).p == 0.0);
}

TEST_CASE("clamp_to_ball and ensemble validation") {
  CHECK(clamp_to_ball(Vec3(0, 0, 1 + 5e-10)).norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(clamp_to_ball(Vec3(0, 0, 1.1)), Error);
  CHECK_THROWS_AS(Ensemble({}), Error);
  CHECK_THROWS_AS(Ensemble({{-0.1, kZ}}), Error);
  CHECK_THROWS_AS(Ensemble({{0.0, kZ}, {0.0, -kZ}}), Error);
  CHECK_THROWS_AS(Ensemble(std::vector<WeightedState>(5, {0.2, kZ})), Error);
  CHECK_THROWS_AS(Ensemble({{std::nan(""), kZ}}), Error);

  const Ensemble ens({{2.0, kZ}, {3.0, -kZ}, {1.0, kX}});
  CHECK(ens.weight_sum() == 6.0);
  CHECK(ens.max_weight() == 3.0);
  const std::size_t idx[] = {2, 0};
  const Ensemble sub = ens.subset(idx);
  REQUIRE(sub.size() == 2);
  CHECK(sub[0].weight == 1.0);
  CHECK(sub[1].weight == 2.0);
}

TEST_CASE("validate_povm") {
  SUBCASE("identity") {
    const PovmElement e[] = {{1.0, Vec3::Zero()}};
    CHECK(validate_povm(e).ok);
  }
  SUBCASE("projective along z") {
    const PovmElement e[] = {{0.5, kZ}, {0.5, -kZ}};
    CHECK(validate_povm(e).ok);
  }
  SUBCASE("incomplete") {
    const PovmElement e[] = {{0.5, kZ}, {0.5, kZ}};
    const auto report = validate_povm(e);
    CHECK_FALSE(report.ok);
    CHECK(report.completeness == doctest::Approx(1.0));
    CHECK((report.completeness_vector - kZ).norm() < 1e-15);
  }
  SUBCASE("negative weight and long direction") {
    const PovmElement e[] = {{1.2, Vec3::Zero()}, {-0.2, 1.5 * kX}};
    const auto report = validate_povm(e);
    CHECK_FALSE(report.ok);
    CHECK(report.negativity == doctest::Approx(0.2));
    CHECK(report.direction_excess == doctest::Approx(0.5));
  }
}

TEST_CASE("success_probability examples") {
  const Ensemble orth({{0.5, kZ}, {0.5, -kZ}});
  const PovmElement along_z[] = {{0.5, kZ}, {0.5, -kZ}};
  CHECK(success_probability(orth, along_z) == doctest::Approx(1.0));

  const Ensemble ens({{0.2, kX}, {0.5, kY}, {0.3, -kZ}});
  const PovmElement guess_first[] = {{1.0, Vec3::Zero()}, {0.0, Vec3::Zero()}, {0.0, Vec3::Zero()}};
  CHECK(success_probability(ens, guess_first) == doctest::Approx(0.2));

  const Ensemble xs({{0.5, kX}, {0.5, -kX}});
  CHECK(success_probability(xs, along_z) == doctest::Approx(0.5));

  CHECK_THROWS_AS(success_probability(ens, along_z), Error);
}

TEST_CASE("success_probability properties") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + k % 3;
    const Ensemble a = qmd::testing::random_ensemble(rng, n);
    const Ensemble b = qmd::testing::random_ensemble(rng, n);
    const Povm povm = random_povm(rng, n);
    REQUIRE(validate_povm(povm).ok);

    // linear in the weights
    std::vector<WeightedState> mix_a, mix_b;
    for (std::size_t i = 0; i < n; ++i) {
      mix_a.push_back({2.0 * a[i].weight, a[i].bloch});
      mix_b.push_back({a[i].weight + b[i].weight, a[i].bloch});
    }
    const Ensemble b_on_a = [&] {
      std::vector<WeightedState> m;
      for (std::size_t i = 0; i < n; ++i) m.push_back({b[i].weight, a[i].bloch});
      return Ensemble(m);
    }();
    CHECK(success_probability(Ensemble(mix_a), povm) == doctest::Approx(2.0 * success_probability(a, povm)));
    CHECK(success_probability(Ensemble(mix_b), povm) ==
          doctest::Approx(success_probability(a, povm) + success_probability(b_on_a, povm)));

    // common rotation of states and directions
    const Eigen::Matrix3d rot = random_rotation(rng);
    Povm turned = povm;
    for (auto& e : turned) e.u = rot * e.u;
    CHECK(success_probability(qmd::testing::rotated(a, rot), turned) ==
          doctest::Approx(success_probability(a, povm)).epsilon(1e-12));

    // bounded by the total weight
    const double p = success_probability(a, povm);
    CHECK(p >= -1e-15);
    CHECK(p <= a.weight_sum() + 1e-12);
  }
}
