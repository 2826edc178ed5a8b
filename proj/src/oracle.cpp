#include "qmd/oracle.hpp"

#include "qmd/errors.hpp"
#include "qmd/simplex_geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace qmd {

namespace {

struct Evaluation {
  double value;
  Vec3 subgradient;
};

Evaluation evaluate(const Ensemble& ensemble, const Vec3& m) {
  Evaluation ev{-1.0, Vec3::Zero()};
  for (const auto& st : ensemble.members()) {
    const Vec3 d = m - st.weight * st.bloch;
    const double norm = d.norm();
    const double val = st.weight + norm;
    if (val > ev.value) {
      ev.value = val;
      ev.subgradient = norm > 0.0 ? Vec3(d / norm) : Vec3::Zero();
    }
  }
  return ev;
}

Vec3 unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    Vec3 v(normal(rng), normal(rng), normal(rng));
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

}  // namespace

double dual_objective(const Ensemble& ensemble, const Vec3& m) { return evaluate(ensemble, m).value; }

DualPoint dual_socp_from(const Ensemble& ensemble, const Vec3& start, double tol_opt, int max_iter) {
  constexpr double n = 3.0;
  DualPoint out;
  Vec3 c = start;
  Evaluation ev = evaluate(ensemble, c);
  out.m = c;
  out.value = ev.value;
  out.lower_bound = ensemble.max_weight();

  // m* lies within f(c) - q_i of every apex q_i v_i
  double radius = std::numeric_limits<double>::infinity();
  for (const auto& st : ensemble.members()) {
    radius = std::min(radius, (c - st.weight * st.bloch).norm() + ev.value - st.weight);
  }
  radius = 1.01 * radius + 1e-12;
  Eigen::Matrix3d P = Eigen::Matrix3d::Identity() * radius * radius;

  for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
    if (ev.value < out.value) {
      out.value = ev.value;
      out.m = c;
    }
    if (ev.subgradient.isZero()) {
      // the active cone is at its apex, where f equals its own lower bound q_i
      out.lower_bound = std::max(out.lower_bound, ev.value);
    } else {
      const Vec3 Pg = P * ev.subgradient;
      const double gPg = ev.subgradient.dot(Pg);
      if (!(gPg > 0.0)) break;
      const double width = std::sqrt(gPg);
      out.lower_bound = std::max(out.lower_bound, ev.value - width);
      if (out.value - out.lower_bound > tol_opt) {
        // deep cut at the best value seen so far
        const double alpha = (ev.value - out.value) / width;
        if (alpha >= 1.0) break;
        const Vec3 b = Pg / width;
        c -= ((1.0 + n * alpha) / (n + 1.0)) * b;
        P = (n * n / (n * n - 1.0)) * (1.0 - alpha * alpha) *
            (P - (2.0 * (1.0 + n * alpha) / ((n + 1.0) * (1.0 + alpha))) * (b * b.transpose()));
        P = 0.5 * (P + P.transpose()).eval();
        ev = evaluate(ensemble, c);
        continue;
      }
    }
    break;
  }
  out.lower_bound = std::min(out.lower_bound, out.value);
  out.gap_estimate = out.value - out.lower_bound;
  out.converged = out.gap_estimate <= tol_opt;
  return out;
}

DualPoint dual_socp(const Ensemble& ensemble, double tol_opt, int max_iter) {
  Vec3 start = Vec3::Zero();
  for (const auto& st : ensemble.members()) start += st.weight * st.weight * st.bloch;
  start /= ensemble.weight_sum();
  return dual_socp_from(ensemble, start, tol_opt, max_iter);
}

double helstrom_two(const Ensemble& ensemble) {
  if (ensemble.size() != 2) throw Error(ErrorCode::WrongN, "helstrom_two needs two states");
  const auto& a = ensemble[0];
  const auto& b = ensemble[1];
  const double l = (a.weight * a.bloch - b.weight * b.bloch).norm();
  const double e = std::abs(a.weight - b.weight);
  return std::max(a.weight, b.weight) + std::max(0.0, l - e) / 2.0;
}

Povm normalize_povm(std::span<const Matrix2c> operators) {
  Matrix2c total = Matrix2c::Zero();
  for (const auto& a : operators) total += a;
  Eigen::SelfAdjointEigenSolver<Matrix2c> eig(total);
  Eigen::Vector2d vals = eig.eigenvalues();
  const double floor = 1e-14 * std::max(1.0, vals.maxCoeff());
  for (Eigen::Index i = 0; i < 2; ++i) vals[i] = 1.0 / std::sqrt(std::max(vals[i], floor));
  const Matrix2c inv_sqrt = eig.eigenvectors() * vals.cast<std::complex<double>>().asDiagonal() *
                            eig.eigenvectors().adjoint();
  Povm povm;
  povm.reserve(operators.size());
  for (const auto& a : operators) povm.push_back(povm_element_from_operator(inv_sqrt * a * inv_sqrt));
  return povm;
}

Povm random_povm(std::mt19937_64& rng, std::size_t n) {
  if (n == 1) return {PovmElement{1.0, Vec3::Zero()}};
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<bool> keep(n, true);
  // now and then, drop up to n - 2 outcomes
  if (n > 2 && uniform(rng) < 0.3) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::size_t drops = std::uniform_int_distribution<std::size_t>(1, n - 2)(rng);
    while (drops > 0) {
      const std::size_t k = pick(rng);
      if (keep[k]) {
        keep[k] = false;
        --drops;
      }
    }
  }
  std::vector<Matrix2c> ops(n, Matrix2c::Zero());
  for (std::size_t k = 0; k < n; ++k) {
    if (!keep[k]) continue;
    const double purity = uniform(rng) < 0.7 ? 1.0 : uniform(rng);
    const double scale = 2.0 * uniform(rng);
    ops[k] = operator_matrix(scale, scale * purity * unit_vector(rng));
  }
  return normalize_povm(ops);
}

SampleReport primal_sampler(const Ensemble& ensemble, double p_guess, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SampleReport report;
  report.best = -1.0;
  for (int t = 0; t < trials; ++t) {
    Povm povm = random_povm(rng, ensemble.size());
    const double value = success_probability(ensemble, povm);
    if (value > report.best) {
      report.best = value;
      report.best_povm = std::move(povm);
    }
    ++report.trials;
  }
  report.violation = report.best > p_guess + 1e-9;
  return report;
}

}  // namespace qmd
