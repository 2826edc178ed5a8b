#include "qmd/bloch.hpp"

#include "qmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace qmd {

namespace {

const Matrix2c& pauli(int axis) {
  using C = std::complex<double>;
  static const Matrix2c sx = (Matrix2c() << C(0, 0), C(1, 0), C(1, 0), C(0, 0)).finished();
  static const Matrix2c sy = (Matrix2c() << C(0, 0), C(0, -1), C(0, 1), C(0, 0)).finished();
  static const Matrix2c sz = (Matrix2c() << C(1, 0), C(0, 0), C(0, 0), C(-1, 0)).finished();
  return axis == 0 ? sx : (axis == 1 ? sy : sz);
}

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

BlochVector clamp_to_ball(const BlochVector& b, double tol) {
  const double n = b.norm();
  if (!std::isfinite(n) || n > 1.0 + tol) {
    std::ostringstream os;
    os << "Bloch vector norm " << n << " exceeds 1";
    throw Error(ErrorCode::InvalidEnsemble, os.str());
  }
  return n > 1.0 ? BlochVector(b / n) : b;
}

Ensemble::Ensemble(std::vector<WeightedState> members, double tol) : members_(std::move(members)) {
  if (members_.empty() || members_.size() > kMaxSize) {
    throw Error(ErrorCode::InvalidEnsemble,
                "ensemble must have 1 to 4 members, got " + std::to_string(members_.size()));
  }
  for (auto& m : members_) {
    if (!std::isfinite(m.weight) || m.weight < 0.0) {
      throw Error(ErrorCode::InvalidEnsemble, "weights must be finite and non-negative");
    }
    if (!finite(m.bloch)) throw Error(ErrorCode::InvalidEnsemble, "non-finite Bloch vector");
    m.bloch = clamp_to_ball(m.bloch, tol);
    weight_sum_ += m.weight;
  }
  if (!(weight_sum_ > 0.0)) throw Error(ErrorCode::InvalidEnsemble, "total weight must be positive");
}

double Ensemble::max_weight() const noexcept {
  double best = 0.0;
  for (const auto& m : members_) best = std::max(best, m.weight);
  return best;
}

Ensemble Ensemble::subset(std::span<const std::size_t> indices) const {
  std::vector<WeightedState> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(members_.at(i));
  return Ensemble(std::move(picked));
}

Matrix2c operator_matrix(double trace, const Vec3& vector_part) {
  Matrix2c m = Matrix2c::Identity() * (trace / 2.0);
  for (int a = 0; a < 3; ++a) m += pauli(a) * (vector_part[a] / 2.0);
  return m;
}

double min_eigenvalue(double trace, const Vec3& vector_part) {
  return 0.5 * (trace - vector_part.norm());
}

Matrix2c HermitianOperator2::matrix() const { return operator_matrix(trace, trace * bloch); }

bool HermitianOperator2::is_psd(double tol) const { return trace >= -tol && bloch.norm() <= 1.0 + tol; }

HermitianOperator2 from_density_matrix(const Matrix2c& m, double tol) {
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!std::isfinite(asym) || asym > tol) {
    std::ostringstream os;
    os << "matrix deviates from its adjoint by " << asym;
    throw Error(ErrorCode::NonHermitian, os.str());
  }
  const Matrix2c h = 0.5 * (m + m.adjoint());
  const double trace = h.trace().real();
  if (!(trace > 0.0)) throw Error(ErrorCode::NonPositiveTrace, "trace must be positive");
  HermitianOperator2 out;
  out.trace = trace;
  // tr[A sigma_a] = trace * r_a
  for (int a = 0; a < 3; ++a) out.bloch[a] = (h * pauli(a)).trace().real() / trace;
  return out;
}

Matrix2c povm_operator(const PovmElement& e) { return operator_matrix(2.0 * e.p, 2.0 * e.p * e.u); }

PovmElement povm_element_from_operator(const Matrix2c& m) {
  const Matrix2c h = 0.5 * (m + m.adjoint());
  const double trace = h.trace().real();
  PovmElement e;
  if (trace <= 0.0) return e;
  e.p = trace / 2.0;
  for (int a = 0; a < 3; ++a) e.u[a] = (h * pauli(a)).trace().real() / trace;
  return e;
}

double PovmValidation::max_residual() const {
  return std::max({negativity, normalization, completeness, direction_excess});
}

PovmValidation validate_povm(std::span<const PovmElement> elements, double tol) {
  PovmValidation v;
  double sum = 0.0;
  for (const auto& e : elements) {
    v.negativity = std::max(v.negativity, -e.p);
    v.direction_excess = std::max(v.direction_excess, e.u.norm() - 1.0);
    sum += e.p;
    v.completeness_vector += e.p * e.u;
  }
  v.normalization = std::abs(sum - 1.0);
  v.completeness = v.completeness_vector.norm();
  v.ok = v.negativity <= tol && v.normalization <= tol && v.completeness <= tol &&
         v.direction_excess <= tol;
  return v;
}

double success_probability(const Ensemble& ensemble, std::span<const PovmElement> povm) {
  if (povm.size() != ensemble.size()) {
    throw Error(ErrorCode::LengthMismatch, "POVM has " + std::to_string(povm.size()) +
                                               " elements for " + std::to_string(ensemble.size()) +
                                               " states");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < povm.size(); ++i) {
    total += ensemble[i].weight * povm[i].p * (1.0 + povm[i].u.dot(ensemble[i].bloch));
  }
  return total;
}

}  // namespace qmd
