#ifndef QMD_BLOCH_HPP
#define QMD_BLOCH_HPP

// Qubit states, measurements and 2x2 Hermitian operators in Bloch form.
//
// A 2x2 Hermitian operator A with positive trace is written
//     A = (tr A / 2) (I + r . sigma)
// and every quantity downstream of this header is real 3-vector arithmetic
// on the Bloch vectors r. Complex matrices appear only in the conversion
// helpers below.

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace qmd {

using Vec3 = Eigen::Vector3d;
using BlochVector = Eigen::Vector3d;
using Matrix2c = Eigen::Matrix2cd;

inline constexpr double kDefaultTol = 1e-9;

/// Tolerances shared by every module. Defaults are the library-wide values.
struct Tolerances {
  double psd = 1e-9;      ///< PSD, completeness and Bloch-norm checks
  double rank = 1e-8;     ///< relative singular-value cutoff for the affine dimension
  double strict = 1e-10;  ///< margin used when evaluating strict inequalities
  double cert = 1e-8;     ///< accepted KKT residual
  double cross = 1e-7;    ///< accepted disagreement between two closed forms
};

/// Returns b unchanged when |b| <= 1, b/|b| when 1 < |b| <= 1 + tol, and
/// throws InvalidEnsemble otherwise.
BlochVector clamp_to_ball(const BlochVector& b, double tol = kDefaultTol);

struct WeightedState {
  double weight = 0.0;
  BlochVector bloch = BlochVector::Zero();
};

/// Ordered list of one to four weighted qubit states. Weights need not sum
/// to one.
class Ensemble {
 public:
  static constexpr std::size_t kMaxSize = 4;

  /// Validates and clamps the members; throws InvalidEnsemble on a bad size,
  /// a negative or non-finite weight, a zero total weight, or a Bloch vector
  /// outside the unit ball by more than tol.
  explicit Ensemble(std::vector<WeightedState> members, double tol = kDefaultTol);

  std::size_t size() const noexcept { return members_.size(); }
  const WeightedState& operator[](std::size_t i) const { return members_[i]; }
  std::span<const WeightedState> members() const noexcept { return members_; }
  double weight_sum() const noexcept { return weight_sum_; }
  double max_weight() const noexcept;

  /// Sub-ensemble made of the listed members, in the given order.
  Ensemble subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<WeightedState> members_;
  double weight_sum_ = 0.0;
};

/// One POVM element M = p (I + u . sigma).
struct PovmElement {
  double p = 0.0;
  BlochVector u = BlochVector::Zero();
};

using Povm = std::vector<PovmElement>;

/// Dual variables (r, rho~) with rho~ = (I + w . sigma) / 2.
struct ComplementaryState {
  double r = 0.0;
  BlochVector w = BlochVector::Zero();
};

/// A 2x2 Hermitian operator with positive trace, (trace/2)(I + bloch . sigma).
struct HermitianOperator2 {
  double trace = 0.0;
  BlochVector bloch = BlochVector::Zero();

  Matrix2c matrix() const;
  bool is_psd(double tol = kDefaultTol) const;
};

/// Smallest eigenvalue of (trace/2) I + (vector_part/2) . sigma.
double min_eigenvalue(double trace, const Vec3& vector_part);

/// (trace/2) I + (vector_part/2) . sigma as a complex matrix.
Matrix2c operator_matrix(double trace, const Vec3& vector_part);

/// Reads (trace, Bloch vector) off a Hermitian matrix. Throws NonHermitian
/// when m deviates from its adjoint by more than tol and NonPositiveTrace
/// when tr m <= 0.
HermitianOperator2 from_density_matrix(const Matrix2c& m, double tol = kDefaultTol);

Matrix2c povm_operator(const PovmElement& e);

/// Bloch form of a PSD matrix; a zero matrix maps to p = 0, u = 0.
PovmElement povm_element_from_operator(const Matrix2c& m);

struct PovmValidation {
  bool ok = true;
  double negativity = 0.0;      ///< max(0, -min p_i)
  double normalization = 0.0;   ///< |sum p_i - 1|
  double completeness = 0.0;    ///< |sum p_i u_i|
  double direction_excess = 0.0;  ///< max(0, max |u_i| - 1)
  Vec3 completeness_vector = Vec3::Zero();

  double max_residual() const;
};

PovmValidation validate_povm(std::span<const PovmElement> elements, double tol = kDefaultTol);

/// sum_i q_i p_i (1 + u_i . v_i); throws LengthMismatch if the sizes differ.
double success_probability(const Ensemble& ensemble, std::span<const PovmElement> povm);

}  // namespace qmd

#endif  // QMD_BLOCH_HPP
