#include "qmd/null_conditions.hpp"

#include "qmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qmd {

namespace {

constexpr double kAcosSlack = 1e-12;

double checked_acos(double x, const char* what) {
  if (std::abs(x) <= 1.0) return std::acos(x);
  if (std::abs(x) <= 1.0 + kAcosSlack) return x > 0 ? 0.0 : std::numbers::pi;
  std::ostringstream os;
  os << what << ": arccos argument " << x << " outside [-1, 1]";
  throw Error(ErrorCode::NumericalInconsistency, os.str());
}

std::string label(std::size_t k) { return std::to_string(k + 1); }

class ClauseRecorder {
 public:
  ClauseRecorder(ConditionReport& report, double margin) : report_(report), margin_(margin) {}

  // a > b, evaluated as a - b > margin
  bool strict(std::string name, double residual) {
    Clause c{std::move(name), residual > margin_, residual, std::abs(residual) <= margin_};
    return push(std::move(c));
  }

  // a >= b, evaluated as a - b >= -margin
  bool relaxed(std::string name, double residual) {
    Clause c{std::move(name), residual >= -margin_, residual, std::abs(residual) <= margin_};
    return push(std::move(c));
  }

  bool fail(std::string name, const std::string& why) {
    Clause c{std::move(name) + " [" + why + "]", false, 0.0, true};
    return push(std::move(c));
  }

 private:
  bool push(Clause c) {
    const bool ok = c.holds;
    report_.clauses.push_back(std::move(c));
    return ok;
  }

  ConditionReport& report_;
  double margin_;
};

bool cone_clauses_n3(ClauseRecorder& rec, const SimplexAngles& simplex, const ConeAngles& cone) {
  const double th = simplex.theta(1, 2);
  return rec.strict("alpha_2 < theta_23", th - cone.alpha[1]) &&
         rec.strict("alpha_3 < theta_23", th - cone.alpha[2]) &&
         rec.strict("alpha_2 + alpha_3 < pi", std::numbers::pi - cone.alpha[1] - cone.alpha[2]);
}

bool cone_clauses_n4(ClauseRecorder& rec, const SimplexAngles& simplex, const ConeAngles& cone) {
  for (std::size_t z = 1; z < 4; ++z) {
    const auto [x, y] = complement_pair(z);
    const double phi = simplex.phi[z];
    const double gx = cone.gamma(z, x);
    const double gy = cone.gamma(z, y);
    const std::string zl = label(z);
    const bool ok =
        rec.strict("gamma_" + zl + label(x) + " < phi_" + zl, phi - gx) &&
        rec.strict("gamma_" + zl + label(y) + " < phi_" + zl, phi - gy) &&
        rec.strict("gamma_" + zl + label(x) + " + gamma_" + zl + label(y) + " < pi",
                   std::numbers::pi - gx - gy);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

HyperbolaCoefficients hyperbola_coeffs(const DisplacedGeometry& geom, const SimplexAngles& angles,
                                       double tol) {
  const std::size_t n = geom.size();
  if (n != 3 && n != 4) throw Error(ErrorCode::WrongN, "coefficients exist for n = 3 or 4");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(geom.l[i] > geom.e[i])) {
      throw Error(ErrorCode::ConditionPrerequisiteFailed, "l_" + label(i) + " <= e_" + label(i));
    }
  }

  HyperbolaCoefficients c;
  c.n = n;
  for (std::size_t x = 1; x < n; ++x) {
    for (std::size_t y = 1; y < n; ++y) {
      if (x == y) continue;
      const double th = angles.theta(x, y);
      const double sin_th = std::sin(th);
      if (!(sin_th > tol)) throw Error(ErrorCode::DegenerateAngle, "sin theta vanishes");
      const double ax = geom.l[x] * geom.l[x] - geom.e[x] * geom.e[x];
      const double ay = geom.l[y] * geom.l[y] - geom.e[y] * geom.e[y];
      const double den = geom.l[y] * ax * sin_th;
      c.X(x, y) = (geom.l[x] * ay - geom.l[y] * ax * std::cos(th)) / den;
      c.Y(x, y) = (geom.e[x] * ay - geom.e[y] * ax) / den;
    }
  }
  if (n == 4) {
    for (std::size_t z = 1; z < 4; ++z) {
      const auto [x, y] = complement_pair(z);
      const double phi = angles.phi[z];
      if (!(std::sin(phi) > tol)) throw Error(ErrorCode::DegenerateAngle, "sin phi vanishes");
      const double cp = std::cos(phi);
      const double xx = c.X(z, x), xy = c.X(z, y), yx = c.Y(z, x), yy = c.Y(z, y);
      c.Xbar[z] = xx * xx + xy * xy - 2.0 * xx * xy * cp;
      c.Ybar[z] = yx * yx + yy * yy - 2.0 * yx * yy * cp;
      c.Zbar[z] = xx * yx + xy * yy - (xx * yy + yx * xy) * cp;
    }
  }
  return c;
}

ConeAngles alpha_angles(const HyperbolaCoefficients& coeffs) {
  if (coeffs.n != 3) throw Error(ErrorCode::WrongN, "alpha angles exist for n = 3");
  ConeAngles out;
  for (auto [x, y] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 1}}) {
    const double X = coeffs.X(x, y);
    const double Y = coeffs.Y(x, y);
    const double disc = 1.0 + X * X - Y * Y;
    if (disc < 0.0) {
      std::ostringstream os;
      os << "1 + X^2 - Y^2 = " << disc << " for pair " << label(x) << label(y);
      throw Error(ErrorCode::NegativeDiscriminant, os.str());
    }
    out.alpha[x] = checked_acos((-X * Y + std::sqrt(disc)) / (1.0 + X * X), "alpha");
  }
  return out;
}

BetaGammaResult beta_gamma_angles(const HyperbolaCoefficients& coeffs, const SimplexAngles& angles,
                                  const Tolerances& tol) {
  if (coeffs.n != 4) throw Error(ErrorCode::WrongN, "beta/gamma angles exist for n = 4");
  BetaGammaResult r;
  r.discriminant_ok = true;
  SiteTable sin2 = undefined_sites();
  for (std::size_t z = 1; z < 4; ++z) {
    const double s = std::sin(angles.phi[z]);
    sin2[z] = s * s;
    r.discriminant[z] = coeffs.Zbar[z] * coeffs.Zbar[z] -
                        (coeffs.Xbar[z] + sin2[z]) * (coeffs.Ybar[z] - sin2[z]);
    if (r.discriminant_ok && r.discriminant[z] < -tol.strict) {
      r.discriminant_ok = false;
      r.failed_site = z;
    }
  }
  if (!r.discriminant_ok) return r;

  ConeAngles& a = r.angles;
  for (std::size_t z = 1; z < 4; ++z) {
    const double root = std::sqrt(std::max(r.discriminant[z], 0.0));
    a.beta[z] = checked_acos((-coeffs.Zbar[z] + root) / (coeffs.Xbar[z] + sin2[z]), "beta");
  }
  for (std::size_t z = 1; z < 4; ++z) {
    const double sb = std::sin(a.beta[z]);
    if (!(sb > tol.psd)) {
      throw Error(ErrorCode::DegenerateBeta, "sin beta_" + label(z) + " vanishes");
    }
    for (std::size_t w : complement_pair(z)) {
      a.gamma(z, w) =
          checked_acos((coeffs.X(z, w) * std::cos(a.beta[z]) + coeffs.Y(z, w)) / sb, "gamma");
    }
  }
  for (std::size_t z = 1; z < 4; ++z) {
    const auto [x, y] = complement_pair(z);
    a.Gamma[z] = std::sin(a.beta[x]) * std::sin(a.gamma(x, y));
  }
  return r;
}

double candidate_radius(const DisplacedGeometry& geom, double theta, std::size_t i, double tol) {
  const double l = geom.l.at(i);
  const double e = geom.e.at(i);
  if (!(l > e)) throw Error(ErrorCode::ConditionPrerequisiteFailed, "l_" + label(i) + " <= e_" + label(i));
  const double den = l * std::cos(theta) + e;
  if (!(den > tol)) throw Error(ErrorCode::DivisionNearZero, "l cos(Theta) + e vanishes");
  return (l * l - e * e) / (2.0 * den);
}

GaugePoint gauge_point(const DisplacedGeometry& geom, const SimplexAngles& simplex,
                       const ConeAngles& cone, double tol) {
  const std::size_t n = geom.size();
  GaugePoint g;
  g.tbar.assign(n, 0.0);
  switch (n) {
    case 2:
      g.tbar[1] = 1.0;
      g.norm = geom.l[1];
      break;
    case 3: {
      const double wx = geom.l[1] * std::sin(cone.alpha[1]);
      const double wy = geom.l[2] * std::sin(cone.alpha[2]);
      const double den = wx + wy;
      if (!(den > tol)) throw Error(ErrorCode::DegenerateDenominator, "sine sum vanishes");
      g.tbar[1] = wy / den;
      g.tbar[2] = wx / den;
      g.norm = geom.l[1] * geom.l[2] * std::sin(simplex.theta(1, 2)) / den;
      break;
    }
    case 4: {
      double den = 0.0;
      for (std::size_t z = 1; z < 4; ++z) den += simplex.area[z] * cone.Gamma[z];
      if (!(den > tol)) throw Error(ErrorCode::DegenerateDenominator, "area-Gamma sum vanishes");
      for (std::size_t z = 1; z < 4; ++z) g.tbar[z] = simplex.area[z] * cone.Gamma[z] / den;
      g.norm = 3.0 * simplex.volume / den;
      break;
    }
    default:
      throw Error(ErrorCode::WrongN, "gauge point exists for n = 2, 3, 4");
  }
  return g;
}

std::string ConditionReport::label() const {
  switch (n) {
    case 2: return "C0";
    case 3: return "C1";
    case 4: return "C2";
    default: return "-";
  }
}

ConditionReport dimension_failure_report(const DisplacedGeometry& geom) {
  ConditionReport r;
  r.n = geom.size();
  r.clauses.push_back(Clause{"D = N-1 (D = " + std::to_string(geom.dimension) + ")", false,
                             static_cast<double>(geom.dimension) - static_cast<double>(r.n - 1),
                             false});
  return r;
}

ConditionReport check_condition(const DisplacedGeometry& geom, const Tolerances& tol) {
  const std::size_t n = geom.size();
  if (n < 2 || n > 4 || geom.dimension != static_cast<int>(n) - 1) {
    throw Error(ErrorCode::WrongDimension, "condition requires D = N - 1 with N in {2,3,4}");
  }
  ConditionReport report;
  report.n = n;
  ClauseRecorder rec(report, tol.strict);

  // (a) every hyperboloid sheet meets the cone
  for (std::size_t i = 1; i < n; ++i) {
    if (!rec.strict("l_" + label(i) + " > e_" + label(i), geom.l[i] - geom.e[i])) return report;
  }

  GaugePoint gauge;
  try {
    if (n == 2) {
      ConeAngles cone;
      report.radius[1] = candidate_radius(geom, 0.0, 1, tol.psd);
      gauge = gauge_point(geom, SimplexAngles{}, cone, tol.psd);
      report.cone = cone;
    } else {
      report.simplex = simplex_angles(geom, tol.psd);
      report.coeffs = hyperbola_coeffs(geom, *report.simplex, tol.psd);
      const auto& coeffs = *report.coeffs;
      ConeAngles cone;
      if (n == 3) {
        // the hyperbolas must meet in the plane at all
        for (auto [x, y] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 1}}) {
          const double X = coeffs.X(x, y), Y = coeffs.Y(x, y);
          if (!rec.relaxed("1 + X_" + label(x) + label(y) + "^2 - Y_" + label(x) + label(y) +
                               "^2 >= 0",
                           1.0 + X * X - Y * Y)) {
            return report;
          }
        }
        cone = alpha_angles(coeffs);
        report.cone = cone;
        // (c) the intersection lies in the cone over the opposite edge
        if (!cone_clauses_n3(rec, *report.simplex, cone)) return report;
        for (std::size_t i = 1; i < 3; ++i) report.radius[i] = candidate_radius(geom, cone.alpha[i], i, tol.psd);
      } else {
        // (b) the three hyperboloids have a common real point
        const BetaGammaResult bg = beta_gamma_angles(coeffs, *report.simplex, tol);
        for (std::size_t z = 1; z < 4; ++z) {
          if (!rec.relaxed("Zbar_" + label(z) + "^2 >= (Xbar_" + label(z) + " + sin^2 phi_" +
                               label(z) + ")(Ybar_" + label(z) + " - sin^2 phi_" + label(z) + ")",
                           bg.discriminant[z])) {
            return report;
          }
        }
        cone = bg.angles;
        report.cone = cone;
        double spread = 0.0;
        for (std::size_t z = 1; z < 4; ++z) {
          const auto [x, y] = complement_pair(z);
          const double other = std::sin(cone.beta[y]) * std::sin(cone.gamma(y, x));
          spread = std::max(spread, std::abs(cone.Gamma[z] - other));
        }
        report.gamma_choice_spread = spread;
        // (c) the intersection lies in the cone over the opposite face
        if (!cone_clauses_n4(rec, *report.simplex, cone)) return report;
        for (std::size_t i = 1; i < 4; ++i) report.radius[i] = candidate_radius(geom, cone.beta[i], i, tol.psd);
      }
      // every sheet must report the same radius for a genuine common point
      double lo = report.radius[1], hi = report.radius[1];
      for (std::size_t i = 2; i < n; ++i) {
        lo = std::min(lo, report.radius[i]);
        hi = std::max(hi, report.radius[i]);
      }
      if (!rec.relaxed("radius consistency", tol.cross - (hi - lo))) return report;
      gauge = gauge_point(geom, *report.simplex, cone, tol.psd);
    }
  } catch (const Error& err) {
    rec.fail("evaluation", err.what());
    return report;
  }

  const double radius = report.radius[1];
  report.cw_norm = radius;
  report.vg_norm = gauge.norm;
  report.tbar = gauge.tbar;
  // (d) c_w lies in the relative interior of the simplex
  if (!rec.strict("|c_w| < |v_g|", gauge.norm - radius)) return report;

  Vec3 vg = Vec3::Zero();
  for (std::size_t i = 1; i < n; ++i) vg += gauge.tbar[i] * geom.s[i];
  report.cw = Vec3((radius / gauge.norm) * vg);
  report.holds = true;
  return report;
}

}  // namespace qmd
