#include "qmd/solver.hpp"

#include "qmd/errors.hpp"
#include "qmd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmd {

namespace {

std::string index_set(const std::vector<std::size_t>& members) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < members.size(); ++i) os << (i ? "," : "") << members[i] + 1;
  os << "}";
  return os.str();
}

Solution single_state(const Ensemble& ensemble) {
  Solution s;
  const auto& st = ensemble[0];
  s.p_guess = st.weight;
  s.povm = {PovmElement{1.0, Vec3::Zero()}};
  s.active_subset = {0};
  s.dual = DualOperator{st.weight, st.weight * st.bloch};
  s.complementary = std::vector<ComplementaryState>{ComplementaryState{}};
  s.branch.kind = Branch::Kind::Single;
  s.branch.n = 1;
  s.certificate = kkt_certificate(ensemble, s);
  return s;
}

// Four-state closed forms for p_i and u_i, compared against the
// construction from c_w. Returns the largest deviation.
double closed_form_deviation(const DisplacedGeometry& geom, const ConditionReport& report,
                             const std::vector<double>& p, const std::vector<Vec3>& u) {
  const auto& simplex = *report.simplex;
  const auto& cone = *report.cone;
  const double vol3 = 3.0 * simplex.volume;
  double weight_sum = 0.0, biased_sum = 0.0;
  Vec3 weighted_s = Vec3::Zero();
  for (std::size_t j = 1; j < 4; ++j) {
    const double ag = simplex.area[j] * cone.Gamma[j];
    weight_sum += ag;
    biased_sum += geom.e[j] * ag;
    weighted_s += ag * geom.s[j];
  }
  auto lcos = [&](std::size_t i) { return geom.l[i] * std::cos(cone.beta[i]) + geom.e[i]; };
  auto diff2 = [&](std::size_t i) { return geom.l[i] * geom.l[i] - geom.e[i] * geom.e[i]; };
  auto spread = [&](std::size_t i) {
    return geom.l[i] * geom.l[i] + geom.e[i] * geom.e[i] +
           2.0 * geom.l[i] * geom.e[i] * std::cos(cone.beta[i]);
  };

  double dev = 0.0;
  const double p0 = (2.0 * vol3 * lcos(1) - diff2(1) * weight_sum) /
                    (2.0 * lcos(1) * (vol3 + biased_sum));
  const Vec3 u0 = -weighted_s / vol3;
  dev = std::max({dev, std::abs(p0 - p[0]), (u0 - u[0]).norm()});
  for (std::size_t i = 1; i < 4; ++i) {
    const double ag = simplex.area[i] * cone.Gamma[i];
    const double pi = ag * spread(i) / (2.0 * lcos(i) * (vol3 + biased_sum));
    const Vec3 ui = (2.0 * vol3 * lcos(i) * geom.s[i] - diff2(i) * weighted_s) / (vol3 * spread(i));
    dev = std::max({dev, std::abs(pi - p[i]), (ui - u[i]).norm()});
  }
  return dev;
}

Solution lift(const Solution& sub, const std::vector<std::size_t>& members, const Ensemble& ensemble,
              const SolverOptions& options) {
  const std::size_t n = ensemble.size();
  Solution s;
  s.p_guess = sub.p_guess;
  s.povm.assign(n, PovmElement{});
  for (std::size_t k = 0; k < members.size(); ++k) s.povm[members[k]] = sub.povm[k];
  for (std::size_t k : sub.active_subset) s.active_subset.push_back(members[k]);
  std::sort(s.active_subset.begin(), s.active_subset.end());
  s.dual = sub.dual;
  s.complementary = complementary_from_dual(ensemble, s.dual, options.tol.psd);

  s.branch = sub.branch;
  s.branch.kind = Branch::Kind::Subset;
  s.branch.path.clear();
  s.branch.path.push_back(members);
  for (const auto& level : sub.branch.path) {
    std::vector<std::size_t> mapped;
    for (std::size_t k : level) mapped.push_back(members[k]);
    s.branch.path.push_back(std::move(mapped));
  }
  for (const auto& trace : sub.conditions) {
    ConditionTrace mapped{{}, trace.report};
    for (std::size_t k : trace.members) mapped.members.push_back(members[k]);
    s.conditions.push_back(std::move(mapped));
  }
  s.checks = sub.checks;
  s.certificate = kkt_certificate(ensemble, s);
  return s;
}

}  // namespace

double KktResiduals::max() const { return std::max({primal, dual, slackness, duality_gap, psd}); }

std::string Branch::to_string() const {
  std::string out;
  switch (kind) {
    case Kind::Single: out = "Single"; break;
    case Kind::Interior: out = "Interior(" + std::to_string(n) + ")"; break;
    case Kind::Subset: out = "Subset(" + index_set(path.back()) + ")"; break;
  }
  if (oracle_fallback) out += " [oracle fallback]";
  return out;
}

std::vector<ComplementaryState> complementary_from_dual(const Ensemble& ensemble, const DualOperator& dual,
                                                        double tol) {
  std::vector<ComplementaryState> out;
  out.reserve(ensemble.size());
  for (const auto& st : ensemble.members()) {
    ComplementaryState c;
    c.r = dual.trace - st.weight;
    if (c.r > tol) c.w = (dual.vector_part - st.weight * st.bloch) / c.r;
    out.push_back(c);
  }
  return out;
}

KktResiduals kkt_certificate(const Ensemble& ensemble, const Solution& solution) {
  const std::size_t n = ensemble.size();
  if (solution.povm.size() != n) throw Error(ErrorCode::LengthMismatch, "POVM size differs from ensemble");
  KktResiduals k;
  k.primal = validate_povm(solution.povm).max_residual();

  const std::vector<ComplementaryState> comp =
      solution.complementary ? *solution.complementary : complementary_from_dual(ensemble, solution.dual);
  if (comp.size() != n) throw Error(ErrorCode::LengthMismatch, "complementary states differ in size");

  // reconstruct K from every member and measure how far the copies disagree
  std::vector<double> traces(n);
  std::vector<Vec3> vectors(n);
  double trace = 0.0;
  Vec3 vector = Vec3::Zero();
  double infeasible = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    traces[i] = ensemble[i].weight + comp[i].r;
    vectors[i] = ensemble[i].weight * ensemble[i].bloch + comp[i].r * comp[i].w;
    trace += traces[i] / static_cast<double>(n);
    vector += vectors[i] / static_cast<double>(n);
    infeasible = std::max({infeasible, -comp[i].r, comp[i].w.norm() - 1.0});
  }
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    spread = std::max({spread, std::abs(traces[i] - trace), (vectors[i] - vector).norm()});
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = min_eigenvalue(trace - ensemble[j].weight, vector - ensemble[j].weight * ensemble[j].bloch);
    k.psd = std::max(k.psd, -lam);
  }
  k.dual = std::max({spread, infeasible, k.psd});

  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = solution.povm[i];
    k.slackness = std::max(k.slackness, std::abs(m.p * comp[i].r * (1.0 + m.u.dot(comp[i].w))));
  }
  k.duality_gap = std::abs(success_probability(ensemble, solution.povm) - trace);
  return k;
}

Solution interior_solution(const Ensemble& ensemble, const DisplacedGeometry& geom,
                           const ConditionReport& report, const SolverOptions& options) {
  if (!report.holds || !report.cw || !report.cw_norm || !report.vg_norm || !report.tbar) {
    throw Error(ErrorCode::ConditionPrerequisiteFailed, "interior solution needs a holding condition");
  }
  const std::size_t n = geom.size();
  const Vec3 c = *report.cw;
  const double ratio = *report.cw_norm / *report.vg_norm;

  std::vector<double> t(n);
  t[0] = 1.0 - ratio;
  for (std::size_t k = 1; k < n; ++k) t[k] = ratio * (*report.tbar)[k];

  Solution sol;
  CrossChecks& checks = sol.checks;
  const std::vector<double> t_linear = barycentric(geom.s, c);
  for (std::size_t k = 0; k < n; ++k) checks.barycentric = std::max(checks.barycentric, std::abs(t[k] - t_linear[k]));

  std::vector<double> r(n), p(n);
  std::vector<Vec3> u(n);
  double norm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 d = geom.s[k] - c;
    r[k] = d.norm();
    u[k] = d / r[k];
    p[k] = t[k] * r[k];
    norm += p[k];
  }
  for (double& pk : p) pk /= norm;

  for (std::size_t k = 1; k < n; ++k) {
    checks.hyperboloid = std::max(checks.hyperboloid, std::abs(r[k] - c.norm() - geom.e[k]));
  }
  double lo = report.radius[1], hi = report.radius[1];
  for (std::size_t k = 2; k < n; ++k) {
    lo = std::min(lo, report.radius[k]);
    hi = std::max(hi, report.radius[k]);
  }
  checks.radius_spread = hi - lo;
  if (n == 4) checks.closed_form = closed_form_deviation(geom, report, p, u);

  const double tol_cross = options.tol.cross;
  auto note = [&](const char* what, double value) {
    if (value > tol_cross) {
      std::ostringstream os;
      os << what << " disagreement " << value << " exceeds " << tol_cross;
      checks.warnings.push_back(os.str());
    }
  };
  note("barycentric", checks.barycentric);
  note("hyperboloid", checks.hyperboloid);
  note("radius", checks.radius_spread);
  note("closed-form", checks.closed_form);

  sol.p_guess = geom.q[0] + *report.cw_norm;
  sol.povm.assign(n, PovmElement{});
  std::vector<ComplementaryState> comp(n);
  for (std::size_t k = 0; k < n; ++k) {
    sol.povm[geom.order[k]] = PovmElement{p[k], u[k]};
    comp[geom.order[k]] = ComplementaryState{r[k], -u[k]};
  }
  for (std::size_t i = 0; i < n; ++i) sol.active_subset.push_back(i);
  sol.complementary = std::move(comp);
  sol.dual = DualOperator{geom.q[0] + r[0], geom.q[0] * geom.v[0] - r[0] * u[0]};
  sol.branch.kind = Branch::Kind::Interior;
  sol.branch.n = n;
  sol.certificate = kkt_certificate(ensemble, sol);
  if (!sol.certificate.valid(options.tol.cert)) {
    std::ostringstream os;
    os << "interior certificate residual " << sol.certificate.max() << " exceeds " << options.tol.cert;
    throw Error(ErrorCode::CertificateFailure, os.str());
  }
  return sol;
}

Solution solve(const Ensemble& ensemble, const SolverOptions& options) {
  const std::size_t n = ensemble.size();
  if (n == 1) return single_state(ensemble);

  std::vector<std::size_t> everyone(n);
  for (std::size_t i = 0; i < n; ++i) everyone[i] = i;

  const DisplacedGeometry geom = displaced_geometry(ensemble, options.tol.rank);
  ConditionTrace top{everyone, {}};
  std::vector<std::string> warnings;
  if (geom.dimension == static_cast<int>(n) - 1) {
    top.report = check_condition(geom, options.tol);
    if (top.report.holds) {
      try {
        Solution sol = interior_solution(ensemble, geom, top.report, options);
        sol.conditions = {std::move(top)};
        return sol;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::CertificateFailure) throw;
        warnings.push_back(std::string("interior branch rejected: ") + err.what());
      }
    }
  } else {
    top.report = dimension_failure_report(geom);
  }

  // subsets in lexicographic order; a later subset must win by more than
  // rounding to replace an earlier one
  const double tie = 1e-12 * ensemble.weight_sum();
  std::optional<Solution> best;
  std::vector<std::size_t> best_members;
  for (std::size_t skip = n; skip-- > 0;) {
    std::vector<std::size_t> members;
    double weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == skip) continue;
      members.push_back(i);
      weight += ensemble[i].weight;
    }
    if (!(weight > 0.0)) continue;
    Solution sub = solve(ensemble.subset(members), options);
    if (!best || sub.p_guess > best->p_guess + tie) {
      best = std::move(sub);
      best_members = std::move(members);
    }
  }

  Solution sol = lift(*best, best_members, ensemble, options);
  sol.conditions.insert(sol.conditions.begin(), std::move(top));
  sol.checks.warnings.insert(sol.checks.warnings.end(), warnings.begin(), warnings.end());

  if (sol.certificate.psd > options.tol.cert) {
    // K of the best subset does not dominate an excluded state: the subset
    // reduction was not valid here
    const DualPoint dual = dual_socp(ensemble);
    std::ostringstream os;
    os << "subset K violates K >= q_j rho_j by " << sol.certificate.psd << "; using dual value";
    sol.branch.oracle_fallback = true;
    sol.branch.warning = os.str();
    sol.p_guess = dual.value;
    sol.dual = DualOperator{dual.value, dual.m};
    sol.complementary = complementary_from_dual(ensemble, sol.dual, options.tol.psd);
    sol.certificate = kkt_certificate(ensemble, sol);
    return sol;
  }
  if (!sol.certificate.valid(options.tol.cert)) {
    std::ostringstream os;
    os << "subset certificate residual " << sol.certificate.max() << " exceeds " << options.tol.cert;
    throw Error(ErrorCode::CertificateFailure, os.str());
  }
  return sol;
}

}  // namespace qmd
