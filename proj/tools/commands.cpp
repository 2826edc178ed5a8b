#include "commands.hpp"

#include "ensemble_file.hpp"
#include "qmd/errors.hpp"
#include "qmd/oracle.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace qmd::cli {

namespace {

using nlohmann::json;

json vec(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json sites(const SiteTable& t, std::size_t n) {
  json a = json::array();
  for (std::size_t i = 1; i < n; ++i) a.push_back(std::isfinite(t[i]) ? json(t[i]) : json(nullptr));
  return a;
}

json report_json(const ConditionTrace& trace) {
  const ConditionReport& r = trace.report;
  json j;
  j["members"] = json::array();
  for (std::size_t m : trace.members) j["members"].push_back(m + 1);
  j["label"] = r.label();
  j["holds"] = r.holds;
  j["clauses"] = json::array();
  for (const auto& c : r.clauses) {
    j["clauses"].push_back({{"name", c.name}, {"holds", c.holds}, {"residual", c.residual}, {"boundary", c.boundary}});
  }
  j["cw_norm"] = optional_number(r.cw_norm);
  j["vg_norm"] = optional_number(r.vg_norm);
  j["cw"] = r.cw ? vec(*r.cw) : json(nullptr);
  j["tbar"] = r.tbar ? json(*r.tbar) : json(nullptr);
  if (r.n >= 2) j["radius"] = sites(r.radius, r.n);
  if (r.cone && r.n == 3) j["alpha"] = sites(r.cone->alpha, r.n);
  if (r.cone && r.n == 4) {
    j["beta"] = sites(r.cone->beta, r.n);
    j["Gamma"] = sites(r.cone->Gamma, r.n);
  }
  return j;
}

std::string fixed(double x, int digits = 12) {
  if (std::abs(x) < 0.5 * std::pow(10.0, -digits)) x = 0.0;
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

std::string sci(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << x;
  return os.str();
}

std::string triple(const Vec3& v) {
  return "(" + fixed(v[0], 9) + ", " + fixed(v[1], 9) + ", " + fixed(v[2], 9) + ")";
}

void print_report(std::ostream& os, const ConditionTrace& trace) {
  const ConditionReport& r = trace.report;
  os << "condition " << r.label() << " on {";
  for (std::size_t i = 0; i < trace.members.size(); ++i) os << (i ? "," : "") << trace.members[i] + 1;
  os << "}: " << (r.holds ? "holds" : "fails") << "\n";
  for (const auto& c : r.clauses) {
    os << "  " << std::left << std::setw(44) << c.name << std::right << (c.holds ? "  yes" : "  no ")
       << "  residual " << sci(c.residual) << (c.boundary ? "  (boundary)" : "") << "\n";
  }
  if (r.cw_norm && r.vg_norm) {
    os << "  |c_w| = " << fixed(*r.cw_norm) << "   |v_g| = " << fixed(*r.vg_norm) << "\n";
  }
}

void print_solution(std::ostream& os, const Solution& s) {
  os << "p_guess " << fixed(s.p_guess) << "\n";
  os << "branch  " << s.branch.to_string() << "\n";
  if (!s.branch.warning.empty()) os << "warning " << s.branch.warning << "\n";
  for (const auto& w : s.checks.warnings) os << "warning " << w << "\n";
  os << "povm\n";
  for (std::size_t i = 0; i < s.povm.size(); ++i) {
    os << "  " << i + 1 << "  p = " << fixed(s.povm[i].p) << "  u = " << triple(s.povm[i].u) << "\n";
  }
  if (s.complementary) {
    os << "complementary\n";
    for (std::size_t i = 0; i < s.complementary->size(); ++i) {
      const auto& c = (*s.complementary)[i];
      os << "  " << i + 1 << "  r = " << fixed(c.r) << "  w = " << triple(c.w) << "\n";
    }
  }
  for (const auto& trace : s.conditions) print_report(os, trace);
  const auto& k = s.certificate;
  os << "certificate  primal " << sci(k.primal) << "  dual " << sci(k.dual) << "  slackness "
     << sci(k.slackness) << "  gap " << sci(k.duality_gap) << "  psd " << sci(k.psd) << "\n";
}

int nonzero_count(const Povm& povm) {
  return static_cast<int>(std::count_if(povm.begin(), povm.end(), [](const PovmElement& e) { return e.p > 1e-12; }));
}

}  // namespace

json to_json(const Solution& s) {
  json j;
  j["p_guess"] = s.p_guess;
  j["branch"] = s.branch.to_string();
  j["branch_path"] = json::array();
  for (const auto& level : s.branch.path) {
    json set = json::array();
    for (std::size_t m : level) set.push_back(m + 1);
    j["branch_path"].push_back(set);
  }
  j["oracle_fallback"] = s.branch.oracle_fallback;
  j["active_subset"] = json::array();
  for (std::size_t m : s.active_subset) j["active_subset"].push_back(m + 1);
  j["povm"] = json::array();
  for (const auto& e : s.povm) j["povm"].push_back({{"p", e.p}, {"u", vec(e.u)}});
  if (s.complementary) {
    j["complementary"] = json::array();
    for (const auto& c : *s.complementary) j["complementary"].push_back({{"r", c.r}, {"w", vec(c.w)}});
  }
  j["dual_operator"] = {{"trace", s.dual.trace}, {"vector", vec(s.dual.vector_part)}};
  j["conditions"] = json::array();
  for (const auto& trace : s.conditions) j["conditions"].push_back(report_json(trace));
  const auto& k = s.certificate;
  j["certificate"] = {{"primal", k.primal}, {"dual", k.dual}, {"slackness", k.slackness},
                      {"duality_gap", k.duality_gap}, {"psd", k.psd}};
  j["cross_checks"] = {{"radius_spread", s.checks.radius_spread},
                       {"hyperboloid", s.checks.hyperboloid},
                       {"barycentric", s.checks.barycentric},
                       {"closed_form", s.checks.closed_form},
                       {"warnings", s.checks.warnings}};
  return j;
}

int cmd_solve(const std::filesystem::path& path, const SolveFlags& flags, std::ostream& out, std::ostream& err) {
  EnsembleFile file = load_ensemble(path);
  SolverOptions options{file.tolerances};
  if (flags.tol) options.tol.cert = *flags.tol;
  Solution s;
  try {
    s = solve(file.ensemble, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CertificateFailure) throw;
    err << "error: " << e.what() << "\n";
    return kExitCertificate;
  }
  if (flags.json) {
    out << to_json(s).dump(2) << "\n";
  } else {
    print_solution(out, s);
  }
  return kExitOk;
}

int cmd_verify(const std::filesystem::path& path, const VerifyFlags& flags, std::ostream& out,
               std::ostream& err) {
  EnsembleFile file = load_ensemble(path);
  const Ensemble& ens = file.ensemble;
  Solution s;
  try {
    s = solve(ens, SolverOptions{file.tolerances});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CertificateFailure) throw;
    err << "error: " << e.what() << "\n";
    return kExitCertificate;
  }
  const DualPoint dual = dual_socp(ens);
  const SampleReport samples = primal_sampler(ens, s.p_guess, flags.trials, flags.seed);
  std::optional<double> helstrom;
  if (ens.size() == 2) helstrom = helstrom_two(ens);

  double discrepancy = std::abs(s.p_guess - dual.value);
  if (helstrom) {
    discrepancy = std::max({discrepancy, std::abs(s.p_guess - *helstrom), std::abs(dual.value - *helstrom)});
  }
  const double threshold = flags.tol.value_or(1e-6);
  const bool ok = discrepancy <= threshold && !samples.violation;

  if (flags.json) {
    json j;
    j["solve"] = s.p_guess;
    j["branch"] = s.branch.to_string();
    j["dual"] = {{"value", dual.value}, {"gap_estimate", dual.gap_estimate}, {"iterations", dual.iterations},
                 {"converged", dual.converged}};
    j["sampler"] = {{"best", samples.best}, {"trials", samples.trials}, {"violation", samples.violation}};
    j["helstrom"] = helstrom ? json(*helstrom) : json(nullptr);
    j["discrepancy"] = discrepancy;
    j["threshold"] = threshold;
    j["ok"] = ok;
    out << j.dump(2) << "\n";
  } else {
    out << "solve    " << fixed(s.p_guess) << "  " << s.branch.to_string() << "\n";
    out << "dual     " << fixed(dual.value) << "  gap " << sci(dual.gap_estimate) << "  iterations "
        << dual.iterations << (dual.converged ? "" : "  (not converged)") << "\n";
    out << "sampler  " << fixed(samples.best) << "  best of " << samples.trials << " random POVMs"
        << (samples.violation ? "  EXCEEDS p_guess" : "") << "\n";
    if (helstrom) out << "helstrom " << fixed(*helstrom) << "\n";
    out << "discrepancy " << sci(discrepancy) << " (threshold " << sci(threshold) << ")  "
        << (ok ? "ok" : "FAILED") << "\n";
  }
  return ok ? kExitOk : kExitDiscrepancy;
}

std::vector<SweepRow> sweep_rows(double h_min, double h_max, int steps) {
  constexpr double slack = 1e-12;
  if (!(h_min >= 0.0) || !(h_min <= h_max) || !(h_max <= kHMax + slack) || steps < 0) {
    throw std::invalid_argument("need 0 <= h_min <= h_max <= sqrt(2)-1 and steps >= 0");
  }
  h_max = std::min(h_max, kHMax);
  h_min = std::min(h_min, h_max);
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    SweepRow row;
    row.h = steps == 0 ? h_min : h_min + (h_max - h_min) * k / steps;
    const Solution s = solve(h_family(row.h));
    row.p_guess = s.p_guess;
    row.nonzero_count = nonzero_count(s.povm);
    row.branch = s.branch.to_string();
    rows.push_back(std::move(row));
  }
  double h_star = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (row.nonzero_count < 4) {
      h_star = row.h;
      break;
    }
  }
  for (auto& row : rows) {
    row.closed_form = h_family_closed_form(row.h, row.h < h_star ? 1 : 2);
    row.abs_error = std::abs(row.p_guess - row.closed_form);
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "h,p_guess,nonzero_count,branch,closed_form_value,abs_error\n";
  os << std::setprecision(12);
  for (const auto& r : rows) {
    os << r.h << ',' << r.p_guess << ',' << r.nonzero_count << ",\"" << r.branch << "\"," << r.closed_form
       << ',' << r.abs_error << '\n';
  }
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<SweepRow> rows;
  try {
    rows = sweep_rows(args.h_min, args.h_max, args.steps);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  if (args.out == "-") {
    write_csv(out, rows);
  } else {
    std::ofstream file(args.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << args.out << "\n";
      return kExitParse;
    }
    write_csv(file, rows);
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-error discrimination of up to four qubit states"};
  app.require_subcommand(1);

  std::string path;
  SolveFlags solve_flags;
  double solve_tol = 0.0;
  auto* solve_cmd = app.add_subcommand("solve", "optimal guessing probability and measurement");
  solve_cmd->add_option("file", path, "ensemble JSON file")->required();
  solve_cmd->add_flag("--json", solve_flags.json, "machine-readable output");
  auto* solve_tol_opt = solve_cmd->add_option("--tol", solve_tol, "certificate tolerance");

  VerifyFlags verify_flags;
  double verify_tol = 0.0;
  auto* verify_cmd = app.add_subcommand("verify", "cross-check the solver against the oracles");
  verify_cmd->add_option("file", path, "ensemble JSON file")->required();
  verify_cmd->add_flag("--json", verify_flags.json, "machine-readable output");
  auto* verify_tol_opt = verify_cmd->add_option("--tol", verify_tol, "discrepancy threshold");
  verify_cmd->add_option("--seed", verify_flags.seed, "sampler seed");
  verify_cmd->add_option("--trials", verify_flags.trials, "sampled POVMs")->check(CLI::PositiveNumber);

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "guessing probability along the h-family as CSV");
  sweep_cmd->add_option("--h-min", sweep_args.h_min, "first h");
  sweep_cmd->add_option("--h-max", sweep_args.h_max, "last h");
  sweep_cmd->add_option("--steps", sweep_args.steps, "number of intervals");
  sweep_cmd->add_option("--out", sweep_args.out, "output CSV path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*solve_cmd) {
      if (*solve_tol_opt) solve_flags.tol = solve_tol;
      return cmd_solve(path, solve_flags, out, err);
    }
    if (*verify_cmd) {
      if (*verify_tol_opt) verify_flags.tol = verify_tol;
      return cmd_verify(path, verify_flags, out, err);
    }
    return cmd_sweep(sweep_args, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  }
}

}  // namespace qmd::cli
