#ifndef QMD_TOOLS_COMMANDS_HPP
#define QMD_TOOLS_COMMANDS_HPP

#include "h_family.hpp"
#include "qmd/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qmd::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitCertificate = 3,
  kExitDiscrepancy = 4,
};

struct SolveFlags {
  bool json = false;
  std::optional<double> tol;  ///< overrides the certificate tolerance
};

struct VerifyFlags {
  bool json = false;
  std::optional<double> tol;  ///< overrides the 1e-6 discrepancy threshold
  std::uint64_t seed = 1;
  int trials = 10000;
};

struct SweepArgs {
  double h_min = 0.0;
  double h_max = kHMax;
  int steps = 1000;
  std::string out = "-";  ///< "-" writes to the output stream
};

struct SweepRow {
  double h = 0.0;
  double p_guess = 0.0;
  int nonzero_count = 0;
  std::string branch;
  double closed_form = 0.0;
  double abs_error = 0.0;
};

nlohmann::json to_json(const Solution& solution);

int cmd_solve(const std::filesystem::path& path, const SolveFlags& flags, std::ostream& out, std::ostream& err);
int cmd_verify(const std::filesystem::path& path, const VerifyFlags& flags, std::ostream& out,
               std::ostream& err);

/// Solves the h-family on steps + 1 evenly spaced points. The closed-form
/// column switches branch at the first row with fewer than four non-zero
/// elements. Throws std::invalid_argument on a bad range.
std::vector<SweepRow> sweep_rows(double h_min, double h_max, int steps);
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

/// Command-line front end shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmd::cli

#endif  // QMD_TOOLS_COMMANDS_HPP
