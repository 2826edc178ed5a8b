#ifndef QMD_TOOLS_ENSEMBLE_FILE_HPP
#define QMD_TOOLS_ENSEMBLE_FILE_HPP

// JSON ensemble documents:
//
//   {
//     "members": [
//       {"weight": 0.25, "bloch": [0.5, 0.0, -0.5]},
//       {"weight": 0.25, "rho": [[[0.5, 0.0], [0.25, -0.1]],
//                                [[0.25, 0.1], [0.5, 0.0]]]}
//     ],
//     "tolerances": {"psd": 1e-9, "rank": 1e-8, "strict": 1e-10,
//                    "cert": 1e-8, "cross": 1e-7}
//   }
//
// "rho" entries are [re, im] pairs and must have unit trace; the prior
// always comes from "weight" and is never rescaled by the parser.

#include "qmd/bloch.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qmd::cli {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnsembleFile {
  Ensemble ensemble;
  Tolerances tolerances;
};

/// Throws ParseError with a byte offset or a JSON pointer in the message.
EnsembleFile parse_ensemble(std::string_view text);

EnsembleFile load_ensemble(const std::filesystem::path& path);

}  // namespace qmd::cli

#endif  // QMD_TOOLS_ENSEMBLE_FILE_HPP
