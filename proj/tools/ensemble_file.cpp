#include "ensemble_file.hpp"

#include "qmd/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace qmd::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("at " + where + ": " + what);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

Vec3 triple(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) fail(where, "expected an array of three numbers");
  return Vec3(number(j[0], where + "/0"), number(j[1], where + "/1"), number(j[2], where + "/2"));
}

Matrix2c matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a 2x2 matrix");
  Matrix2c m;
  for (int r = 0; r < 2; ++r) {
    const std::string row = where + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != 2) fail(row, "expected a row of two entries");
    for (int c = 0; c < 2; ++c) {
      const std::string cell = row + "/" + std::to_string(c);
      const json& z = j[r][c];
      if (!z.is_array() || z.size() != 2) fail(cell, "expected [re, im]");
      m(r, c) = {number(z[0], cell + "/0"), number(z[1], cell + "/1")};
    }
  }
  return m;
}

void read_tolerance(const json& block, const char* key, double& target) {
  if (!block.contains(key)) return;
  const double v = number(block[key], std::string("/tolerances/") + key);
  if (!(v > 0.0)) fail(std::string("/tolerances/") + key, "tolerance must be positive");
  target = v;
}

}  // namespace

EnsembleFile parse_ensemble(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    std::ostringstream os;
    os << "byte " << err.byte << ": " << err.what();
    throw ParseError(os.str());
  }
  if (!doc.is_object()) fail("/", "expected an object");

  Tolerances tol;
  if (doc.contains("tolerances")) {
    const json& block = doc["tolerances"];
    if (!block.is_object()) fail("/tolerances", "expected an object");
    read_tolerance(block, "psd", tol.psd);
    read_tolerance(block, "rank", tol.rank);
    read_tolerance(block, "strict", tol.strict);
    read_tolerance(block, "cert", tol.cert);
    read_tolerance(block, "cross", tol.cross);
  }

  if (!doc.contains("members") || !doc["members"].is_array()) fail("/members", "expected an array");
  const json& members = doc["members"];
  if (members.empty() || members.size() > Ensemble::kMaxSize) fail("/members", "need 1 to 4 members");

  std::vector<WeightedState> states;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string where = "/members/" + std::to_string(i);
    const json& m = members[i];
    if (!m.is_object()) fail(where, "expected an object");
    if (!m.contains("weight")) fail(where, "missing \"weight\"");
    WeightedState st;
    st.weight = number(m["weight"], where + "/weight");
    if (st.weight < 0.0) fail(where + "/weight", "weight must be non-negative");

    const bool has_bloch = m.contains("bloch");
    const bool has_rho = m.contains("rho");
    if (has_bloch == has_rho) fail(where, "give exactly one of \"bloch\" or \"rho\"");
    if (has_bloch) {
      st.bloch = triple(m["bloch"], where + "/bloch");
    } else {
      HermitianOperator2 op;
      try {
        op = from_density_matrix(matrix(m["rho"], where + "/rho"), tol.psd);
      } catch (const Error& err) {
        fail(where + "/rho", err.what());
      }
      if (std::abs(op.trace - 1.0) > tol.psd) {
        std::ostringstream os;
        os << "rho has trace " << op.trace << "; put the prior in \"weight\" and pass a unit-trace rho";
        fail(where + "/rho", os.str());
      }
      st.bloch = op.bloch;
    }
    if (st.bloch.norm() > 1.0 + tol.psd) fail(where, "state lies outside the Bloch ball");
    states.push_back(st);
  }

  try {
    return EnsembleFile{Ensemble(std::move(states), tol.psd), tol};
  } catch (const Error& err) {
    fail("/members", err.what());
  }
}

EnsembleFile load_ensemble(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_ensemble(buf.str());
  } catch (const ParseError& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

}  // namespace qmd::cli
