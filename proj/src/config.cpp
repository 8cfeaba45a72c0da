#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "abeltheta/cli.hpp"

namespace abeltheta {

namespace {

using nlohmann::json;

Error parse_error(const std::string& what) { return Error(ErrorCode::ParseError, what); }

Error invalid(const std::string& field, const std::string& what) {
  return Error(ErrorCode::ValidationError, "field " + field + ": " + what);
}

// Quotes bare object keys so {n: 1} reads as {"n": 1}. The format has no
// string values, so a key is any identifier after '{' or ','.
std::string quote_bare_keys(const std::string& text) {
  static const std::regex bare(R"(([{,]\s*)([A-Za-z_][A-Za-z0-9_]*)(\s*:))");
  return std::regex_replace(text, bare, "$1\"$2\"$3");
}

Eigen::MatrixXd read_matrix(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) throw parse_error(key + " must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = j.front().is_array() ? static_cast<Eigen::Index>(j.front().size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw parse_error(key + " rows must be arrays of equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw parse_error(key + " entries must be numbers");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

Config parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(quote_bare_keys(text));
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw parse_error("config must be an object");
  for (const auto& [key, value] : j.items()) {
    static const char* known[] = {"n", "delta", "Z_re", "Z_im", "eps", "nodes", "seed"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw parse_error("unknown key " + key);
    }
  }

  Config cfg;
  for (const char* key : {"n", "delta", "Z_im"}) {
    if (!j.contains(key)) throw invalid(key, "required key missing");
  }
  if (!j["n"].is_number_integer()) throw parse_error("n must be an integer");
  cfg.n = j["n"].get<int>();
  if (cfg.n < 1) throw invalid("n", "must be positive");

  if (!j["delta"].is_array()) throw parse_error("delta must be an array");
  for (const auto& d : j["delta"]) {
    if (!d.is_number_integer()) throw parse_error("delta entries must be integers");
    cfg.delta.push_back(d.get<int>());
  }
  if (static_cast<int>(cfg.delta.size()) != cfg.n) {
    throw invalid("delta", "has " + std::to_string(cfg.delta.size()) + " entries but n=" +
                               std::to_string(cfg.n));
  }

  cfg.Z_im = read_matrix(j["Z_im"], "Z_im");
  cfg.Z_re = j.contains("Z_re") ? read_matrix(j["Z_re"], "Z_re")
                                : Eigen::MatrixXd::Zero(cfg.n, cfg.n);
  for (const auto& [name, m] : {std::pair<const char*, const Eigen::MatrixXd*>{"Z_re", &cfg.Z_re},
                                {"Z_im", &cfg.Z_im}}) {
    if (m->rows() != cfg.n || m->cols() != cfg.n) {
      throw invalid(name, "must be " + std::to_string(cfg.n) + "x" + std::to_string(cfg.n));
    }
  }

  if (j.contains("eps")) {
    if (!j["eps"].is_number()) throw parse_error("eps must be a number");
    cfg.eps = j["eps"].get<double>();
  }
  if (!(cfg.eps > 0.0 && cfg.eps <= 1e-2)) throw invalid("eps", "must lie in (0, 1e-2]");

  if (j.contains("nodes")) {
    if (!j["nodes"].is_number_integer()) throw parse_error("nodes must be an integer");
    cfg.nodes = j["nodes"].get<int>();
  }
  if (cfg.nodes < 4) throw invalid("nodes", "must be >= 4");

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw parse_error("seed must be a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  (void)cfg.period();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

PeriodData Config::period() const {
  Eigen::MatrixXcd Z(n, n);
  Z.real() = Z_re;
  Z.imag() = Z_im;
  try {
    return PeriodData::validate(delta, Z);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::DivisibilityViolation: throw invalid("delta", e.what());
      case ErrorCode::NotPositiveDefinite: throw invalid("Z_im", e.what());
      case ErrorCode::NotSymmetric: throw invalid("Z_re/Z_im", e.what());
      default: throw invalid("delta/Z", e.what());
    }
  }
}

}  // namespace abeltheta
