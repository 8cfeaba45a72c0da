#pragma once

// Configuration, command dispatch and report rendering behind the abeltheta
// tool. Kept in the library so tests can drive commands without a process.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abeltheta/core_lattice.hpp"

namespace abeltheta {

// JSON text with keys n, delta, Z_re, Z_im, eps, nodes, seed. Keys may be
// left unquoted. Z_re defaults to zeros, eps to 1e-12, nodes to 32, seed to 42.
struct Config {
  int n = 0;
  std::vector<int> delta;
  Eigen::MatrixXd Z_re;
  Eigen::MatrixXd Z_im;
  double eps = 1e-12;
  int nodes = 32;
  std::uint64_t seed = 42;

  PeriodData period() const;
};

// ParseError for malformed text or wrongly typed values; ValidationError,
// naming the field, for values that parse but are not admissible.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

struct CommandOptions {
  std::vector<int> m;
  std::vector<double> z_re, z_im, mu_re, mu_im;
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool lower_bound = false;  // passes when value > threshold
};

struct Report {
  std::string command;
  std::vector<std::string> header;
  std::vector<std::string> body;  // human-readable block
  std::vector<Check> checks;
  std::string csv;  // machine block; written to --out when given

  bool all_pass() const;
  std::string render() const;
};

// Residual r passes when r < threshold (or r <= threshold for exact checks
// with threshold 0).
Check make_check(std::string name, double value, double threshold);
Check make_floor_check(std::string name, double value, double floor);

Report run_command(const std::string& command, const Config& cfg, const CommandOptions& opts);

std::string format_real(double x);
std::string format_complex(std::complex<double> z);
std::string format_characteristic(const Characteristic& m);

}  // namespace abeltheta
