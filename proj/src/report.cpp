#include <cmath>
#include <cstdio>
#include <sstream>

#include "abeltheta/cli.hpp"

namespace abeltheta {

std::string format_real(double x) {
  x += 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(std::complex<double> z) {
  z += std::complex<double>(0.0, 0.0);  // -0 prints as 0
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%c%.17gi", z.real(), std::signbit(z.imag()) ? '-' : '+',
                std::abs(z.imag()));
  return buf;
}

std::string format_characteristic(const Characteristic& m) {
  std::string out = "(";
  for (std::size_t a = 0; a < m.m.size(); ++a) out += (a ? "," : "") + std::to_string(m.m[a]);
  return out + ")";
}

Check make_check(std::string name, double value, double threshold) {
  const bool pass = threshold == 0.0 ? value == 0.0 : value < threshold;
  return {std::move(name), value, threshold, pass, false};
}

Check make_floor_check(std::string name, double value, double floor) {
  return {std::move(name), value, floor, value > floor, true};
}

bool Report::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string Report::render() const {
  std::ostringstream os;
  os << "# abeltheta " << command << "\n";
  for (const auto& h : header) os << "# " << h << "\n";
  for (const auto& b : body) os << b << "\n";
  std::size_t passed = 0;
  for (const auto& c : checks) {
    passed += c.pass ? 1 : 0;
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " value=" << format_real(c.value)
       << (c.lower_bound ? " floor=" : " threshold=") << format_real(c.threshold) << "\n";
  }
  if (!checks.empty()) os << "summary: " << passed << "/" << checks.size() << " checks passed\n";
  if (!csv.empty()) os << "--- csv ---\n" << csv;
  return os.str();
}

}  // namespace abeltheta
