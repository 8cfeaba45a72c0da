#pragma once

// Reproducible random points. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard, and doubles are formed from the top 53
// bits, so a seed gives the same points on every platform.

#include <cstdint>
#include <random>

#include "abeltheta/core_lattice.hpp"

namespace abeltheta {

class Sampler {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64, u01 = (x >> 11) * 2^-53";

  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Image of a uniform point of [0,1)^{2n}: a point of the fundamental cell.
  ComplexPoint cell_point(const PeriodData& p) {
    RealPoint x{Eigen::VectorXd(2 * p.n())};
    for (Eigen::Index i = 0; i < x.coords.size(); ++i) x.coords(i) = u01();
    return real_to_complex(p, x);
  }

  // Real and imaginary parts uniform in [-half_width, half_width].
  Eigen::VectorXcd box(int n, double half_width) {
    Eigen::VectorXcd v(n);
    for (int a = 0; a < n; ++a) {
      const double re = uniform(-half_width, half_width);
      v(a) = cd(re, uniform(-half_width, half_width));
    }
    return v;
  }

  Eigen::VectorXd real_box(int n, double half_width) {
    Eigen::VectorXd v(n);
    for (int a = 0; a < n; ++a) v(a) = uniform(-half_width, half_width);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace abeltheta
