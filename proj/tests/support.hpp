#pragma once

#include <complex>
#include <vector>

#include "abeltheta/core_lattice.hpp"

namespace test {

using abeltheta::cd;
using abeltheta::PeriodData;

inline const cd I{0.0, 1.0};

inline PeriodData elliptic(int delta, cd tau) {
  Eigen::MatrixXcd Z(1, 1);
  Z(0, 0) = tau;
  return PeriodData::validate({delta}, Z);
}

inline PeriodData surface(std::vector<int> delta, cd t11, cd t12, cd t22) {
  Eigen::MatrixXcd Z(2, 2);
  Z << t11, t12, t12, t22;
  return PeriodData::validate(delta, Z);
}

// The three catalogue tori.
inline std::vector<PeriodData> catalogue() {
  return {elliptic(2, I), elliptic(3, cd(0.3, 1.2)), surface({1, 2}, I, 0.2, 2.0 * I)};
}

inline abeltheta::ComplexPoint point(std::initializer_list<cd> z) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(z.size()));
  Eigen::Index i = 0;
  for (cd c : z) v(i++) = c;
  return {v};
}

}  // namespace test
