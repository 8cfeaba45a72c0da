#pragma once

// Period-matrix data model for an abelian variety M = V / Lambda and the
// coordinate systems used throughout the library.
//
// The lattice is generated by lambda_alpha = delta_alpha v_alpha and
// lambda_{n+alpha} = sum_k tau_{alpha k} v_k, so the period matrix is
// (diag(delta), Z) with Z symmetric and Im Z positive definite.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "abeltheta/errors.hpp"

namespace abeltheta {

using cd = std::complex<double>;

class PeriodData {
 public:
  // Validates and derives W = (Im Z)^{-1}, Delta = prod delta and the
  // smallest eigenvalue of Im Z. Z is stored symmetrized.
  static PeriodData validate(const std::vector<int>& delta, const Eigen::MatrixXcd& Z);

  int n() const { return static_cast<int>(delta_.size()); }
  const std::vector<int>& delta() const { return delta_; }
  int delta(int alpha) const { return delta_[static_cast<std::size_t>(alpha)]; }
  int delta_n() const { return delta_.back(); }
  const Eigen::MatrixXcd& Z() const { return Z_; }
  Eigen::MatrixXd im_Z() const { return Z_.imag(); }
  Eigen::MatrixXd re_Z() const { return Z_.real(); }
  const Eigen::MatrixXd& W() const { return W_; }
  std::int64_t Delta() const { return Delta_; }
  double lambda_min() const { return lambda_min_; }
  double det_im_Z() const { return det_im_Z_; }

  // diag(delta) as a real matrix.
  Eigen::MatrixXd delta_matrix() const;

 private:
  PeriodData() = default;

  std::vector<int> delta_;
  Eigen::MatrixXcd Z_;
  Eigen::MatrixXd W_;
  std::int64_t Delta_ = 1;
  double lambda_min_ = 0.0;
  double det_im_Z_ = 0.0;
};

// z in the basis v_alpha of V.
struct ComplexPoint {
  Eigen::VectorXcd coords;
};

// x dual to the lattice basis lambda_1..lambda_2n.
struct RealPoint {
  Eigen::VectorXd coords;
};

// mu-hat in the basis v*_alpha of conj(V)^*.
struct DualComplexPoint {
  Eigen::VectorXcd coords;
};

// xi in V^* = Hom(V, R) with respect to dx_1..dx_2n; eta = xi / 2pi.
struct DualRealPoint {
  Eigen::VectorXd xi;

  Eigen::VectorXd eta() const;
  static DualRealPoint from_eta(const Eigen::VectorXd& eta);
};

// m with 0 <= m_alpha < delta_alpha.
struct Characteristic {
  std::vector<int> m;

  bool operator==(const Characteristic&) const = default;
  auto operator<=>(const Characteristic&) const = default;
};

// z_alpha = delta_alpha x_alpha + sum_k tau_{alpha k} x_{n+k}.
ComplexPoint real_to_complex(const PeriodData& p, const RealPoint& x);

// Inverse of real_to_complex via the block formula
//   x' = (i/2) D^{-1} (conj(Z) W z - Z W conj(z)),  x'' = (i/2) W (conj(z) - z).
RealPoint complex_to_real(const PeriodData& p, const ComplexPoint& z);

// Lift of phi_{L0}: mu-hat_alpha = (delta_n / delta_alpha) mu_alpha.
DualComplexPoint phi_L0_lift(const PeriodData& p, const ComplexPoint& mu);

// Iso : M-hat -> M^*. Forward sends mu-hat to xi, inverse sends xi to mu-hat.
DualRealPoint iso_forward(const PeriodData& p, const DualComplexPoint& muhat);
DualComplexPoint iso_inverse(const PeriodData& p, const DualRealPoint& xi);

// All of the characteristic set in lexicographic order; size Delta.
std::vector<Characteristic> enumerate_characteristics(const PeriodData& p);

// Throws CharacteristicOutOfRange unless 0 <= m_alpha < delta_alpha.
void check_characteristic(const PeriodData& p, const Characteristic& m);

// Lexicographic position of m inside enumerate_characteristics(p).
std::size_t characteristic_index(const PeriodData& p, const Characteristic& m);

}  // namespace abeltheta
