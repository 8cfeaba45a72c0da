#pragma once

// Riemann theta function and the theta basis theta_m of H^0(M, L0), evaluated
// by a truncated lattice sum with a certified tail bound.
//
// Truncation. For z with y = Im z and characteristic shift c = m / delta, the
// modulus of the k-th term of the theta_m series is
//
//     exp(-pi (k+s)^T B (k+s)) * exp(L),   s = c + W y,  B = Im Z,
//     L = pi s^T B s - 2 pi c.y,
//
// i.e. a Gaussian envelope centred at k = -s. The sum is re-indexed as
// k = j - k0 with k0 = round(s) (equivalently z is shifted by the lattice
// vector -Z k0 and the quasi-periodicity factor is multiplied back), so the
// centre offset s' = s - k0 satisfies |s'|_inf <= 1/2. The factor exp(L) is
// pulled out of the sum and applied once, in log space.
//
// With lambda_min the smallest eigenvalue of B and |j|_inf = r > |s'|_inf,
//     (j+s')^T B (j+s') >= lambda_min |j+s'|_2^2 >= lambda_min (r - |s'|_inf)^2,
// and shell r holds N(r) = (2r+1)^n - (2r-1)^n indices, so the neglected part
// of the reduced sum is bounded by
//
//     T(R) = sum_{r>R} N(r) exp(-pi lambda_min (r - b)^2),   b >= |s'|_inf.
//
// T(R) is summed shell by shell in log space. Once the majorant
// u(r) = 2n (2r+1)^{n-1} exp(-pi lambda_min (r-b)^2) >= N(r) e^{...} has a
// consecutive ratio q(r) < 1/2 (q is decreasing in r for r > b), the rest is
// bounded by the geometric series u(r) / (1 - q(r)). The certified error of a
// returned value is tail_bound = exp(L) * T(R).

#include <vector>

#include "abeltheta/core_lattice.hpp"

namespace abeltheta {

inline constexpr double kDefaultThetaEps = 1e-12;
inline constexpr int kDefaultRadiusCap = 64;

struct TruncationPlan {
  int radius = 1;           // k ranges over |j|_inf <= radius around the centre
  double target_eps = kDefaultThetaEps;
  double lambda_min = 1.0;
  double shift_bound = 0.5;  // bound on |s'|_inf the radius was sized for
};

// tail_bound is absolute; envelope = exp(L) is the scale the truncation was
// certified against, so tail_bound <= target_eps * envelope.
struct ThetaValue {
  cd value;
  double tail_bound = 0.0;
  double envelope = 1.0;
};

enum class ThetaPath { direct, reduce_to_riemann };

// log of T(R) for an n-dimensional lattice; -inf when the bound underflows.
double log_shell_tail_bound(int n, int radius, double lambda_min, double shift_bound);

// Smallest radius >= 1 whose certified tail is <= eps. Throws EpsTooSmall when
// the radius would exceed cap.
TruncationPlan radius_for(const PeriodData& p, double eps, double shift_bound = 0.5,
                          int cap = kDefaultRadiusCap);

// Lattice indices with |j|_inf <= radius, ordered by shell and
// lexicographically inside each shell. Entry r of shell_starts is the offset
// of shell r; the last entry is the total count.
struct ShellOrder {
  int n = 0;
  int radius = 0;
  std::vector<int> indices;  // row-major, n ints per index
  std::vector<std::size_t> shell_starts;

  std::size_t size() const { return indices.size() / static_cast<std::size_t>(n); }
  const int* index(std::size_t i) const { return indices.data() + i * static_cast<std::size_t>(n); }
};

ShellOrder make_shell_order(int n, int radius);

// vartheta(z) = sum_k exp(pi i k^T Z k + 2 pi i k.z).
ThetaValue riemann_theta(const PeriodData& p, const ComplexPoint& z, const TruncationPlan& plan);

// theta_m(z), either from its own series or from
// theta_m(z) = exp(2 pi i c.z) vartheta(z + Z c).
ThetaValue theta_m(const PeriodData& p, const Characteristic& m, const ComplexPoint& z,
                   const TruncationPlan& plan, ThetaPath path = ThetaPath::direct);

// theta_m(v; mu) = theta_m(v + mu).
ThetaValue theta_m_translated(const PeriodData& p, const Characteristic& m, const ComplexPoint& v,
                              const ComplexPoint& mu, const TruncationPlan& plan);

// Defect of the transformation law of theta_m under lattice generator
// `generator` in 1..2n:
//   generator alpha <= n:  |theta(z + delta_alpha e_alpha) - theta(z)|
//   generator n+alpha:     |theta(z + Z e_alpha) - e^{-2 pi i z_alpha - pi i tau_aa} theta(z)|
// normalised by max(1, |theta(z)|, |expected|, envelopes of both evaluations).
// log_multiplier_perturbation multiplies the expected factor by
// exp(log_multiplier_perturbation); it exists to exercise the detector.
double quasiperiodicity_residual(const PeriodData& p, const Characteristic& m,
                                 const ComplexPoint& z, int generator, const TruncationPlan& plan,
                                 double log_multiplier_perturbation = 0.0);

// Shift of z by the lattice generator `generator` (1..2n) in complex coordinates.
Eigen::VectorXcd lattice_generator_shift(const PeriodData& p, int generator);

}  // namespace abeltheta
