#pragma once

// L2 inner product of theta sections of L_mu,
//     <theta_m, theta_m'>_mu = int_M h_{L_mu}(v) theta_m(v; mu) conj(theta_m'(v; mu)) dvol,
// with dvol = prod_alpha dz_alpha1 dz_alpha2, computed by the equispaced rule
// on the unit cube of the coordinates t: z = diag(delta) t' + Z t''. The
// integrand is 1-periodic in t, so the rule converges spectrally; the
// Jacobian of t -> z is J = Delta * det(Im Z).

#include <functional>
#include <utility>
#include <vector>

#include "abeltheta/core_lattice.hpp"
#include "abeltheta/theta.hpp"

namespace abeltheta {

struct QuadratureSpec {
  int nodes_per_axis = 32;
  bool parallel = true;
  // Optional mu-dependent factor exp(metric_log_scale(mu)) applied to h_{L_mu}.
  // Unset for the actual metric; a non-constant hook breaks translation
  // invariance on purpose so the flatness checks can be exercised.
  std::function<double(const ComplexPoint&)> metric_log_scale;
};

struct GramResult {
  Eigen::MatrixXcd matrix;  // indexed by enumerate_characteristics order
  ComplexPoint mu;
  double est_error = 0.0;  // max relative diagonal defect against closed_form_norm
};

cd l2_inner_product_quadrature(const PeriodData& p, const Characteristic& m,
                               const Characteristic& m2, const ComplexPoint& mu,
                               const QuadratureSpec& q, const TruncationPlan& plan);

// sqrt(det(Im Z / 2)) * Delta * exp(2 pi sum Im tau_ab m_a m_b / (delta_a delta_b)).
double closed_form_norm(const PeriodData& p, const Characteristic& m);

GramResult gram_matrix(const PeriodData& p, const ComplexPoint& mu, const QuadratureSpec& q,
                       const TruncationPlan& plan);

// Same quadrature with theta_m and h_{L_mu} evaluated pointwise through the
// public theta and metric routines, serially. Slow; kept as the reference
// the fast kernel is tested and benchmarked against.
GramResult gram_matrix_reference(const PeriodData& p, const ComplexPoint& mu,
                                 const QuadratureSpec& q, const TruncationPlan& plan);

// int_{R^n} exp(-x^T A x) dx = pi^{n/2} / sqrt(det A).
double gaussian_integral(const Eigen::MatrixXd& A);

// For f(x) = exp(-x^T A x): returns
//   (sum_{|k|_inf <= K} int_{[0,1]^n} f(x + k + shift) dx,  gaussian_integral(A)).
// The first entry uses tensor Gauss-Legendre on each unit cell.
std::pair<double, double> unfold_check(const Eigen::MatrixXd& A, const Eigen::VectorXd& shift,
                                       int K);

namespace detail {

// Kernel shared by the public entry points: inner products among `chars`,
// upper triangle computed and the rest filled by Hermitian symmetry.
Eigen::MatrixXcd gram_kernel(const PeriodData& p, const std::vector<Characteristic>& chars,
                             const ComplexPoint& mu, const QuadratureSpec& q,
                             const TruncationPlan& plan);

}  // namespace detail

}  // namespace abeltheta
