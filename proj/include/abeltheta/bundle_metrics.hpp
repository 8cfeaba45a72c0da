#pragma once

// Multiplier systems of the line bundles used in the theory, the
// log-quadratic Hermitian metrics on them, and the trivializing section
// Phi_xi of the flat twist L_{Delta,xi}.
//
// A multiplier is stored as an affine exponent in units of 2 pi i:
//     e_g(w) = exp(2 pi i (c0_g + a_g . w)),
// where w = z on M and w = (z, mu) on M x M. The parameters mu, xi, muhat
// of a bundle are folded into c0. Lattice generators are numbered from 1:
// on M, g = alpha is lambda_alpha (shift delta_alpha e_alpha) and g = n+alpha
// is lambda_{n+alpha} (shift by row alpha of Z); on M x M the generators
// 1..2n act on z and 2n+1..4n act on mu in the same order.

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "abeltheta/core_lattice.hpp"
#include "abeltheta/theta.hpp"

namespace abeltheta {

enum class BundleId { L0, Lmu, Ktilde, PullbackP, CalL_xi, P_muhat, L_Delta_xi };

std::string_view to_string(BundleId id);

struct MultiplierParams {
  std::optional<ComplexPoint> mu;
  std::optional<DualRealPoint> xi;
  std::optional<DualComplexPoint> muhat;
};

struct AffineExponent {
  cd c0;
  Eigen::VectorXcd a;  // one coefficient per variable of w
};

struct MultiplierSystem {
  BundleId id = BundleId::L0;
  PeriodData period;
  bool on_product = false;  // base M x M instead of M
  std::vector<AffineExponent> exponents;
  MultiplierParams params;

  int n() const { return period.n(); }
  int variables() const { return on_product ? 2 * n() : n(); }
  int generators() const { return on_product ? 4 * n() : 2 * n(); }
};

// Closed-form multipliers. Throws MissingParam when the bundle needs mu
// (Lmu), xi (CalL_xi, L_Delta_xi) or muhat (P_muhat) and it is absent.
MultiplierSystem multiplier_system(const PeriodData& p, BundleId id,
                                   const MultiplierParams& params = {});

// pi_k^* L0 on M x M for k = 1, 2. Used to check h_{pi_k^* L0}.
MultiplierSystem pullback_L0_system(const PeriodData& p, int factor);

// L_{Delta,xi} written as L_[xi] (x) P*_muhat with muhat = Iso^{-1}(xi),
// before the two exponents are combined. Must agree with L_Delta_xi.
MultiplierSystem l_delta_xi_unsimplified(const PeriodData& p, const DualRealPoint& xi);

// Copy of ms with the exponent of `generator` multiplied by `scale`.
MultiplierSystem perturbed(const MultiplierSystem& ms, int generator, double scale);

// Joint variable w: z alone on M, (v, mu) on M x M.
Eigen::VectorXcd joint_point(const MultiplierSystem& ms, const ComplexPoint& v,
                             const ComplexPoint& mu);

// Shift of w under `generator` (1-based).
Eigen::VectorXcd generator_shift(const MultiplierSystem& ms, int generator);

// log e_g(w) = 2 pi i (c0 + a . w).
cd log_multiplier(const MultiplierSystem& ms, int generator, const Eigen::VectorXcd& w);

// |e_i(w + s_j) e_j(w) - e_j(w + s_i) e_i(w)| / max(1, |rhs|).
double cocycle_residual(const MultiplierSystem& ms, int i, int j, const ComplexPoint& v,
                        const ComplexPoint& mu);

// Same relation on the coefficients. The two sides differ by
// exp(2 pi i (a_i . s_j - a_j . s_i)); with s written over the symbols 1 and
// tau_ab this is 1 iff every tau coefficient vanishes and the constant is an
// integer. Returns the largest defect, which is exactly 0 for a valid system.
double symbolic_cocycle_residual(const MultiplierSystem& ms, int i, int j);

// Defect of the transformation law of the section theta_m(v; mu) under the
// multipliers of ms (L0 or Lmu on M, Ktilde on M x M), normalised like
// quasiperiodicity_residual.
double section_transformation_residual(const MultiplierSystem& ms, const Characteristic& m,
                                       const ComplexPoint& v, const ComplexPoint& mu,
                                       int generator, const TruncationPlan& plan);

// Hermitian metrics h = exp(-2 pi u^T Q u) with u = Im w.
enum class MetricId { h_L0, h_Lmu, h_P, h_Ktilde, h_pi1L0, h_pi2L0 };

std::string_view to_string(MetricId id);

struct LogQuadraticMetric {
  MetricId id = MetricId::h_L0;
  Eigen::MatrixXd quadratic;  // n x n for h_L0, 2n x 2n otherwise

  bool needs_mu() const { return id != MetricId::h_L0; }
};

LogQuadraticMetric log_quadratic_metric(const PeriodData& p, MetricId id);

// log h at (v, mu); mu is required unless id is h_L0.
double metric_log(const PeriodData& p, MetricId id, const ComplexPoint& v,
                  const std::optional<ComplexPoint>& mu = std::nullopt);
double metric_eval(const PeriodData& p, MetricId id, const ComplexPoint& v,
                   const std::optional<ComplexPoint>& mu = std::nullopt);

// The multiplier system a metric is quasi-periodic for.
MultiplierSystem metric_multipliers(const PeriodData& p, MetricId id,
                                    const std::optional<ComplexPoint>& mu);

// |h(w + s_g) |e_g(w)|^2 / h(w) - 1|, evaluated in log space.
double metric_quasiperiodicity_residual(const PeriodData& p, MetricId id, int generator,
                                        const ComplexPoint& v,
                                        const std::optional<ComplexPoint>& mu = std::nullopt);

// Phi_xi(z) = exp(i sum_alpha (xi_alpha / delta_alpha) z_alpha).
cd trivializing_section_phi(const PeriodData& p, const DualRealPoint& xi, const ComplexPoint& z);

// Exponent of Phi_xi(z + s_g) / Phi_xi(z) in units of 2 pi i, read off the
// section itself: sum_alpha (eta_alpha / delta_alpha) (s_g)_alpha.
cd phi_transformation_exponent(const PeriodData& p, const DualRealPoint& xi, int generator);

}  // namespace abeltheta
