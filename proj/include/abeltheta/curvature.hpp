#pragma once

// Constant-coefficient (1,1)-forms: curvatures of the log-quadratic metrics,
// the connection of the flat Poincare model, the curvature of the direct
// image bundles E' (on M) and E (on the dual torus), their Chern forms and
// Chern numbers, and the flatness checks for the bundle K.
//
// A holomorphic-basis form is sum_ab H_ab dw_a ^ dconj(w_b); a real-basis form
// is sum_{i<j} A_ij du_i ^ du_j with A antisymmetric. Curvatures come from
// exact linear algebra on the quadratic exponent: for log h = -2 pi u^T Q u,
// u = Im w, one has d d-bar (u_a u_b) = (1/4)(dw_a ^ dw-bar_b + dw_b ^ dw-bar_a), so
//     Theta = -d d-bar log h = pi sum_ab Q_ab dw_a ^ dw-bar_b.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "abeltheta/bundle_metrics.hpp"
#include "abeltheta/inner_product.hpp"
#include "abeltheta/symbolic.hpp"

namespace abeltheta {

enum class FormBasis {
  dz_dzbar,          // z on M
  dmu_dmubar,        // mu on M (the base of E')
  dmuhat_dmuhatbar,  // muhat on the dual torus (the base of E)
  real_dx,           // x_1..x_2n on M
  real_deta,         // eta_1..eta_2n on the dual torus
  mixed_z_mu,        // w = (z, mu) on M x M
  mixed_z_muhat,     // w = (z, muhat)
};

std::string_view to_string(FormBasis b);
bool is_real_basis(FormBasis b);

struct TwoForm {
  FormBasis basis = FormBasis::dz_dzbar;
  Eigen::MatrixXcd coeffs;  // real bases keep zero imaginary parts
  int rank_factor = 1;      // the form is coeffs (x) I_{rank_factor}
  std::optional<SymbolicMatrix> symbolic;
};

enum class Side { E_prime, E };

// Exact curvature of a catalogued metric. h_L0 is written over dmu_dmubar,
// the product metrics over mixed_z_mu.
TwoForm curvature_of_log_quadratic_metric(const PeriodData& p, MetricId id);

// H_ab = d_a dbar_b f at w by central differences of step h in the real and
// imaginary parts, optionally with one Richardson level (h and h/2).
Eigen::MatrixXcd ddbar_finite_difference(const std::function<double(const Eigen::VectorXcd&)>& f,
                                         const Eigen::VectorXcd& w, double step, bool richardson);

// max |H_fd - H_exact| for -log h of metric `id` at (v, mu), step 1e-3 with
// Richardson.
double curvature_fd_residual(const PeriodData& p, MetricId id, const ComplexPoint& v,
                             const ComplexPoint& mu);

// The connection form A on M x dual torus, linear in (muhat, conj muhat).
// Component blocks are n x n; entry (b, a) of dz_conj_muhat is the
// coefficient of conj(muhat_a) in the dz_b component, and so on.
struct ConnectionForm {
  int n = 0;
  SymbolicMatrix dz_muhat;
  SymbolicMatrix dz_conj_muhat;
  SymbolicMatrix dzbar_muhat;
  SymbolicMatrix dzbar_conj_muhat;
};

ConnectionForm connection_P(const PeriodData& p);

// Numeric components of A at muhat: (coefficients of dz, coefficients of dz-bar).
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> evaluate_connection(const PeriodData& p,
                                                                  const ConnectionForm& A,
                                                                  const DualComplexPoint& muhat);

struct ExteriorDerivative {
  TwoForm one_one;         // mixed_z_muhat
  SymbolicMatrix two_zero;  // (a, b): coefficient of dmuhat_a ^ dz_b
  SymbolicMatrix zero_two;  // (a, b): coefficient of dconj(muhat_a) ^ dz-bar_b
};

ExteriorDerivative exterior_derivative(const PeriodData& p, const ConnectionForm& A);

// The curvature of the Poincare connection written out term by term:
//   pi sum W_ab ((delta_b/delta_n) dmuhat_b ^ dz-bar_a - (delta_a/delta_n) dconj(muhat_a) ^ dz_b).
TwoForm curvature_P(const PeriodData& p);

// Substitutes muhat_a = (delta_n / delta_a) mu_a: mixed_z_muhat -> mixed_z_mu
// and dmuhat_dmuhatbar -> dmu_dmubar. Symbolic data is carried along.
TwoForm pullback_muhat_to_mu(const PeriodData& p, const TwoForm& form);

TwoForm curvature_direct_image(const PeriodData& p, Side side);

// Real antisymmetric representation: dmu_dmubar -> real_dx via
// dmu = diag(delta) dx' + Z dx'', dmuhat_dmuhatbar -> real_deta via
// dmuhat = delta_n (diag(delta)^-1 Z diag(delta)^-1 deta' - diag(delta)^-1 deta'').
TwoForm to_real_basis(const PeriodData& p, const TwoForm& form);

struct ChernData {
  TwoForm c1_E_prime;  // dmu_dmubar, trace over the rank included
  TwoForm c1_E;        // dmuhat_dmuhatbar
  TwoForm c1_real;     // c1_E_prime over real_dx
  TwoForm c1_E_eta;    // c1_E over real_deta
  TwoForm omega_dual;  // -c1_E_eta
};

ChernData chern_data(const PeriodData& p);

// c1 = (i / 2 pi) * rank * Theta for a scalar-times-identity curvature.
TwoForm chern_form(const TwoForm& curvature);

struct ChernNumber {
  long long value = 0;
  double integrality_defect = 0.0;  // max distance of a real coefficient to an integer
};

// int of c1^n over the torus with unit cell volume 1: n! Pf(A), computed on
// the rounded integer coefficients.
ChernNumber chern_number(const PeriodData& p, Side side);
long long integer_pfaffian(const std::vector<std::vector<long long>>& A);

struct FlatnessReport {
  double variation = 0.0;        // max_m (max_mu G_mm - min_mu G_mm) / max_mu G_mm
  double ddbar_log_norm = 0.0;   // max |d d-bar log G_mm| at the first sample, step 1e-2
  std::vector<GramResult> grams;
};

FlatnessReport flatness_report_K(const PeriodData& p, const std::vector<ComplexPoint>& mu_samples,
                                 const QuadratureSpec& q, const TruncationPlan& plan);

struct TheoremReport {
  bool pass = false;
  double variation = 0.0;
  double ddbar_log_norm = 0.0;
  double min_closed_form_norm = 0.0;
  std::string note;
};

// Numerically checkable consequences of the triviality of K: translation
// invariance of the Gram diagonal and a positive norm for every theta_m.
TheoremReport verify_theorem_1_1(const PeriodData& p, const QuadratureSpec& q,
                                 const TruncationPlan& plan,
                                 const std::vector<ComplexPoint>& mu_samples);

}  // namespace abeltheta
