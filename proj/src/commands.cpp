#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "abeltheta/bundle_metrics.hpp"
#include "abeltheta/cli.hpp"
#include "abeltheta/curvature.hpp"
#include "abeltheta/inner_product.hpp"
#include "abeltheta/sampling.hpp"
#include "abeltheta/theta.hpp"

namespace abeltheta {

namespace {

constexpr double kPi = std::numbers::pi;

struct Context {
  const Config& cfg;
  PeriodData p;
  TruncationPlan plan;
  QuadratureSpec q;
};

Context make_context(const Config& cfg) {
  PeriodData p = cfg.period();
  const TruncationPlan plan = radius_for(p, cfg.eps);
  QuadratureSpec q;
  q.nodes_per_axis = cfg.nodes;
  return {cfg, p, plan, q};
}

std::vector<std::string> header_for(const Context& c) {
  std::ostringstream cfg;
  cfg << "n=" << c.p.n() << " delta=[";
  for (int a = 0; a < c.p.n(); ++a) cfg << (a ? "," : "") << c.p.delta(a);
  cfg << "] Z=[";
  for (int a = 0; a < c.p.n(); ++a) {
    cfg << (a ? "," : "") << "[";
    for (int b = 0; b < c.p.n(); ++b) cfg << (b ? "," : "") << format_complex(c.p.Z()(a, b));
    cfg << "]";
  }
  cfg << "] eps=" << format_real(c.cfg.eps) << " nodes=" << c.cfg.nodes;
  std::ostringstream rng;
  rng << "prng: " << Sampler::kAlgorithm << ", seed=" << c.cfg.seed;
  std::ostringstream plan;
  plan << "theta plan: radius=" << c.plan.radius << " lambda_min=" << format_real(c.p.lambda_min());
  return {cfg.str(), rng.str(), plan.str()};
}

Eigen::VectorXcd complex_flag(const std::vector<double>& re, const std::vector<double>& im, int n,
                              const char* name) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  for (const auto* part : {&re, &im}) {
    if (!part->empty() && static_cast<int>(part->size()) != n) {
      std::ostringstream os;
      os << "--" << name << (part == &re ? "-re" : "-im") << " needs " << n << " values";
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
  }
  for (int a = 0; a < n; ++a) {
    const double r = re.empty() ? 0.0 : re[static_cast<std::size_t>(a)];
    const double i = im.empty() ? 0.0 : im[static_cast<std::size_t>(a)];
    v(a) = cd(r, i);
  }
  return v;
}

std::string matrix_lines(const Eigen::MatrixXcd& M, const std::string& indent) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    os << indent << "[";
    for (Eigen::Index j = 0; j < M.cols(); ++j) os << (j ? ", " : "") << format_complex(M(i, j));
    os << "]" << (i + 1 < M.rows() ? "\n" : "");
  }
  return os.str();
}

std::string gram_csv(const PeriodData& p, const Eigen::MatrixXcd& G) {
  const auto chars = enumerate_characteristics(p);
  std::ostringstream os;
  os << "\"m\"";
  for (const auto& m : chars) os << ",\"" << format_characteristic(m) << "\"";
  os << "\n";
  for (std::size_t r = 0; r < chars.size(); ++r) {
    os << "\"" << format_characteristic(chars[r]) << "\"";
    for (std::size_t c = 0; c < chars.size(); ++c) {
      os << "," << format_complex(G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    os << "\n";
  }
  return os.str();
}

// Sum of |terms| of the theta_m series over |j|_inf in (R, R + extra], with
// j the index relative to the rounded centre. Written out independently of
// the evaluator, as the oracle for the certified tail.
double empirical_tail(const PeriodData& p, const Characteristic& m, const Eigen::VectorXcd& z,
                      int R, int extra) {
  const int n = p.n();
  Eigen::VectorXd c(n);
  for (int a = 0; a < n; ++a) c(a) = static_cast<double>(m.m[static_cast<std::size_t>(a)]) / p.delta(a);
  const Eigen::VectorXd s = c + p.W() * z.imag();
  const int outer = R + extra;
  std::vector<int> j(static_cast<std::size_t>(n), -outer);
  double total = 0.0;
  for (;;) {
    int norm = 0;
    for (int v : j) norm = std::max(norm, std::abs(v));
    if (norm > R) {
      Eigen::VectorXd k(n);
      for (int a = 0; a < n; ++a) k(a) = j[static_cast<std::size_t>(a)] - std::nearbyint(s(a));
      // |exp(pi i k.Zk + 2 pi i c.Zk + 2 pi i (k + c).z)|
      const Eigen::VectorXd kc = k + c;
      const double re = -kPi * k.dot(p.im_Z() * k) - 2.0 * kPi * c.dot(p.im_Z() * k) -
                        2.0 * kPi * kc.dot(z.imag());
      total += std::exp(re);
    }
    int a = n - 1;
    while (a >= 0 && ++j[static_cast<std::size_t>(a)] > outer) j[static_cast<std::size_t>(a--)] = -outer;
    if (a < 0) break;
  }
  return total;
}

void suite_core(Context& c, Sampler& rng, Report& r) {
  const int n = c.p.n();
  double coord = 0.0;
  double iso = 0.0;
  for (int i = 0; i < 100; ++i) {
    const RealPoint x{rng.real_box(2 * n, 2.0)};
    coord = std::max(coord, (complex_to_real(c.p, real_to_complex(c.p, x)).coords - x.coords)
                                .cwiseAbs()
                                .maxCoeff());
    const ComplexPoint z{rng.box(n, 2.0)};
    coord = std::max(coord, (real_to_complex(c.p, complex_to_real(c.p, z)).coords - z.coords)
                                .cwiseAbs()
                                .maxCoeff());
    const DualComplexPoint muhat{rng.box(n, 2.0)};
    iso = std::max(iso, (iso_inverse(c.p, iso_forward(c.p, muhat)).coords - muhat.coords)
                            .cwiseAbs()
                            .maxCoeff());
  }
  r.checks.push_back(make_check("core.coordinate_round_trip", coord, 1e-12));
  r.checks.push_back(make_check("core.iso_round_trip", iso, 1e-12));
  const auto count = static_cast<double>(enumerate_characteristics(c.p).size());
  r.checks.push_back(make_check("core.characteristic_count_minus_Delta",
                                std::abs(count - static_cast<double>(c.p.Delta())), 0.0));
}

void suite_theta(Context& c, Sampler& rng, Report& r) {
  const int n = c.p.n();
  const auto chars = enumerate_characteristics(c.p);
  double path = 0.0;
  for (const auto& m : chars) {
    for (int i = 0; i < 50; ++i) {
      const ComplexPoint z = rng.cell_point(c.p);
      const ThetaValue d = theta_m(c.p, m, z, c.plan, ThetaPath::direct);
      const ThetaValue e = theta_m(c.p, m, z, c.plan, ThetaPath::reduce_to_riemann);
      const double allowed = d.tail_bound + e.tail_bound +
                             1e-13 * std::max({1.0, std::abs(d.value), std::abs(e.value)});
      path = std::max(path, std::abs(d.value - e.value) / allowed);
    }
  }
  r.checks.push_back(make_check("theta.path_agreement_over_allowance", path, 1.0));

  double qp = 0.0;
  for (const auto& m : chars) {
    for (int i = 0; i < 20; ++i) {
      const ComplexPoint z = rng.cell_point(c.p);
      for (int g = 1; g <= 2 * n; ++g) qp = std::max(qp, quasiperiodicity_residual(c.p, m, z, g, c.plan));
    }
  }
  r.checks.push_back(make_check("theta.quasi_periodicity", qp, 1e-10));

  double tail_ratio = 0.0;
  double within_eps = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Characteristic& m = chars[static_cast<std::size_t>(i) % chars.size()];
    const ComplexPoint z = rng.cell_point(c.p);
    const ThetaValue v = theta_m(c.p, m, z, c.plan);
    const double oracle = empirical_tail(c.p, m, z.coords, c.plan.radius, n == 1 ? 40 : (n == 2 ? 20 : 6));
    if (oracle > 0.0) tail_ratio = std::max(tail_ratio, v.tail_bound > 0.0 ? oracle / v.tail_bound : 2.0);
    within_eps = std::max(within_eps, v.tail_bound / (c.plan.target_eps * v.envelope));
  }
  r.checks.push_back(make_check("theta.empirical_tail_over_bound", tail_ratio, 1.0));
  r.checks.push_back(make_check("theta.tail_bound_over_eps_envelope", within_eps, 1.0 + 1e-12));
}

void suite_bundles(Context& c, Sampler& rng, Report& r) {
  const int n = c.p.n();
  const ComplexPoint mu{rng.box(n, 1.0)};
  const DualRealPoint xi{rng.real_box(2 * n, 3.0)};
  const DualComplexPoint muhat{rng.box(n, 1.0)};
  const MultiplierParams params{mu, xi, muhat};
  const BundleId ids[] = {BundleId::L0,     BundleId::Lmu,     BundleId::Ktilde,
                          BundleId::PullbackP, BundleId::CalL_xi, BundleId::P_muhat,
                          BundleId::L_Delta_xi};
  double symbolic = 0.0;
  double numeric = 0.0;
  for (BundleId id : ids) {
    const MultiplierSystem ms = multiplier_system(c.p, id, params);
    for (int i = 1; i <= ms.generators(); ++i) {
      for (int j = 1; j <= ms.generators(); ++j) symbolic = std::max(symbolic, symbolic_cocycle_residual(ms, i, j));
    }
    for (int s = 0; s < 20; ++s) {
      const ComplexPoint v = rng.cell_point(c.p);
      const ComplexPoint w = rng.cell_point(c.p);
      for (int i = 1; i <= ms.generators(); ++i) {
        for (int j = 1; j <= ms.generators(); ++j) numeric = std::max(numeric, cocycle_residual(ms, i, j, v, w));
      }
    }
  }
  r.checks.push_back(make_check("bundle.cocycle_symbolic", symbolic, 0.0));
  r.checks.push_back(make_check("bundle.cocycle_numeric", numeric, 1e-12));

  const MultiplierSystem K = multiplier_system(c.p, BundleId::Ktilde);
  const MultiplierSystem Lmu = multiplier_system(c.p, BundleId::Lmu, params);
  double sections = 0.0;
  for (const auto& m : enumerate_characteristics(c.p)) {
    for (int s = 0; s < 20; ++s) {
      const ComplexPoint v = rng.cell_point(c.p);
      const ComplexPoint w = rng.cell_point(c.p);
      for (int g = 1; g <= K.generators(); ++g) {
        sections = std::max(sections, section_transformation_residual(K, m, v, w, g, c.plan));
      }
      for (int g = 1; g <= Lmu.generators(); ++g) {
        sections = std::max(sections, section_transformation_residual(Lmu, m, v, w, g, c.plan));
      }
    }
  }
  r.checks.push_back(make_check("bundle.theta_sections_of_Ktilde_and_Lmu", sections, 1e-10));

  const MetricId metrics[] = {MetricId::h_L0, MetricId::h_Lmu, MetricId::h_P,
                              MetricId::h_Ktilde, MetricId::h_pi1L0, MetricId::h_pi2L0};
  double metric_qp = 0.0;
  double translate = 0.0;
  double factor = 0.0;
  for (int s = 0; s < 20; ++s) {
    const ComplexPoint v = rng.cell_point(c.p);
    const ComplexPoint w = rng.cell_point(c.p);
    for (MetricId id : metrics) {
      const MultiplierSystem ms = metric_multipliers(c.p, id, w);
      for (int g = 1; g <= ms.generators(); ++g) {
        metric_qp = std::max(metric_qp, metric_quasiperiodicity_residual(c.p, id, g, v, w));
      }
    }
    // Compared on log h, relative to its size: exp would turn the last-bit
    // error of a large exponent into a larger relative error of h.
    auto log_defect = [](double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); };
    const double h0 = metric_log(c.p, MetricId::h_L0, ComplexPoint{v.coords + w.coords});
    translate = std::max(translate, log_defect(metric_log(c.p, MetricId::h_Lmu, v, w), h0));
    const double hk = metric_log(c.p, MetricId::h_Ktilde, v, w);
    const double sum = metric_log(c.p, MetricId::h_P, v, w) + metric_log(c.p, MetricId::h_pi1L0, v, w) +
                       metric_log(c.p, MetricId::h_pi2L0, v, w);
    factor = std::max(factor, log_defect(sum, hk));
  }
  r.checks.push_back(make_check("bundle.metric_quasi_periodicity", metric_qp, 1e-12));
  r.checks.push_back(make_check("bundle.h_Lmu_is_translated_h_L0", translate, 1e-14));
  r.checks.push_back(make_check("bundle.h_P_factorization", factor, 1e-14));

  const MultiplierSystem simplified = multiplier_system(c.p, BundleId::L_Delta_xi, params);
  const MultiplierSystem unsimplified = l_delta_xi_unsimplified(c.p, xi);
  double phi_exponent = 0.0;
  double phi_numeric = 0.0;
  double combine = 0.0;
  for (int g = 1; g <= 2 * n; ++g) {
    const cd closed = simplified.exponents[static_cast<std::size_t>(g - 1)].c0;
    phi_exponent = std::max(phi_exponent, std::abs(phi_transformation_exponent(c.p, xi, g) - closed) /
                                              std::max(1.0, std::abs(closed)));
    combine = std::max(combine, std::abs(unsimplified.exponents[static_cast<std::size_t>(g - 1)].c0 - closed) /
                                    std::max(1.0, std::abs(closed)));
    const ComplexPoint z = rng.cell_point(c.p);
    const cd ratio = trivializing_section_phi(c.p, xi, ComplexPoint{z.coords + lattice_generator_shift(c.p, g)}) /
                     trivializing_section_phi(c.p, xi, z);
    const cd expected = std::exp(log_multiplier(simplified, g, z.coords));
    phi_numeric = std::max(phi_numeric, std::abs(ratio - expected) / std::max(1.0, std::abs(expected)));
  }
  r.checks.push_back(make_check("bundle.phi_exponents_match_L_Delta_xi", phi_exponent, 1e-14));
  r.checks.push_back(make_check("bundle.phi_transformation_numeric", phi_numeric, 1e-12));
  r.checks.push_back(make_check("bundle.L_xi_minus_P_equals_simplified", combine, 1e-12));
}

void suite_inner_product(Context& c, Sampler& rng, Report& r) {
  const int n = c.p.n();
  const GramResult g0 = gram_matrix(c.p, ComplexPoint{Eigen::VectorXcd::Zero(n)}, c.q, c.plan);
  const Eigen::MatrixXcd& G = g0.matrix;
  double max_diag = 0.0;
  double min_diag = std::numeric_limits<double>::infinity();
  double off = 0.0;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    max_diag = std::max(max_diag, G(i, i).real());
    min_diag = std::min(min_diag, G(i, i).real());
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
      if (i != j) off = std::max(off, std::abs(G(i, j)));
    }
  }
  r.body.push_back("gram at mu=0:");
  r.body.push_back(matrix_lines(G, "  "));
  r.checks.push_back(make_check("inner.orthogonality_offdiag_over_diag", off / max_diag, 1e-8));
  r.checks.push_back(make_check("inner.norm_vs_closed_form", g0.est_error, 1e-8));
  r.checks.push_back(make_check("inner.hermitian_defect", (G - G.adjoint()).cwiseAbs().maxCoeff(), 1e-13));
  r.checks.push_back(make_floor_check("inner.min_diagonal", min_diag, 0.0));

  double mu_dep = 0.0;
  for (int s = 0; s < 5; ++s) {
    const GramResult g = gram_matrix(c.p, rng.cell_point(c.p), c.q, c.plan);
    mu_dep = std::max(mu_dep, (g.matrix - G).cwiseAbs().maxCoeff() / max_diag);
  }
  r.checks.push_back(make_check("inner.mu_independence", mu_dep, 1e-8));

  // Spectral convergence: each doubling gains 10x until roundoff (1e-14).
  QuadratureSpec q = c.q;
  std::vector<double> err;
  for (int N : {4, 8, 16, 32}) {
    q.nodes_per_axis = N;
    err.push_back(gram_matrix(c.p, ComplexPoint{Eigen::VectorXcd::Zero(n)}, q, c.plan).est_error);
  }
  double conv = 0.0;
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    conv = std::max(conv, err[i + 1] / std::max(err[i] / 10.0, 1e-14));
  }
  std::ostringstream errs;
  errs << "diagonal error at 4/8/16/32 nodes:";
  for (double e : err) errs << " " << format_real(e);
  r.body.push_back(errs.str());
  r.checks.push_back(make_check("inner.convergence_ratio", conv, 1.0 + 1e-12));
  r.checks.push_back(make_floor_check("inner.coarse_error_visible", err.front(), 1e-12));

  const Eigen::MatrixXd A = kPi * c.p.W();
  const Eigen::VectorXd shift = rng.real_box(n, 0.5);
  const auto [unfolded, whole] = unfold_check(A, shift, 6);
  r.checks.push_back(make_check("inner.gaussian_unfolding", std::abs(unfolded - whole) / whole, 1e-8));
}

void add_curvature_checks(Context& c, Sampler& rng, Report& r, bool verbose) {
  const int n = c.p.n();
  const long long dn = c.p.delta_n();
  const long long Delta = c.p.Delta();

  // Printed forms, written out entry by entry.
  SymbolicMatrix theta_L0(n, n);
  SymbolicMatrix theta_hP(2 * n, 2 * n);
  SymbolicMatrix dA(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      theta_L0(a, b) = SymExpr::w(a, b, 1, Unit::pi);
      theta_hP(a, n + b) = SymExpr::w(a, b, 1, Unit::pi);  // dz_a ^ dconj(mu_b)
      theta_hP(n + a, b) = SymExpr::w(a, b, 1, Unit::pi);  // dmu_a ^ dconj(z_b)
      dA(n + b, a) = dA(n + b, a) + SymExpr::w(a, b, Rational(static_cast<long long>(c.p.delta(b)), dn), Unit::pi);
      dA(b, n + a) = dA(b, n + a) + SymExpr::w(a, b, Rational(static_cast<long long>(c.p.delta(a)), dn), Unit::pi);
    }
  }

  int mismatches = 0;
  mismatches += curvature_of_log_quadratic_metric(c.p, MetricId::h_L0).symbolic->mismatches(theta_L0);
  mismatches += curvature_of_log_quadratic_metric(c.p, MetricId::h_P).symbolic->mismatches(theta_hP);
  const ExteriorDerivative d = exterior_derivative(c.p, connection_P(c.p));
  mismatches += d.one_one.symbolic->mismatches(dA);
  mismatches += curvature_P(c.p).symbolic->mismatches(dA);
  r.checks.push_back(make_check("curv.symbolic_vs_printed_mismatches", mismatches, 0.0));

  int nonzero = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      nonzero += d.two_zero(a, b).is_zero() ? 0 : 1;
      nonzero += d.zero_two(a, b).is_zero() ? 0 : 1;
    }
  }
  r.checks.push_back(make_check("curv.dA_20_and_02_nonzero_entries", nonzero, 0.0));

  const TwoForm pulled = pullback_muhat_to_mu(c.p, d.one_one);
  const TwoForm hP = curvature_of_log_quadratic_metric(c.p, MetricId::h_P);
  r.checks.push_back(make_check("curv.pullback_dA_vs_h_P_mismatches", pulled.symbolic->mismatches(*hP.symbolic), 0.0));

  const TwoForm Ep = curvature_direct_image(c.p, Side::E_prime);
  const TwoForm E = curvature_direct_image(c.p, Side::E);
  SymbolicMatrix minus_L0(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) minus_L0(a, b) = -theta_L0(a, b);
  }
  r.checks.push_back(make_check("curv.E_prime_vs_minus_theta_L0_mismatches", Ep.symbolic->mismatches(minus_L0), 0.0));
  r.checks.push_back(make_check("curv.pullback_E_vs_E_prime_mismatches",
                                pullback_muhat_to_mu(c.p, E).symbolic->mismatches(*Ep.symbolic), 0.0));
  r.checks.push_back(make_check("curv.rank_factor_minus_Delta",
                                std::abs(static_cast<double>(Ep.rank_factor - Delta)) +
                                    std::abs(static_cast<double>(E.rank_factor - Delta)),
                                0.0));

  double fd = 0.0;
  const MetricId metrics[] = {MetricId::h_L0, MetricId::h_Lmu, MetricId::h_P,
                              MetricId::h_Ktilde, MetricId::h_pi1L0, MetricId::h_pi2L0};
  for (int s = 0; s < 10; ++s) {
    const ComplexPoint v = rng.cell_point(c.p);
    const ComplexPoint w = rng.cell_point(c.p);
    for (MetricId id : metrics) fd = std::max(fd, curvature_fd_residual(c.p, id, v, w));
  }
  r.checks.push_back(make_check("curv.finite_difference_cross_check", fd, 1e-6));

  const ChernData cd_ = chern_data(c.p);
  Eigen::MatrixXd c1_expected = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  Eigen::MatrixXd eta_expected = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    c1_expected(i, n + i) = -static_cast<double>(Delta) * c.p.delta(i);
    c1_expected(n + i, i) = -c1_expected(i, n + i);
    eta_expected(i, n + i) = -static_cast<double>(Delta / c.p.delta(i));
    eta_expected(n + i, i) = -eta_expected(i, n + i);
  }
  auto defect = [](const Eigen::MatrixXcd& got, const Eigen::MatrixXd& want) {
    return (got - want.cast<cd>()).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
  };
  r.checks.push_back(make_check("curv.c1_E_prime_real_dx", defect(cd_.c1_real.coeffs, c1_expected), 1e-13));
  r.checks.push_back(make_check("curv.c1_E_real_deta", defect(cd_.c1_E_eta.coeffs, eta_expected), 1e-13));
  double integrality = 0.0;
  for (Eigen::Index i = 0; i < cd_.omega_dual.coeffs.rows(); ++i) {
    for (Eigen::Index j = 0; j < cd_.omega_dual.coeffs.cols(); ++j) {
      const cd v = cd_.omega_dual.coeffs(i, j);
      integrality = std::max({integrality, std::abs(v.real() - std::nearbyint(v.real())), std::abs(v.imag())});
    }
  }
  r.checks.push_back(make_check("curv.omega_dual_integrality", integrality, 1e-12));

  long long factorial = 1;
  for (int k = 2; k <= n; ++k) factorial *= k;
  const long long sign = (n * (n + 1) / 2) % 2 == 0 ? 1 : -1;
  long long power = 1;
  for (int k = 0; k <= n; ++k) power *= Delta;
  long long quotient = 1;
  for (int i = 0; i < n; ++i) quotient *= Delta / c.p.delta(i);
  const ChernNumber np = chern_number(c.p, Side::E_prime);
  const ChernNumber ne = chern_number(c.p, Side::E);
  r.checks.push_back(make_check("curv.chern_E_prime_minus_formula",
                                std::abs(static_cast<double>(np.value - sign * factorial * power)), 0.0));
  r.checks.push_back(make_check("curv.chern_E_minus_formula",
                                std::abs(static_cast<double>(ne.value - sign * factorial * quotient)), 0.0));
  r.checks.push_back(make_check("curv.chern_E_times_deg_minus_E_prime",
                                std::abs(static_cast<double>(ne.value * Delta * Delta - np.value)), 0.0));
  r.checks.push_back(make_check("curv.chern_integrality_defect",
                                std::max(np.integrality_defect, ne.integrality_defect), 1e-12));

  if (verbose) {
    std::string sym = theta_L0.str();
    sym.pop_back();
    r.body.push_back("curvature of h_L0 over dmu^dmubar, exact:");
    r.body.push_back(sym);
    r.body.push_back("curvature of h_P over d(z,mu)^d(z,mu)bar:");
    r.body.push_back(matrix_lines(hP.coeffs, "  "));
    r.body.push_back("dA over d(z,muhat)^d(z,muhat)bar:");
    r.body.push_back(matrix_lines(d.one_one.coeffs, "  "));
    r.body.push_back("Theta(E') over dmu^dmubar, times I_" + std::to_string(Ep.rank_factor) + ":");
    r.body.push_back(matrix_lines(Ep.coeffs, "  "));
    r.body.push_back("Theta(E) over dmuhat^dmuhatbar, times I_" + std::to_string(E.rank_factor) + ":");
    r.body.push_back(matrix_lines(E.coeffs, "  "));
    r.body.push_back("c1(E') as the antisymmetric matrix A of sum_{i<j} A_ij dx_i^dx_j:");
    r.body.push_back(matrix_lines(cd_.c1_real.coeffs, "  "));
    r.body.push_back("omega_dual as the antisymmetric matrix A of sum_{i<j} A_ij deta_i^deta_j:");
    r.body.push_back(matrix_lines(cd_.omega_dual.coeffs, "  "));
    r.body.push_back("chern number E': " + std::to_string(np.value));
    r.body.push_back("chern number E: " + std::to_string(ne.value));
  }
}

void suite_flatness(Context& c, Sampler& rng, Report& r) {
  std::vector<ComplexPoint> samples;
  for (int s = 0; s < 5; ++s) samples.push_back(rng.cell_point(c.p));
  const TheoremReport t = verify_theorem_1_1(c.p, c.q, c.plan, samples);
  r.body.push_back("flatness: " + t.note);
  r.checks.push_back(make_check("flat.gram_diagonal_variation", t.variation, 1e-8));
  r.checks.push_back(make_check("flat.ddbar_log_gram", t.ddbar_log_norm, 1e-5));
  r.checks.push_back(make_floor_check("flat.min_closed_form_norm", t.min_closed_form_norm, 0.0));
}

Report run_eval(Context& c, const CommandOptions& opts) {
  Report r;
  r.command = "eval";
  r.header = header_for(c);
  const int n = c.p.n();
  Characteristic m{std::vector<int>(static_cast<std::size_t>(n), 0)};
  if (!opts.m.empty()) {
    if (static_cast<int>(opts.m.size()) != n) {
      throw Error(ErrorCode::DimensionMismatch, "--m needs " + std::to_string(n) + " values");
    }
    m.m = opts.m;
  }
  check_characteristic(c.p, m);
  const ComplexPoint z{complex_flag(opts.z_re, opts.z_im, n, "z")};
  const ThetaValue d = theta_m(c.p, m, z, c.plan, ThetaPath::direct);
  const ThetaValue e = theta_m(c.p, m, z, c.plan, ThetaPath::reduce_to_riemann);
  r.body.push_back("m=" + format_characteristic(m));
  r.body.push_back("theta_m(z)=" + format_complex(d.value));
  r.body.push_back("tail_bound=" + format_real(d.tail_bound));
  r.body.push_back("via riemann theta=" + format_complex(e.value));
  const double allowed = d.tail_bound + e.tail_bound + 1e-13 * std::max({1.0, std::abs(d.value), std::abs(e.value)});
  r.checks.push_back(make_check("theta.path_agreement_over_allowance", std::abs(d.value - e.value) / allowed, 1.0));
  return r;
}

Report run_gram(Context& c, const CommandOptions& opts) {
  Report r;
  r.command = "gram";
  r.header = header_for(c);
  const int n = c.p.n();
  const ComplexPoint mu{complex_flag(opts.mu_re, opts.mu_im, n, "mu")};
  const GramResult g = gram_matrix(c.p, mu, c.q, c.plan);
  double max_diag = 0.0;
  double off = 0.0;
  for (Eigen::Index i = 0; i < g.matrix.rows(); ++i) {
    max_diag = std::max(max_diag, g.matrix(i, i).real());
    for (Eigen::Index j = 0; j < g.matrix.cols(); ++j) {
      if (i != j) off = std::max(off, std::abs(g.matrix(i, j)));
    }
  }
  std::ostringstream mu_line;
  mu_line << "mu=[";
  for (int a = 0; a < n; ++a) mu_line << (a ? "," : "") << format_complex(mu.coords(a));
  mu_line << "]";
  r.body.push_back(mu_line.str());
  r.body.push_back("est_error=" + format_real(g.est_error));
  r.checks.push_back(make_check("inner.orthogonality_offdiag_over_diag", off / max_diag, 1e-8));
  r.checks.push_back(make_check("inner.norm_vs_closed_form", g.est_error, 1e-8));
  r.csv = gram_csv(c.p, g.matrix);
  return r;
}

std::string checks_csv(const Report& r) {
  std::ostringstream os;
  os << "\"check\",\"value\",\"threshold\",\"status\"\n";
  for (const auto& ch : r.checks) {
    os << "\"" << ch.name << "\"," << format_real(ch.value) << "," << format_real(ch.threshold) << ","
       << (ch.pass ? "\"PASS\"" : "\"FAIL\"") << "\n";
  }
  return os.str();
}

}  // namespace

Report run_command(const std::string& command, const Config& cfg, const CommandOptions& opts) {
  if (command != "eval" && command != "gram" && command != "curvature" && command != "verify") {
    throw Error(ErrorCode::UnknownCommand, "unknown command '" + command + "'");
  }
  Context c = make_context(cfg);
  if (command == "eval") return run_eval(c, opts);
  if (command == "gram") return run_gram(c, opts);

  Report r;
  r.command = command;
  r.header = header_for(c);
  Sampler rng(cfg.seed);
  if (command == "curvature") {
    add_curvature_checks(c, rng, r, true);
  } else {
    suite_core(c, rng, r);
    suite_theta(c, rng, r);
    suite_bundles(c, rng, r);
    suite_inner_product(c, rng, r);
    add_curvature_checks(c, rng, r, false);
    suite_flatness(c, rng, r);
  }
  r.csv = checks_csv(r);
  return r;
}

}  // namespace abeltheta
