#include "abeltheta/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace abeltheta {

namespace {

constexpr double kPi = std::numbers::pi;

using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXcd&)>;

// d d-bar of every component of f, by central differences on the 2d real
// variables (Re w, Im w).
std::vector<Eigen::MatrixXcd> ddbar_components(const VectorFn& f, const Eigen::VectorXcd& w,
                                               double h) {
  const auto d = static_cast<int>(w.size());
  const int r = 2 * d;
  auto at = [&](int u, double su, int v, double sv) {
    Eigen::VectorXcd x = w;
    auto bump = [&](int idx, double s) {
      if (idx < 0 || s == 0.0) return;
      const cd step = idx < d ? cd(s * h, 0.0) : cd(0.0, s * h);
      x(idx % d) += step;
    };
    bump(u, su);
    bump(v, sv);
    return f(x);
  };
  const Eigen::VectorXd centre = f(w);
  const auto comps = centre.size();
  std::vector<Eigen::MatrixXd> hess(static_cast<std::size_t>(comps), Eigen::MatrixXd::Zero(r, r));
  for (int u = 0; u < r; ++u) {
    const Eigen::VectorXd second = (at(u, 1, -1, 0) - 2.0 * centre + at(u, -1, -1, 0)) / (h * h);
    for (Eigen::Index c = 0; c < comps; ++c) hess[static_cast<std::size_t>(c)](u, u) = second(c);
    for (int v = u + 1; v < r; ++v) {
      const Eigen::VectorXd mixed =
          (at(u, 1, v, 1) - at(u, 1, v, -1) - at(u, -1, v, 1) + at(u, -1, v, -1)) / (4.0 * h * h);
      for (Eigen::Index c = 0; c < comps; ++c) {
        hess[static_cast<std::size_t>(c)](u, v) = mixed(c);
        hess[static_cast<std::size_t>(c)](v, u) = mixed(c);
      }
    }
  }
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& D : hess) {
    Eigen::MatrixXcd H(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        H(a, b) = 0.25 * cd(D(a, b) + D(d + a, d + b), D(a, d + b) - D(d + a, b));
      }
    }
    out.push_back(H);
  }
  return out;
}

SymbolicMatrix symbolic_quadratic(const PeriodData& p, MetricId id) {
  const int n = p.n();
  auto pw = [](int a, int b) { return SymExpr::w(a, b, 1, Unit::pi); };
  if (id == MetricId::h_L0) {
    SymbolicMatrix S(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) S(a, b) = pw(a, b);
    }
    return S;
  }
  SymbolicMatrix S(2 * n, 2 * n);
  const bool zz = id == MetricId::h_Lmu || id == MetricId::h_Ktilde || id == MetricId::h_pi1L0;
  const bool mm = id == MetricId::h_Lmu || id == MetricId::h_Ktilde || id == MetricId::h_pi2L0;
  const bool zm = id == MetricId::h_Lmu || id == MetricId::h_Ktilde || id == MetricId::h_P;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (zz) S(a, b) = pw(a, b);
      if (mm) S(n + a, n + b) = pw(a, b);
      if (zm) {
        S(a, n + b) = pw(a, b);
        S(n + a, b) = pw(a, b);
      }
    }
  }
  return S;
}

Rational ratio(long long num, long long den) { return {num, den}; }

SymbolicMatrix zeros(int rows, int cols) { return SymbolicMatrix(rows, cols); }

}  // namespace

std::string_view to_string(FormBasis b) {
  switch (b) {
    case FormBasis::dz_dzbar: return "dz^dzbar";
    case FormBasis::dmu_dmubar: return "dmu^dmubar";
    case FormBasis::dmuhat_dmuhatbar: return "dmuhat^dmuhatbar";
    case FormBasis::real_dx: return "dx_i^dx_j";
    case FormBasis::real_deta: return "deta_i^deta_j";
    case FormBasis::mixed_z_mu: return "d(z,mu)^d(z,mu)bar";
    case FormBasis::mixed_z_muhat: return "d(z,muhat)^d(z,muhat)bar";
  }
  return "unknown";
}

bool is_real_basis(FormBasis b) { return b == FormBasis::real_dx || b == FormBasis::real_deta; }

TwoForm curvature_of_log_quadratic_metric(const PeriodData& p, MetricId id) {
  const LogQuadraticMetric metric = log_quadratic_metric(p, id);
  TwoForm out;
  out.basis = id == MetricId::h_L0 ? FormBasis::dmu_dmubar : FormBasis::mixed_z_mu;
  out.coeffs = (kPi * metric.quadratic).cast<cd>();
  out.symbolic = symbolic_quadratic(p, id);
  return out;
}

Eigen::MatrixXcd ddbar_finite_difference(const std::function<double(const Eigen::VectorXcd&)>& f,
                                         const Eigen::VectorXcd& w, double step, bool richardson) {
  const VectorFn g = [&](const Eigen::VectorXcd& x) { return Eigen::VectorXd::Constant(1, f(x)); };
  const Eigen::MatrixXcd coarse = ddbar_components(g, w, step).front();
  if (!richardson) return coarse;
  const Eigen::MatrixXcd fine = ddbar_components(g, w, 0.5 * step).front();
  return (4.0 * fine - coarse) / 3.0;
}

double curvature_fd_residual(const PeriodData& p, MetricId id, const ComplexPoint& v,
                             const ComplexPoint& mu) {
  const int n = p.n();
  const TwoForm exact = curvature_of_log_quadratic_metric(p, id);
  Eigen::MatrixXcd fd;
  if (id == MetricId::h_L0) {
    fd = ddbar_finite_difference(
        [&](const Eigen::VectorXcd& x) { return -metric_log(p, id, ComplexPoint{x}); }, v.coords,
        1e-3, true);
  } else {
    Eigen::VectorXcd w(2 * n);
    w << v.coords, mu.coords;
    fd = ddbar_finite_difference(
        [&](const Eigen::VectorXcd& x) {
          return -metric_log(p, id, ComplexPoint{x.head(n)}, ComplexPoint{x.tail(n)});
        },
        w, 1e-3, true);
  }
  return (fd - exact.coeffs).cwiseAbs().maxCoeff();
}

ConnectionForm connection_P(const PeriodData& p) {
  const int n = p.n();
  ConnectionForm A{n, zeros(n, n), zeros(n, n), zeros(n, n), zeros(n, n)};
  const long long dn = p.delta_n();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      // pi W_ab (delta_b/delta_n) muhat_b dzbar_a
      A.dzbar_muhat(a, b) = A.dzbar_muhat(a, b) + SymExpr::w(a, b, ratio(p.delta(b), dn), Unit::pi);
      // -pi W_ab (delta_a/delta_n) conj(muhat_a) dz_b
      A.dz_conj_muhat(b, a) =
          A.dz_conj_muhat(b, a) + SymExpr::w(a, b, -ratio(p.delta(a), dn), Unit::pi);
    }
  }
  return A;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> evaluate_connection(const PeriodData& p,
                                                                  const ConnectionForm& A,
                                                                  const DualComplexPoint& muhat) {
  const Eigen::VectorXcd& u = muhat.coords;
  const Eigen::VectorXcd ub = u.conjugate();
  Eigen::VectorXcd dz = A.dz_muhat.evaluate(p) * u + A.dz_conj_muhat.evaluate(p) * ub;
  Eigen::VectorXcd dzbar = A.dzbar_muhat.evaluate(p) * u + A.dzbar_conj_muhat.evaluate(p) * ub;
  return {dz, dzbar};
}

ExteriorDerivative exterior_derivative(const PeriodData& p, const ConnectionForm& A) {
  const int n = A.n;
  SymbolicMatrix H(2 * n, 2 * n);
  SymbolicMatrix two_zero(n, n);
  SymbolicMatrix zero_two(n, n);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      // d(muhat_a) ^ dz_b
      two_zero(a, b) = two_zero(a, b) + A.dz_muhat(b, a);
      // d(conj muhat_a) ^ dz_b = -dz_b ^ d(conj muhat_a)
      H(b, n + a) = H(b, n + a) - A.dz_conj_muhat(b, a);
      // d(muhat_a) ^ dzbar_b
      H(n + a, b) = H(n + a, b) + A.dzbar_muhat(b, a);
      // d(conj muhat_a) ^ dzbar_b
      zero_two(a, b) = zero_two(a, b) + A.dzbar_conj_muhat(b, a);
    }
  }
  TwoForm form{FormBasis::mixed_z_muhat, H.evaluate(p), 1, H};
  return {form, two_zero, zero_two};
}

TwoForm curvature_P(const PeriodData& p) {
  const int n = p.n();
  const long long dn = p.delta_n();
  SymbolicMatrix H(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      // pi W_ab (delta_b/delta_n) dmuhat_b ^ dzbar_a
      H(n + b, a) = H(n + b, a) + SymExpr::w(a, b, ratio(p.delta(b), dn), Unit::pi);
      // -pi W_ab (delta_a/delta_n) dconj(muhat_a) ^ dz_b = +... dz_b ^ dconj(muhat_a)
      H(b, n + a) = H(b, n + a) + SymExpr::w(a, b, ratio(p.delta(a), dn), Unit::pi);
    }
  }
  return {FormBasis::mixed_z_muhat, H.evaluate(p), 1, H};
}

TwoForm pullback_muhat_to_mu(const PeriodData& p, const TwoForm& form) {
  const int n = p.n();
  int offset = 0;
  TwoForm out = form;
  if (form.basis == FormBasis::mixed_z_muhat) {
    offset = n;
    out.basis = FormBasis::mixed_z_mu;
  } else if (form.basis == FormBasis::dmuhat_dmuhatbar) {
    out.basis = FormBasis::dmu_dmubar;
  } else {
    throw Error(ErrorCode::InvalidArgument, "pullback needs a form written over muhat");
  }
  const auto dim = static_cast<int>(form.coeffs.rows());
  auto factor = [&](int idx) -> Rational {
    if (idx < offset) return 1;
    return ratio(p.delta_n(), p.delta(idx - offset));
  };
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const Rational f = factor(i) * factor(j);
      out.coeffs(i, j) *= static_cast<double>(f.numerator()) / static_cast<double>(f.denominator());
      if (out.symbolic) (*out.symbolic)(i, j) = (*form.symbolic)(i, j).scaled(f);
    }
  }
  return out;
}

TwoForm curvature_direct_image(const PeriodData& p, Side side) {
  const int n = p.n();
  const long long dn = p.delta_n();
  SymbolicMatrix S(n, n);
  Eigen::MatrixXcd coeffs(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Rational r = side == Side::E_prime
                             ? Rational(-1)
                             : -ratio(static_cast<long long>(p.delta(a)) * p.delta(b), dn * dn);
      S(a, b) = SymExpr::w(a, b, r, Unit::pi);
      coeffs(a, b) = -kPi * p.W()(a, b) *
                     (side == Side::E_prime
                          ? 1.0
                          : static_cast<double>(p.delta(a)) * p.delta(b) / (double(dn) * dn));
    }
  }
  const FormBasis basis = side == Side::E_prime ? FormBasis::dmu_dmubar : FormBasis::dmuhat_dmuhatbar;
  return {basis, coeffs, static_cast<int>(p.Delta()), S};
}

TwoForm chern_form(const TwoForm& curvature) {
  if (is_real_basis(curvature.basis)) {
    throw Error(ErrorCode::InvalidArgument, "chern_form needs a holomorphic-basis curvature");
  }
  TwoForm out = curvature;
  out.coeffs *= cd(0.0, 1.0 / (2.0 * kPi)) * static_cast<double>(curvature.rank_factor);
  out.rank_factor = 1;
  if (curvature.symbolic) {
    SymbolicMatrix S = *curvature.symbolic;
    for (int i = 0; i < S.rows(); ++i) {
      for (int j = 0; j < S.cols(); ++j) {
        const SymExpr& e = S(i, j);
        if (!e.is_zero() && e.unit() != Unit::pi) {
          throw Error(ErrorCode::InvalidArgument, "curvature entries must carry a factor pi");
        }
        S(i, j) = e.scaled(curvature.rank_factor).with_unit(Unit::half_i);
      }
    }
    out.symbolic = S;
  }
  return out;
}

TwoForm to_real_basis(const PeriodData& p, const TwoForm& form) {
  const int n = p.n();
  Eigen::MatrixXcd M(n, 2 * n);
  TwoForm out;
  out.rank_factor = form.rank_factor;
  if (form.basis == FormBasis::dmu_dmubar) {
    M.leftCols(n) = p.delta_matrix().cast<cd>();
    M.rightCols(n) = p.Z();
    out.basis = FormBasis::real_dx;
  } else if (form.basis == FormBasis::dmuhat_dmuhatbar) {
    const Eigen::MatrixXcd Dinv = p.delta_matrix().inverse().cast<cd>();
    M.leftCols(n) = static_cast<double>(p.delta_n()) * Dinv * p.Z() * Dinv;
    M.rightCols(n) = -static_cast<double>(p.delta_n()) * Dinv;
    out.basis = FormBasis::real_deta;
  } else {
    throw Error(ErrorCode::InvalidArgument, "to_real_basis needs a dmu or dmuhat form");
  }
  const Eigen::MatrixXcd C = M.transpose() * form.coeffs * M.conjugate();
  out.coeffs = C - C.transpose();
  return out;
}

ChernData chern_data(const PeriodData& p) {
  ChernData d;
  d.c1_E_prime = chern_form(curvature_direct_image(p, Side::E_prime));
  d.c1_E = chern_form(curvature_direct_image(p, Side::E));
  d.c1_real = to_real_basis(p, d.c1_E_prime);
  d.c1_E_eta = to_real_basis(p, d.c1_E);
  d.omega_dual = d.c1_E_eta;
  d.omega_dual.coeffs = -d.c1_E_eta.coeffs;
  return d;
}

long long integer_pfaffian(const std::vector<std::vector<long long>>& A) {
  const std::size_t m = A.size();
  if (m == 0) return 1;
  if (m % 2 == 1) return 0;
  // Expansion along the first row: Pf(A) = sum_j (-1)^{j+1} a_{0j} Pf(A without rows/cols 0, j).
  long long total = 0;
  for (std::size_t j = 1; j < m; ++j) {
    if (A[0][j] == 0) continue;
    std::vector<std::size_t> keep;
    for (std::size_t k = 1; k < m; ++k) {
      if (k != j) keep.push_back(k);
    }
    std::vector<std::vector<long long>> minor(keep.size(), std::vector<long long>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
      for (std::size_t c = 0; c < keep.size(); ++c) minor[r][c] = A[keep[r]][keep[c]];
    }
    const long long sign = (j % 2 == 1) ? 1 : -1;
    total += sign * A[0][j] * integer_pfaffian(minor);
  }
  return total;
}

ChernNumber chern_number(const PeriodData& p, Side side) {
  const ChernData d = chern_data(p);
  const TwoForm& form = side == Side::E_prime ? d.c1_real : d.c1_E_eta;
  const auto m = static_cast<std::size_t>(form.coeffs.rows());
  std::vector<std::vector<long long>> A(m, std::vector<long long>(m));
  ChernNumber out;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const cd v = form.coeffs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double r = std::nearbyint(v.real());
      out.integrality_defect = std::max({out.integrality_defect, std::abs(v.real() - r), std::abs(v.imag())});
      A[i][j] = static_cast<long long>(r);
    }
  }
  long long factorial = 1;
  for (int k = 2; k <= p.n(); ++k) factorial *= k;
  out.value = factorial * integer_pfaffian(A);
  return out;
}

FlatnessReport flatness_report_K(const PeriodData& p, const std::vector<ComplexPoint>& mu_samples,
                                 const QuadratureSpec& q, const TruncationPlan& plan) {
  if (mu_samples.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "flatness check needs at least 3 mu samples");
  }
  FlatnessReport report;
  for (const auto& mu : mu_samples) report.grams.push_back(gram_matrix(p, mu, q, plan));
  const auto C = report.grams.front().matrix.rows();
  for (Eigen::Index m = 0; m < C; ++m) {
    double lo = report.grams.front().matrix(m, m).real();
    double hi = lo;
    for (const auto& g : report.grams) {
      lo = std::min(lo, g.matrix(m, m).real());
      hi = std::max(hi, g.matrix(m, m).real());
    }
    report.variation = std::max(report.variation, (hi - lo) / hi);
  }
  const VectorFn log_diag = [&](const Eigen::VectorXcd& mu) {
    const GramResult g = gram_matrix(p, ComplexPoint{mu}, q, plan);
    Eigen::VectorXd out(C);
    for (Eigen::Index m = 0; m < C; ++m) out(m) = std::log(g.matrix(m, m).real());
    return out;
  };
  for (const auto& H : ddbar_components(log_diag, mu_samples.front().coords, 1e-2)) {
    report.ddbar_log_norm = std::max(report.ddbar_log_norm, H.cwiseAbs().maxCoeff());
  }
  return report;
}

TheoremReport verify_theorem_1_1(const PeriodData& p, const QuadratureSpec& q,
                                 const TruncationPlan& plan,
                                 const std::vector<ComplexPoint>& mu_samples) {
  const FlatnessReport flat = flatness_report_K(p, mu_samples, q, plan);
  TheoremReport r;
  r.variation = flat.variation;
  r.ddbar_log_norm = flat.ddbar_log_norm;
  r.min_closed_form_norm = std::numeric_limits<double>::infinity();
  for (const auto& m : enumerate_characteristics(p)) {
    r.min_closed_form_norm = std::min(r.min_closed_form_norm, closed_form_norm(p, m));
  }
  r.pass = r.variation < 1e-8 && r.min_closed_form_norm > 0.0;
  std::ostringstream os;
  os << "Gram diagonal variation across " << mu_samples.size() << " translations "
     << (r.variation < 1e-8 ? "below" : "above") << " 1e-8; every theta_m has positive norm "
     << "so each is a nowhere-vanishing section of its summand of K. These are numerical "
        "consequences of the triviality of K, not a proof of it.";
  r.note = os.str();
  return r;
}

}  // namespace abeltheta
