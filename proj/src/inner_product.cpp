#include "abeltheta/inner_product.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "abeltheta/bundle_metrics.hpp"
#include "abeltheta/compensated.hpp"

namespace abeltheta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGaussPoints = 30;

double diagonal_error(const PeriodData& p, const std::vector<Characteristic>& chars,
                      const Eigen::MatrixXcd& G) {
  double worst = 0.0;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const double exact = closed_form_norm(p, chars[i]);
    const auto k = static_cast<Eigen::Index>(i);
    worst = std::max(worst, std::abs(G(k, k).real() - exact) / exact);
  }
  return worst;
}

}  // namespace

cd l2_inner_product_quadrature(const PeriodData& p, const Characteristic& m,
                               const Characteristic& m2, const ComplexPoint& mu,
                               const QuadratureSpec& q, const TruncationPlan& plan) {
  if (m == m2) return detail::gram_kernel(p, {m}, mu, q, plan)(0, 0);
  return detail::gram_kernel(p, {m, m2}, mu, q, plan)(0, 1);
}

double closed_form_norm(const PeriodData& p, const Characteristic& m) {
  check_characteristic(p, m);
  const int n = p.n();
  const Eigen::MatrixXd B = p.im_Z();
  double quad = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      quad += B(a, b) * m.m[static_cast<std::size_t>(a)] * m.m[static_cast<std::size_t>(b)] /
              (static_cast<double>(p.delta(a)) * p.delta(b));
    }
  }
  const double det_half = p.det_im_Z() / std::pow(2.0, n);
  return std::sqrt(det_half) * static_cast<double>(p.Delta()) * std::exp(2.0 * kPi * quad);
}

GramResult gram_matrix(const PeriodData& p, const ComplexPoint& mu, const QuadratureSpec& q,
                       const TruncationPlan& plan) {
  const auto chars = enumerate_characteristics(p);
  GramResult out{detail::gram_kernel(p, chars, mu, q, plan), mu, 0.0};
  out.est_error = diagonal_error(p, chars, out.matrix);
  return out;
}

GramResult gram_matrix_reference(const PeriodData& p, const ComplexPoint& mu,
                                 const QuadratureSpec& q, const TruncationPlan& plan) {
  const int n = p.n();
  const int N = q.nodes_per_axis;
  if (N < 4) throw Error(ErrorCode::InvalidArgument, "nodes_per_axis must be >= 4");
  if (mu.coords.size() != n) throw Error(ErrorCode::DimensionMismatch, "mu has wrong dimension");
  const auto chars = enumerate_characteristics(p);
  const auto C = static_cast<Eigen::Index>(chars.size());
  const double log_scale = q.metric_log_scale ? q.metric_log_scale(mu) : 0.0;

  std::size_t total = 1;
  for (int a = 0; a < 2 * n; ++a) total *= static_cast<std::size_t>(N);

  std::vector<CompensatedComplexSum> acc(static_cast<std::size_t>(C * C));
  std::vector<cd> theta(static_cast<std::size_t>(C));
  RealPoint t{Eigen::VectorXd(2 * n)};
  for (std::size_t node = 0; node < total; ++node) {
    std::size_t rest = node;
    for (int a = 2 * n - 1; a >= 0; --a) {
      t.coords(a) = static_cast<double>(rest % static_cast<std::size_t>(N)) / N;
      rest /= static_cast<std::size_t>(N);
    }
    const ComplexPoint v = real_to_complex(p, t);
    const double h = std::exp(metric_log(p, MetricId::h_Lmu, v, mu) + log_scale);
    for (Eigen::Index i = 0; i < C; ++i) {
      theta[static_cast<std::size_t>(i)] =
          theta_m_translated(p, chars[static_cast<std::size_t>(i)], v, mu, plan).value;
    }
    for (Eigen::Index r = 0; r < C; ++r) {
      for (Eigen::Index c = 0; c < C; ++c) {
        acc[static_cast<std::size_t>(r * C + c)].add(
            h * theta[static_cast<std::size_t>(r)] * std::conj(theta[static_cast<std::size_t>(c)]));
      }
    }
  }
  const double cell = static_cast<double>(p.Delta()) * p.det_im_Z() / static_cast<double>(total);
  GramResult out{Eigen::MatrixXcd(C, C), mu, 0.0};
  for (Eigen::Index r = 0; r < C; ++r) {
    for (Eigen::Index c = 0; c < C; ++c) out.matrix(r, c) = cell * acc[static_cast<std::size_t>(r * C + c)].value();
  }
  out.est_error = diagonal_error(p, chars, out.matrix);
  return out;
}

double gaussian_integral(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "gaussian_integral needs a nonempty square matrix");
  }
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::NotSymmetric, "gaussian_integral needs a symmetric matrix");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "gaussian_integral needs a positive definite matrix");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  double det = 1.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) det *= L(i, i) * L(i, i);
  return std::pow(kPi, 0.5 * static_cast<double>(A.rows())) / std::sqrt(det);
}

std::pair<double, double> unfold_check(const Eigen::MatrixXd& A, const Eigen::VectorXd& shift,
                                       int K) {
  const double whole = gaussian_integral(A);
  const auto n = static_cast<int>(A.rows());
  if (shift.size() != n) throw Error(ErrorCode::DimensionMismatch, "shift has wrong dimension");
  if (K < 0) throw Error(ErrorCode::InvalidArgument, "K must be >= 0");

  // Gauss-Legendre on [0, 1] from the symmetric rule on [-1, 1].
  using Rule = boost::math::quadrature::gauss<double, kGaussPoints>;
  std::vector<double> x;
  std::vector<double> w;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    for (double sign : {-1.0, 1.0}) {
      if (abscissa[i] == 0.0 && sign > 0) continue;
      x.push_back(0.5 + 0.5 * sign * abscissa[i]);
      w.push_back(0.5 * weights[i]);
    }
  }
  const auto P = static_cast<int>(x.size());

  // The cell sum equals the integral over [-K, K+1]^n shifted; walk cells
  // and points in a fixed order.
  CompensatedSum total;
  std::vector<int> cell(static_cast<std::size_t>(n), -K);
  std::vector<int> point(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd u(n);
  for (;;) {
    std::fill(point.begin(), point.end(), 0);
    for (;;) {
      double weight = 1.0;
      for (int a = 0; a < n; ++a) {
        const auto pa = static_cast<std::size_t>(point[static_cast<std::size_t>(a)]);
        u(a) = x[pa] + cell[static_cast<std::size_t>(a)] + shift(a);
        weight *= w[pa];
      }
      total.add(weight * std::exp(-u.dot(A * u)));
      int a = n - 1;
      while (a >= 0 && ++point[static_cast<std::size_t>(a)] == P) point[static_cast<std::size_t>(a--)] = 0;
      if (a < 0) break;
    }
    int a = n - 1;
    while (a >= 0 && ++cell[static_cast<std::size_t>(a)] > K) cell[static_cast<std::size_t>(a--)] = -K;
    if (a < 0) break;
  }
  return {total.value(), whole};
}

}  // namespace abeltheta
