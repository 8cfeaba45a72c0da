#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abeltheta/inner_product.hpp"
#include "abeltheta/sampling.hpp"
#include "support.hpp"

using namespace abeltheta;
using test::I;

namespace {

constexpr double kPi = std::numbers::pi;

// Trapezoid rule for the n = 1 inner product over the unit square of
// t = (t', t''), z = delta t' + tau t'', with a plain theta sum and
// h = exp(-2 pi (Im z)^2 / Im tau). Jacobian delta Im tau.
cd brute_inner(const PeriodData& p, int m, int m2, cd mu, int N) {
  const double delta = p.delta(0);
  const cd tau = p.Z()(0, 0);
  auto theta = [&](int mm, cd z) {
    const double c = mm / delta;
    cd s = 0.0;
    for (int k = -12; k <= 12; ++k) s += std::exp(I * kPi * (k * k + 2.0 * c * k) * tau + 2.0 * I * kPi * (k + c) * z);
    return s;
  };
  cd sum = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const cd v = delta * (double(i) / N) + tau * (double(j) / N);
      const cd z = v + mu;
      const double h = std::exp(-2.0 * kPi * z.imag() * z.imag() / tau.imag());
      sum += h * theta(m, z) * std::conj(theta(m2, z));
    }
  }
  return sum * delta * tau.imag() / double(N * N);
}

}  // namespace

TEST_CASE("closed-form norms") {
  CHECK(closed_form_norm(test::elliptic(1, I), {{0}}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(closed_form_norm(test::elliptic(2, I), {{0}}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(closed_form_norm(test::elliptic(2, I), {{1}}) ==
        doctest::Approx(std::sqrt(0.5) * 2.0 * std::exp(kPi / 2.0)).epsilon(1e-15));
  CHECK(closed_form_norm(test::surface({1, 1}, I, 0.0, I), {{0, 0}}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("single inner products against the trapezoid oracle") {
  const PeriodData p = test::elliptic(2, I);
  const TruncationPlan plan = radius_for(p, 1e-12);
  QuadratureSpec q;
  const cd off = l2_inner_product_quadrature(p, {{0}}, {{1}}, test::point({0.0}), q, plan);
  CHECK(std::abs(off) < 1e-8 * closed_form_norm(p, {{1}}));

  const cd mu(0.3, 0.2);
  const cd diag = l2_inner_product_quadrature(p, {{1}}, {{1}}, test::point({mu}), q, plan);
  const cd oracle = brute_inner(p, 1, 1, mu, 32);
  CHECK(std::abs(diag - oracle) < 1e-10 * std::abs(oracle));
  // sqrt(1/2) * 2 * e^{pi/2}
  CHECK(std::abs(diag - 6.8030423536502058) < 1e-8 * 6.8);

  const PeriodData one = test::elliptic(1, I);
  const cd n0 = l2_inner_product_quadrature(one, {{0}}, {{0}}, test::point({0.0}), q, radius_for(one, 1e-12));
  CHECK(std::abs(n0 - std::sqrt(0.5)) < 1e-8);
}

TEST_CASE("gram matrices of the catalogue") {
  Sampler rng(21);
  for (const PeriodData& p : test::catalogue()) {
    const TruncationPlan plan = radius_for(p, 1e-12);
    const QuadratureSpec q;
    const GramResult g = gram_matrix(p, ComplexPoint{Eigen::VectorXcd::Zero(p.n())}, q, plan);
    const auto chars = enumerate_characteristics(p);
    double scale = 0.0;
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const auto d = static_cast<Eigen::Index>(i);
      const double exact = closed_form_norm(p, chars[i]);
      CHECK(std::abs(g.matrix(d, d) - exact) < 1e-8 * exact);
      scale = std::max(scale, exact);
    }
    for (Eigen::Index i = 0; i < g.matrix.rows(); ++i) {
      for (Eigen::Index j = 0; j < g.matrix.cols(); ++j) {
        if (i != j) CHECK(std::abs(g.matrix(i, j)) < 1e-8 * scale);
        CHECK(g.matrix(i, j) == std::conj(g.matrix(j, i)));
      }
    }
    CHECK(g.est_error < 1e-8);
    for (int s = 0; s < 5; ++s) {
      const GramResult other = gram_matrix(p, rng.cell_point(p), q, plan);
      CHECK((other.matrix - g.matrix).cwiseAbs().maxCoeff() < 1e-8 * scale);
    }
  }
}

TEST_CASE("the fast kernel matches the pointwise reference") {
  Sampler rng(22);
  for (const PeriodData& p : test::catalogue()) {
    const TruncationPlan plan = radius_for(p, 1e-12);
    QuadratureSpec q;
    q.nodes_per_axis = p.n() == 1 ? 24 : 8;
    const ComplexPoint mu = rng.cell_point(p);
    const GramResult fast = gram_matrix(p, mu, q, plan);
    const GramResult ref = gram_matrix_reference(p, mu, q, plan);
    CHECK((fast.matrix - ref.matrix).cwiseAbs().maxCoeff() < 1e-12 * ref.matrix.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("parallel and serial kernels give identical bits") {
  const PeriodData p = test::surface({1, 2}, I, 0.2, 2.0 * I);
  const TruncationPlan plan = radius_for(p, 1e-12);
  QuadratureSpec par, ser;
  par.nodes_per_axis = ser.nodes_per_axis = 16;
  ser.parallel = false;
  const ComplexPoint mu = test::point({cd(0.1, 0.2), cd(-0.3, 0.4)});
  CHECK(gram_matrix(p, mu, par, plan).matrix == gram_matrix(p, mu, ser, plan).matrix);
}

TEST_CASE("diagonal error gains a decade per doubling until roundoff") {
  for (const PeriodData& p : test::catalogue()) {
    const TruncationPlan plan = radius_for(p, 1e-12);
    QuadratureSpec q;
    std::vector<double> err;
    for (int N : {4, 8, 16, 32}) {
      q.nodes_per_axis = N;
      err.push_back(gram_matrix(p, ComplexPoint{Eigen::VectorXcd::Zero(p.n())}, q, plan).est_error);
    }
    CHECK(err.front() > 1e-12);
    for (std::size_t i = 0; i + 1 < err.size(); ++i) CHECK(err[i + 1] <= std::max(err[i] / 10.0, 1e-14));
  }
}

TEST_CASE("a mu-dependent metric factor is visible in the gram diagonal") {
  const PeriodData p = test::elliptic(2, I);
  const TruncationPlan plan = radius_for(p, 1e-12);
  QuadratureSpec q;
  q.metric_log_scale = [](const ComplexPoint& mu) { return mu.coords.squaredNorm(); };
  const GramResult a = gram_matrix(p, test::point({0.0}), q, plan);
  const GramResult b = gram_matrix(p, test::point({cd(0.5, 0.5)}), q, plan);
  CHECK(std::abs(b.matrix(0, 0) - a.matrix(0, 0)) / a.matrix(0, 0).real() > 1e-3);
}

TEST_CASE("gaussian integral") {
  CHECK(gaussian_integral(Eigen::MatrixXd::Identity(1, 1)) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-15));
  const Eigen::MatrixXd A = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  CHECK(gaussian_integral(A) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  // Trapezoid over [-8, 8]^2, exact to roundoff for a Gaussian this narrow.
  const int N = 320;
  const double h = 16.0 / N;
  double s = 0.0;
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      const double x = -8.0 + i * h, y = -8.0 + j * h;
      const double w = (i == 0 || i == N ? 0.5 : 1.0) * (j == 0 || j == N ? 0.5 : 1.0);
      s += w * std::exp(-2.0 * (x * x + y * y));
    }
  }
  CHECK(std::abs(s * h * h - gaussian_integral(A)) < 1e-12);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  try {
    gaussian_integral(indefinite);
    FAIL("indefinite form accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}

TEST_CASE("unfolding the lattice sum recovers the whole-space integral") {
  const Eigen::MatrixXd A1 = kPi * Eigen::MatrixXd::Identity(1, 1);
  const auto [u8, w8] = unfold_check(A1, Eigen::VectorXd::Constant(1, 0.3), 8);
  CHECK(u8 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w8 == doctest::Approx(1.0).epsilon(1e-15));

  double previous = 1.0;
  const double reference = unfold_check(A1, Eigen::VectorXd::Zero(1), 8).first;
  for (int K : {0, 1, 2}) {
    const double gap = std::abs(unfold_check(A1, Eigen::VectorXd::Zero(1), K).first - reference);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 1e-6);

  const Eigen::MatrixXd A2 = kPi * Eigen::MatrixXd::Identity(2, 2);
  const auto [u2, w2] = unfold_check(A2, Eigen::Vector2d(0.1, 0.7), 6);
  CHECK(std::abs(u2 - 1.0) < 1e-8);
  CHECK(std::abs(w2 - 1.0) < 1e-8);
}
