#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abeltheta/curvature.hpp"
#include "abeltheta/sampling.hpp"
#include "support.hpp"

using namespace abeltheta;
using test::I;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("finite-difference ddbar of known functions") {
  // d dbar |w|^2 = 1 on the diagonal; a constant has none.
  auto norm2 = [](const Eigen::VectorXcd& w) { return w.squaredNorm(); };
  const Eigen::VectorXcd w = test::point({cd(0.3, -0.2), cd(1.0, 0.5)}).coords;
  const Eigen::MatrixXcd H = ddbar_finite_difference(norm2, w, 1e-3, true);
  CHECK((H - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
  const Eigen::MatrixXcd Z = ddbar_finite_difference([](const Eigen::VectorXcd&) { return 4.0; }, w, 1e-3, true);
  CHECK(Z.cwiseAbs().maxCoeff() == 0.0);
  // Re(w1 conj(w2)) has d_1 dbar_2 = 1/2.
  auto mixed = [](const Eigen::VectorXcd& v) { return (v(0) * std::conj(v(1))).real(); };
  const Eigen::MatrixXcd M = ddbar_finite_difference(mixed, w, 1e-3, true);
  CHECK(std::abs(M(0, 1) - 0.5) < 1e-8);
  CHECK(std::abs(M(0, 0)) < 1e-8);
}

TEST_CASE("curvature of h_L0 on the square torus is pi") {
  const PeriodData p = test::elliptic(1, I);
  const TwoForm t = curvature_of_log_quadratic_metric(p, MetricId::h_L0);
  CHECK(t.basis == FormBasis::dmu_dmubar);
  CHECK(std::abs(t.coeffs(0, 0) - kPi) < 1e-15);
  CHECK(t.symbolic->str() == "[pi*(W11)]\n");
  CHECK(curvature_fd_residual(p, MetricId::h_L0, test::point({cd(0.2, 0.3)}), test::point({0.0})) < 1e-6);
}

TEST_CASE("curvature of h_P couples z and mu through W") {
  const PeriodData p = test::surface({1, 2}, I, 0.2, 2.0 * I);
  const TwoForm t = curvature_of_log_quadratic_metric(p, MetricId::h_P);
  SymbolicMatrix want(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      want(a, 2 + b) = SymExpr::w(a, b, 1, Unit::pi);
      want(2 + a, b) = SymExpr::w(a, b, 1, Unit::pi);
    }
  }
  CHECK(t.symbolic->mismatches(want) == 0);
  CHECK((t.coeffs - want.evaluate(p)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("exact curvatures match finite differences") {
  Sampler rng(31);
  for (const PeriodData& p : test::catalogue()) {
    for (int s = 0; s < 10; ++s) {
      const ComplexPoint v = rng.cell_point(p), mu = rng.cell_point(p);
      for (MetricId id : {MetricId::h_L0, MetricId::h_Lmu, MetricId::h_P, MetricId::h_Ktilde,
                          MetricId::h_pi1L0, MetricId::h_pi2L0}) {
        CHECK(curvature_fd_residual(p, id, v, mu) < 1e-6);
      }
    }
  }
}

TEST_CASE("the Poincare connection") {
  const PeriodData p = test::elliptic(1, I);
  const ConnectionForm A = connection_P(p);
  const auto [dz, dzbar] = evaluate_connection(p, A, DualComplexPoint{Eigen::VectorXcd::Zero(1)});
  CHECK(dz.cwiseAbs().maxCoeff() == 0.0);
  CHECK(dzbar.cwiseAbs().maxCoeff() == 0.0);

  const ExteriorDerivative d = exterior_derivative(p, A);
  CHECK(d.two_zero(0, 0).is_zero());
  CHECK(d.zero_two(0, 0).is_zero());
  // pi (dmuhat ^ dzbar - dconj(muhat) ^ dz) over w = (z, muhat).
  CHECK(d.one_one.basis == FormBasis::mixed_z_muhat);
  CHECK(std::abs(d.one_one.coeffs(1, 0) - kPi) < 1e-15);
  CHECK(std::abs(d.one_one.coeffs(0, 1) - kPi) < 1e-15);
  CHECK(std::abs(d.one_one.coeffs(0, 0)) == 0.0);
  CHECK(std::abs(d.one_one.coeffs(1, 1)) == 0.0);
}

TEST_CASE("dA is the printed curvature and pulls back to the h_P curvature") {
  for (const PeriodData& p : test::catalogue()) {
    const ExteriorDerivative d = exterior_derivative(p, connection_P(p));
    const int n = p.n();
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        CHECK(d.two_zero(a, b).is_zero());
        CHECK(d.zero_two(a, b).is_zero());
      }
    }
    CHECK(d.one_one.symbolic->mismatches(*curvature_P(p).symbolic) == 0);
    const TwoForm pulled = pullback_muhat_to_mu(p, d.one_one);
    CHECK(pulled.basis == FormBasis::mixed_z_mu);
    CHECK(pulled.symbolic->mismatches(*curvature_of_log_quadratic_metric(p, MetricId::h_P).symbolic) == 0);
  }
}

TEST_CASE("curvature of the direct image bundles") {
  const PeriodData one = test::elliptic(1, I);
  const TwoForm e = curvature_direct_image(one, Side::E);
  CHECK(std::abs(e.coeffs(0, 0) + kPi) < 1e-15);
  CHECK(e.rank_factor == 1);

  for (const PeriodData& p : test::catalogue()) {
    const TwoForm ep = curvature_direct_image(p, Side::E_prime);
    const TwoForm eq = curvature_direct_image(p, Side::E);
    CHECK(ep.rank_factor == p.Delta());
    SymbolicMatrix minus_l0 = *curvature_of_log_quadratic_metric(p, MetricId::h_L0).symbolic;
    for (int a = 0; a < p.n(); ++a) {
      for (int b = 0; b < p.n(); ++b) minus_l0(a, b) = -minus_l0(a, b);
    }
    CHECK(ep.symbolic->mismatches(minus_l0) == 0);
    CHECK(pullback_muhat_to_mu(p, eq).symbolic->mismatches(*ep.symbolic) == 0);
  }
}

TEST_CASE("first Chern forms in real coordinates") {
  const PeriodData p = test::elliptic(2, I);
  const ChernData c = chern_data(p);
  CHECK(c.c1_real.basis == FormBasis::real_dx);
  CHECK(std::abs(c.c1_real.coeffs(0, 1) - (-4.0)) < 1e-13);
  CHECK(std::abs(c.c1_real.coeffs(1, 0) - 4.0) < 1e-13);
  CHECK(std::abs(c.omega_dual.coeffs(0, 1) - 1.0) < 1e-13);
  CHECK((to_real_basis(p, c.c1_E_prime).coeffs - c.c1_real.coeffs).cwiseAbs().maxCoeff() < 1e-13);

  for (const PeriodData& q : test::catalogue()) {
    const ChernData d = chern_data(q);
    const int n = q.n();
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(d.c1_real.coeffs(i, n + i) + static_cast<double>(q.Delta()) * q.delta(i)) < 1e-12);
      const double dual = static_cast<double>(q.Delta()) / q.delta(i);
      CHECK(dual == std::round(dual));
      CHECK(std::abs(d.omega_dual.coeffs(i, n + i) - dual) < 1e-12);
    }
  }
}

TEST_CASE("integer pfaffians") {
  CHECK(integer_pfaffian({{0, 5}, {-5, 0}}) == 5);
  // Pf = a12 a34 - a13 a24 + a14 a23
  const std::vector<std::vector<long long>> A = {{0, 1, 2, 3}, {-1, 0, 4, 5}, {-2, -4, 0, 6}, {-3, -5, -6, 0}};
  CHECK(integer_pfaffian(A) == 1 * 6 - 2 * 5 + 3 * 4);
}

TEST_CASE("Chern numbers are the predicted integers") {
  const PeriodData a = test::elliptic(2, I);
  CHECK(chern_number(a, Side::E_prime).value == -4);
  CHECK(chern_number(a, Side::E).value == -1);
  const PeriodData b = test::surface({1, 2}, I, 0.2, 2.0 * I);
  CHECK(chern_number(b, Side::E_prime).value == -16);
  CHECK(chern_number(b, Side::E).value == -4);
  const PeriodData c = test::elliptic(3, cd(0.3, 1.2));
  CHECK(chern_number(c, Side::E_prime).value == -9);
  CHECK(chern_number(c, Side::E).value == -1);
  for (const PeriodData& p : test::catalogue()) {
    CHECK(chern_number(p, Side::E).value * p.Delta() * p.Delta() == chern_number(p, Side::E_prime).value);
  }
}

TEST_CASE("K is flat and the detector sees a non-invariant metric") {
  Sampler rng(41);
  for (const PeriodData& p : {test::elliptic(1, I), test::elliptic(2, I), test::elliptic(2, cd(0.3, 1.2))}) {
    std::vector<ComplexPoint> mus;
    for (int s = 0; s < 5; ++s) mus.push_back(rng.cell_point(p));
    const QuadratureSpec q;
    const TruncationPlan plan = radius_for(p, 1e-12);
    const FlatnessReport f = flatness_report_K(p, mus, q, plan);
    CHECK(f.variation < 1e-8);
    CHECK(f.ddbar_log_norm < 1e-5);
    const TheoremReport t = verify_theorem_1_1(p, q, plan, mus);
    CHECK(t.pass);
    CHECK(t.min_closed_form_norm > 0.0);

    QuadratureSpec bent = q;
    bent.metric_log_scale = [](const ComplexPoint& mu) { return mu.coords.squaredNorm(); };
    const TheoremReport broken = verify_theorem_1_1(p, bent, plan, mus);
    CHECK_FALSE(broken.pass);
    CHECK(broken.variation > 1e-3);
  }
}
