#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "abeltheta/core_lattice.hpp"
#include "abeltheta/sampling.hpp"
#include "support.hpp"

using namespace abeltheta;
using test::I;

namespace {

void require_code(ErrorCode code, auto&& f) {
  try {
    f();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("validate derives W, Delta and the smallest eigenvalue") {
  const PeriodData a = test::elliptic(1, I);
  CHECK(a.W()(0, 0) == doctest::Approx(1.0));
  CHECK(a.Delta() == 1);

  const PeriodData b = test::surface({1, 2}, I, 0.0, 2.0 * I);
  CHECK(b.W()(0, 0) == doctest::Approx(1.0));
  CHECK(b.W()(1, 1) == doctest::Approx(0.5));
  CHECK(b.W()(0, 1) == doctest::Approx(0.0));
  CHECK(b.Delta() == 2);
  CHECK(b.lambda_min() == doctest::Approx(1.0));
  CHECK(b.det_im_Z() == doctest::Approx(2.0));
}

TEST_CASE("validate rejects inadmissible period data") {
  Eigen::MatrixXcd Z2 = Eigen::MatrixXcd::Identity(2, 2) * I;
  require_code(ErrorCode::DivisibilityViolation, [&] { PeriodData::validate({2, 3}, Z2); });
  require_code(ErrorCode::InvalidArgument, [&] { PeriodData::validate({0, 1}, Z2); });

  Eigen::MatrixXcd skew = Z2;
  skew(0, 1) = 0.5;
  require_code(ErrorCode::NotSymmetric, [&] { PeriodData::validate({1, 1}, skew); });

  Eigen::MatrixXcd neg(1, 1);
  neg(0, 0) = -I;
  require_code(ErrorCode::NotPositiveDefinite, [&] { PeriodData::validate({1}, neg); });
  require_code(ErrorCode::DimensionMismatch, [&] { PeriodData::validate({1}, Z2); });
}

TEST_CASE("lattice basis vectors map to the columns of the period matrix") {
  const PeriodData a = test::elliptic(2, cd(0.3, 1.2));
  CHECK(std::abs(real_to_complex(a, RealPoint{Eigen::Vector2d(1, 0)}).coords(0) - cd(2.0)) < 1e-15);

  const PeriodData b = test::elliptic(1, I);
  CHECK(std::abs(real_to_complex(b, RealPoint{Eigen::Vector2d(0, 1)}).coords(0) - I) < 1e-15);
  const RealPoint back = complex_to_real(b, test::point({I}));
  CHECK(back.coords(0) == doctest::Approx(0.0));
  CHECK(back.coords(1) == doctest::Approx(1.0));

  // Oracle: the 2n x 2n real system [Re(D | Z); Im(D | Z)] x = (Re z, Im z).
  const PeriodData c = test::surface({1, 2}, I, 0.0, 2.0 * I);
  Eigen::VectorXd x(4);
  x << 0, 0, 1, 0;
  const Eigen::VectorXcd z = real_to_complex(c, RealPoint{x}).coords;
  CHECK(std::abs(z(0) - I) < 1e-15);
  CHECK(std::abs(z(1)) < 1e-15);

  const PeriodData d = test::surface({1, 2}, cd(0.1, 1.0), cd(0.4, 0.3), cd(-0.2, 2.0));
  Eigen::MatrixXd P(4, 4);
  P.topLeftCorner(2, 2) = d.delta_matrix();
  P.topRightCorner(2, 2) = d.re_Z();
  P.bottomLeftCorner(2, 2).setZero();
  P.bottomRightCorner(2, 2) = d.im_Z();
  const Eigen::VectorXcd w = test::point({cd(0.7, -0.4), cd(1.3, 0.9)}).coords;
  Eigen::VectorXd rhs(4);
  rhs << w.real(), w.imag();
  const Eigen::VectorXd oracle = P.fullPivLu().solve(rhs);
  CHECK((complex_to_real(d, ComplexPoint{w}).coords - oracle).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("coordinate changes round-trip on random points") {
  Sampler rng(7);
  for (const PeriodData& p : test::catalogue()) {
    for (int i = 0; i < 100; ++i) {
      const RealPoint x{rng.real_box(2 * p.n(), 3.0)};
      CHECK((complex_to_real(p, real_to_complex(p, x)).coords - x.coords).cwiseAbs().maxCoeff() < 1e-12);
      const ComplexPoint z{rng.box(p.n(), 3.0)};
      CHECK((real_to_complex(p, complex_to_real(p, z)).coords - z.coords).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("the lift of phi_L0 scales mu_alpha by delta_n / delta_alpha") {
  const PeriodData a = test::surface({1, 2}, I, 0.0, 2.0 * I);
  const DualComplexPoint h = phi_L0_lift(a, test::point({cd(0.5, 0.1), cd(-1.0, 2.0)}));
  CHECK(std::abs(h.coords(0) - cd(1.0, 0.2)) < 1e-15);
  CHECK(std::abs(h.coords(1) - cd(-1.0, 2.0)) < 1e-15);

  const PeriodData b = test::elliptic(1, I);
  CHECK(std::abs(phi_L0_lift(b, test::point({cd(0.3, 0.4)})).coords(0) - cd(0.3, 0.4)) < 1e-15);

  Eigen::MatrixXcd Z3 = Eigen::MatrixXcd::Identity(3, 3) * I;
  const PeriodData c = PeriodData::validate({1, 1, 3}, Z3);
  const DualComplexPoint h3 = phi_L0_lift(c, test::point({1.0, I, cd(1.0, 1.0)}));
  CHECK(std::abs(h3.coords(0) - cd(3.0)) < 1e-15);
  CHECK(std::abs(h3.coords(1) - 3.0 * I) < 1e-15);
  CHECK(std::abs(h3.coords(2) - cd(1.0, 1.0)) < 1e-15);
}

TEST_CASE("iso sends muhat to xi and back") {
  const PeriodData a = test::elliptic(1, I);
  const DualRealPoint xi = iso_forward(a, DualComplexPoint{test::point({0.5 * I}).coords});
  CHECK(xi.xi(0) == doctest::Approx(std::numbers::pi));
  CHECK(xi.xi(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(iso_forward(a, DualComplexPoint{test::point({0.0}).coords}).xi.norm() == 0.0);

  Sampler rng(11);
  for (const PeriodData& p : test::catalogue()) {
    for (int i = 0; i < 100; ++i) {
      const DualComplexPoint m{rng.box(p.n(), 2.0)};
      CHECK((iso_inverse(p, iso_forward(p, m)).coords - m.coords).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("characteristics are enumerated lexicographically") {
  CHECK(enumerate_characteristics(test::elliptic(1, I)) == std::vector<Characteristic>{{{0}}});
  CHECK(enumerate_characteristics(test::elliptic(2, I)) == std::vector<Characteristic>{{{0}}, {{1}}});
  const PeriodData b = test::surface({1, 2}, I, 0.0, 2.0 * I);
  CHECK(enumerate_characteristics(b) == std::vector<Characteristic>{{{0, 0}}, {{0, 1}}});
  for (const PeriodData& p : test::catalogue()) {
    const auto all = enumerate_characteristics(p);
    CHECK(static_cast<std::int64_t>(all.size()) == p.Delta());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(characteristic_index(p, all[i]) == i);
  }
  require_code(ErrorCode::CharacteristicOutOfRange,
               [&] { check_characteristic(test::elliptic(2, I), Characteristic{{5}}); });
  require_code(ErrorCode::CharacteristicOutOfRange,
               [&] { check_characteristic(test::elliptic(2, I), Characteristic{{-1}}); });
}
