#include "abeltheta/core_lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace abeltheta {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_size(const PeriodData& p, Eigen::Index size, int expected, const char* what) {
  if (size != expected) {
    std::ostringstream os;
    os << what << " has " << size << " entries, expected " << expected << " for n=" << p.n();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

PeriodData PeriodData::validate(const std::vector<int>& delta, const Eigen::MatrixXcd& Z) {
  if (delta.empty()) throw Error(ErrorCode::InvalidArgument, "delta must be nonempty");
  const auto n = static_cast<Eigen::Index>(delta.size());
  if (Z.rows() != n || Z.cols() != n) {
    std::ostringstream os;
    os << "Z is " << Z.rows() << "x" << Z.cols() << " but delta has " << n << " entries";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  for (std::size_t a = 0; a < delta.size(); ++a) {
    if (delta[a] <= 0) throw Error(ErrorCode::InvalidArgument, "delta entries must be positive");
    if (a + 1 < delta.size() && delta[a + 1] % delta[a] != 0) {
      std::ostringstream os;
      os << "delta_" << a + 1 << "=" << delta[a] << " does not divide delta_" << a + 2 << "="
         << delta[a + 1];
      throw Error(ErrorCode::DivisibilityViolation, os.str());
    }
  }
  if (!Z.allFinite()) throw Error(ErrorCode::InvalidArgument, "Z has non-finite entries");

  const double scale = Z.cwiseAbs().maxCoeff();
  const double asym = (Z - Z.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream os;
    os << "max|Z_ab - Z_ba| = " << asym << " exceeds 1e-12 * max|Z|";
    throw Error(ErrorCode::NotSymmetric, os.str());
  }

  PeriodData p;
  p.delta_ = delta;
  p.Z_ = 0.5 * (Z + Z.transpose());
  const Eigen::MatrixXd B = p.Z_.imag();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B, Eigen::EigenvaluesOnly);
  p.lambda_min_ = eig.eigenvalues().minCoeff();
  if (!(p.lambda_min_ > 0.0)) {
    std::ostringstream os;
    os << "Im Z has smallest eigenvalue " << p.lambda_min_;
    throw Error(ErrorCode::NotPositiveDefinite, os.str());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(B);
  const Eigen::MatrixXd W = llt.solve(Eigen::MatrixXd::Identity(n, n));
  p.W_ = 0.5 * (W + W.transpose());
  p.det_im_Z_ = eig.eigenvalues().prod();
  p.Delta_ = 1;
  for (int d : delta) p.Delta_ *= d;
  return p;
}

Eigen::MatrixXd PeriodData::delta_matrix() const {
  Eigen::VectorXd d(n());
  for (int a = 0; a < n(); ++a) d(a) = delta(a);
  return d.asDiagonal();
}

Eigen::VectorXd DualRealPoint::eta() const { return xi / kTwoPi; }

DualRealPoint DualRealPoint::from_eta(const Eigen::VectorXd& eta) { return {eta * kTwoPi}; }

ComplexPoint real_to_complex(const PeriodData& p, const RealPoint& x) {
  const int n = p.n();
  require_size(p, x.coords.size(), 2 * n, "RealPoint");
  Eigen::VectorXcd z(n);
  const Eigen::VectorXd head = x.coords.head(n);
  const Eigen::VectorXd tail = x.coords.tail(n);
  z = p.Z() * tail.cast<cd>();
  for (int a = 0; a < n; ++a) z(a) += static_cast<double>(p.delta(a)) * head(a);
  return {z};
}

RealPoint complex_to_real(const PeriodData& p, const ComplexPoint& zp) {
  const int n = p.n();
  require_size(p, zp.coords.size(), n, "ComplexPoint");
  const cd i_half(0.0, 0.5);
  const Eigen::MatrixXcd W = p.W().cast<cd>();
  const Eigen::VectorXcd& z = zp.coords;
  const Eigen::VectorXcd zbar = z.conjugate();
  Eigen::VectorXcd head = i_half * (p.Z().conjugate() * (W * z) - p.Z() * (W * zbar));
  for (int a = 0; a < n; ++a) head(a) /= static_cast<double>(p.delta(a));
  const Eigen::VectorXcd tail = i_half * (W * (zbar - z));
  Eigen::VectorXd x(2 * n);
  x.head(n) = head.real();
  x.tail(n) = tail.real();
  return {x};
}

DualComplexPoint phi_L0_lift(const PeriodData& p, const ComplexPoint& mu) {
  const int n = p.n();
  require_size(p, mu.coords.size(), n, "ComplexPoint");
  Eigen::VectorXcd out(n);
  for (int a = 0; a < n; ++a) {
    out(a) = mu.coords(a) * (static_cast<double>(p.delta_n()) / p.delta(a));
  }
  return {out};
}

DualRealPoint iso_forward(const PeriodData& p, const DualComplexPoint& muhat) {
  const int n = p.n();
  require_size(p, muhat.coords.size(), n, "DualComplexPoint");
  const Eigen::MatrixXd D = p.delta_matrix();
  const double c = kTwoPi / p.delta_n();
  const Eigen::VectorXd re = muhat.coords.real();
  const Eigen::VectorXd im = muhat.coords.imag();
  Eigen::VectorXd xi(2 * n);
  xi.head(n) = c * (D * (p.W() * (D * im)));
  xi.tail(n) = -c * (D * re) + c * (p.re_Z() * (p.W() * (D * im)));
  return {xi};
}

DualComplexPoint iso_inverse(const PeriodData& p, const DualRealPoint& xi) {
  const int n = p.n();
  require_size(p, xi.xi.size(), 2 * n, "DualRealPoint");
  const double c = p.delta_n() / kTwoPi;
  Eigen::VectorXcd scaled_head(n);
  Eigen::VectorXcd out(n);
  for (int a = 0; a < n; ++a) scaled_head(a) = xi.xi(a) / static_cast<double>(p.delta(a));
  const Eigen::VectorXcd z_part = p.Z() * scaled_head;
  for (int a = 0; a < n; ++a) {
    out(a) = c * (z_part(a) - xi.xi(n + a)) / static_cast<double>(p.delta(a));
  }
  return {out};
}

std::vector<Characteristic> enumerate_characteristics(const PeriodData& p) {
  std::vector<Characteristic> out;
  out.reserve(static_cast<std::size_t>(p.Delta()));
  std::vector<int> m(static_cast<std::size_t>(p.n()), 0);
  for (;;) {
    out.push_back({m});
    int a = p.n() - 1;
    while (a >= 0) {
      auto& slot = m[static_cast<std::size_t>(a)];
      if (++slot < p.delta(a)) break;
      slot = 0;
      --a;
    }
    if (a < 0) break;
  }
  return out;
}

void check_characteristic(const PeriodData& p, const Characteristic& m) {
  if (static_cast<int>(m.m.size()) != p.n()) {
    throw Error(ErrorCode::CharacteristicOutOfRange, "characteristic has wrong length");
  }
  for (int a = 0; a < p.n(); ++a) {
    const int v = m.m[static_cast<std::size_t>(a)];
    if (v < 0 || v >= p.delta(a)) {
      std::ostringstream os;
      os << "characteristic out of range: m_" << a + 1 << "=" << v << " not in [0, " << p.delta(a)
         << ")";
      throw Error(ErrorCode::CharacteristicOutOfRange, os.str());
    }
  }
}

std::size_t characteristic_index(const PeriodData& p, const Characteristic& m) {
  check_characteristic(p, m);
  std::size_t idx = 0;
  for (int a = 0; a < p.n(); ++a) {
    idx = idx * static_cast<std::size_t>(p.delta(a)) + static_cast<std::size_t>(m.m[static_cast<std::size_t>(a)]);
  }
  return idx;
}

}  // namespace abeltheta
