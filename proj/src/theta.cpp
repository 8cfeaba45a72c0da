#include "abeltheta/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "abeltheta/compensated.hpp"

namespace abeltheta {

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_shell_count(int n, int r) {
  if (r == 0) return 0.0;
  const double outer = std::pow(2.0 * r + 1.0, n);
  const double inner = std::pow(2.0 * r - 1.0, n);
  return std::log(outer - inner);
}

// Centre data for a lattice sum whose envelope peaks at k = -s.
struct Centre {
  std::vector<int> k0;   // round(s)
  double offset = 0.0;   // |s - k0|_inf
};

Centre centre_of(const Eigen::VectorXd& s) {
  Centre c;
  c.k0.resize(static_cast<std::size_t>(s.size()));
  for (Eigen::Index a = 0; a < s.size(); ++a) {
    const double r = std::nearbyint(s(a));
    c.k0[static_cast<std::size_t>(a)] = static_cast<int>(r);
    c.offset = std::max(c.offset, std::abs(s(a) - r));
  }
  return c;
}

// Sums exp(exponent(k) - log_env) over k = j - k0, shell by shell, with a
// compensated accumulator per shell and across shells.
template <class Exponent>
cd reduced_shell_sum(const ShellOrder& order, const std::vector<int>& k0, double log_env,
                     Exponent&& exponent) {
  const int n = order.n;
  std::vector<int> k(static_cast<std::size_t>(n));
  CompensatedComplexSum total;
  for (std::size_t shell = 0; shell + 1 < order.shell_starts.size(); ++shell) {
    CompensatedComplexSum shell_sum;
    for (std::size_t i = order.shell_starts[shell]; i < order.shell_starts[shell + 1]; ++i) {
      const int* j = order.index(i);
      for (int a = 0; a < n; ++a) {
        k[static_cast<std::size_t>(a)] = j[a] - k0[static_cast<std::size_t>(a)];
      }
      shell_sum.add(std::exp(exponent(k) - log_env));
    }
    total.add(shell_sum.value());
  }
  return total.value();
}

// exp(a + b) for complex a and real b with the real part combined first.
cd exp_shifted(cd a, double b) { return std::exp(cd(a.real() + b, a.imag())); }

Eigen::VectorXd char_shift(const PeriodData& p, const Characteristic& m) {
  Eigen::VectorXd c(p.n());
  for (int a = 0; a < p.n(); ++a) {
    c(a) = static_cast<double>(m.m[static_cast<std::size_t>(a)]) / p.delta(a);
  }
  return c;
}

ThetaValue riemann_theta_impl(const PeriodData& p, const Eigen::VectorXcd& z,
                              const TruncationPlan& plan) {
  const int n = p.n();
  const Eigen::MatrixXd B = p.im_Z();
  const Eigen::VectorXd s = p.W() * z.imag();
  const Centre centre = centre_of(s);
  const double log_env = kPi * s.dot(B * s);
  const ShellOrder order = make_shell_order(n, plan.radius);
  const Eigen::MatrixXcd& Z = p.Z();

  const cd sum = reduced_shell_sum(order, centre.k0, log_env, [&](const std::vector<int>& k) {
    cd quad = 0.0;
    cd lin = 0.0;
    for (int a = 0; a < n; ++a) {
      const double ka = k[static_cast<std::size_t>(a)];
      for (int b = 0; b < n; ++b) quad += ka * static_cast<double>(k[static_cast<std::size_t>(b)]) * Z(a, b);
      lin += ka * z(a);
    }
    return kI * kPi * quad + 2.0 * kI * kPi * lin;
  });

  const double log_tail = log_shell_tail_bound(n, plan.radius, p.lambda_min(), centre.offset);
  ThetaValue out;
  out.value = std::exp(log_env) * sum;
  out.envelope = std::exp(log_env);
  out.tail_bound = std::exp(log_env + log_tail);
  return out;
}

ThetaValue theta_direct(const PeriodData& p, const Characteristic& m, const Eigen::VectorXcd& z,
                        const TruncationPlan& plan) {
  const int n = p.n();
  const Eigen::MatrixXd B = p.im_Z();
  const Eigen::VectorXd c = char_shift(p, m);
  const Eigen::VectorXd y = z.imag();
  const Eigen::VectorXd s = c + p.W() * y;
  const Centre centre = centre_of(s);
  const double log_env = kPi * s.dot(B * s) - 2.0 * kPi * c.dot(y);
  const ShellOrder order = make_shell_order(n, plan.radius);
  const Eigen::MatrixXcd& Z = p.Z();

  // pi i sum k_a k_b tau_ab + 2 pi i sum tau_ab (m_a/delta_a) k_b + 2 pi i sum (k_a + m_a/delta_a) z_a
  const cd sum = reduced_shell_sum(order, centre.k0, log_env, [&](const std::vector<int>& k) {
    cd quad = 0.0;
    cd cross = 0.0;
    cd lin = 0.0;
    for (int a = 0; a < n; ++a) {
      const double ka = k[static_cast<std::size_t>(a)];
      for (int b = 0; b < n; ++b) {
        const double kb = k[static_cast<std::size_t>(b)];
        quad += ka * kb * Z(a, b);
        cross += Z(a, b) * c(a) * kb;
      }
      lin += (ka + c(a)) * z(a);
    }
    return kI * kPi * quad + 2.0 * kI * kPi * cross + 2.0 * kI * kPi * lin;
  });

  const double log_tail = log_shell_tail_bound(n, plan.radius, p.lambda_min(), centre.offset);
  ThetaValue out;
  out.value = std::exp(log_env) * sum;
  out.envelope = std::exp(log_env);
  out.tail_bound = std::exp(log_env + log_tail);
  return out;
}

ThetaValue theta_via_riemann(const PeriodData& p, const Characteristic& m,
                             const Eigen::VectorXcd& z, const TruncationPlan& plan) {
  const Eigen::VectorXd c = char_shift(p, m);
  const Eigen::VectorXcd shifted = z + p.Z() * c.cast<cd>();
  const ThetaValue base = riemann_theta_impl(p, shifted, plan);
  const cd phase_arg = 2.0 * kI * kPi * (c.cast<cd>().transpose() * z)(0);
  const double modulus = std::exp(phase_arg.real());
  ThetaValue out;
  out.value = exp_shifted(phase_arg, 0.0) * base.value;
  out.envelope = modulus * base.envelope;
  out.tail_bound = modulus * base.tail_bound;
  return out;
}

}  // namespace

double log_shell_tail_bound(int n, int radius, double lambda_min, double shift_bound) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const double b = std::max(0.0, shift_bound);
  auto gauss = [&](int r) {
    const double d = std::max(0.0, r - b);
    return -kPi * lambda_min * d * d;
  };
  // Majorant u(r) = 2n (2r+1)^{n-1} exp(-pi lambda (r-b)^2) and its ratio.
  auto log_majorant = [&](int r) {
    return std::log(2.0 * n) + (n - 1) * std::log(2.0 * r + 1.0) + gauss(r);
  };
  double log_sum = kNegInf;
  for (int r = radius + 1;; ++r) {
    if (r > b + 1.0) {
      const double log_q = log_majorant(r + 1) - log_majorant(r);
      const bool negligible = log_majorant(r) < log_sum - 60.0 || log_majorant(r) < -800.0;
      if (log_q < std::log(0.5) && (negligible || r > radius + 400)) {
        return log_add(log_sum, log_majorant(r) - std::log1p(-std::exp(log_q)));
      }
    }
    log_sum = log_add(log_sum, log_shell_count(n, r) + gauss(r));
  }
}

TruncationPlan radius_for(const PeriodData& p, double eps, double shift_bound, int cap) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (shift_bound < 0.0) throw Error(ErrorCode::InvalidArgument, "shift_bound must be >= 0");
  const double log_eps = std::log(eps);
  for (int radius = 1; radius <= cap; ++radius) {
    if (log_shell_tail_bound(p.n(), radius, p.lambda_min(), shift_bound) <= log_eps) {
      return {radius, eps, p.lambda_min(), shift_bound};
    }
  }
  std::ostringstream os;
  os << "eps=" << eps << " needs a radius above the cap " << cap << " (lambda_min="
     << p.lambda_min() << ")";
  throw Error(ErrorCode::EpsTooSmall, os.str());
}

ShellOrder make_shell_order(int n, int radius) {
  ShellOrder order;
  order.n = n;
  order.radius = radius;
  order.shell_starts.push_back(0);
  std::vector<int> j(static_cast<std::size_t>(n));
  for (int r = 0; r <= radius; ++r) {
    std::fill(j.begin(), j.end(), -r);
    for (;;) {
      int norm = 0;
      for (int v : j) norm = std::max(norm, std::abs(v));
      if (norm == r) order.indices.insert(order.indices.end(), j.begin(), j.end());
      int a = n - 1;
      while (a >= 0) {
        auto& slot = j[static_cast<std::size_t>(a)];
        if (++slot <= r) break;
        slot = -r;
        --a;
      }
      if (a < 0) break;
    }
    order.shell_starts.push_back(order.size());
  }
  return order;
}

ThetaValue riemann_theta(const PeriodData& p, const ComplexPoint& z, const TruncationPlan& plan) {
  if (z.coords.size() != p.n()) throw Error(ErrorCode::DimensionMismatch, "z has wrong dimension");
  return riemann_theta_impl(p, z.coords, plan);
}

ThetaValue theta_m(const PeriodData& p, const Characteristic& m, const ComplexPoint& z,
                   const TruncationPlan& plan, ThetaPath path) {
  check_characteristic(p, m);
  if (z.coords.size() != p.n()) throw Error(ErrorCode::DimensionMismatch, "z has wrong dimension");
  return path == ThetaPath::direct ? theta_direct(p, m, z.coords, plan)
                                   : theta_via_riemann(p, m, z.coords, plan);
}

ThetaValue theta_m_translated(const PeriodData& p, const Characteristic& m, const ComplexPoint& v,
                              const ComplexPoint& mu, const TruncationPlan& plan) {
  if (mu.coords.size() != p.n()) throw Error(ErrorCode::DimensionMismatch, "mu has wrong dimension");
  return theta_m(p, m, ComplexPoint{v.coords + mu.coords}, plan);
}

Eigen::VectorXcd lattice_generator_shift(const PeriodData& p, int generator) {
  const int n = p.n();
  if (generator < 1 || generator > 2 * n) {
    throw Error(ErrorCode::InvalidArgument, "lattice generator index out of range");
  }
  Eigen::VectorXcd shift = Eigen::VectorXcd::Zero(n);
  if (generator <= n) {
    shift(generator - 1) = static_cast<double>(p.delta(generator - 1));
  } else {
    shift = p.Z().row(generator - n - 1).transpose();
  }
  return shift;
}

double quasiperiodicity_residual(const PeriodData& p, const Characteristic& m,
                                 const ComplexPoint& z, int generator, const TruncationPlan& plan,
                                 double log_multiplier_perturbation) {
  const int n = p.n();
  const Eigen::VectorXcd shift = lattice_generator_shift(p, generator);
  const ThetaValue base = theta_m(p, m, z, plan);
  const ThetaValue moved = theta_m(p, m, ComplexPoint{z.coords + shift}, plan);
  cd log_factor = 0.0;
  if (generator > n) {
    const int a = generator - n - 1;
    log_factor = -2.0 * kI * kPi * z.coords(a) - kI * kPi * p.Z()(a, a);
  }
  log_factor += log_multiplier_perturbation;
  const cd expected = std::exp(log_factor) * base.value;
  const double scale = std::max({1.0, std::abs(base.value), std::abs(expected), base.envelope,
                                 moved.envelope, std::exp(log_factor.real()) * base.envelope});
  return std::abs(moved.value - expected) / scale;
}

}  // namespace abeltheta
