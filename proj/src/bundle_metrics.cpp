#include "abeltheta/bundle_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace abeltheta {

namespace {

constexpr double kPi = std::numbers::pi;
const cd kTwoPiI(0.0, 2.0 * std::numbers::pi);

void require_generator(const MultiplierSystem& ms, int g) {
  if (g < 1 || g > ms.generators()) {
    std::ostringstream os;
    os << "generator " << g << " out of range 1.." << ms.generators() << " for "
       << to_string(ms.id);
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

void require_dim(const PeriodData& p, Eigen::Index size, const char* what) {
  if (size != p.n()) {
    std::ostringstream os;
    os << what << " has " << size << " entries, expected " << p.n();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

MultiplierSystem blank(const PeriodData& p, BundleId id, bool on_product,
                       const MultiplierParams& params) {
  MultiplierSystem ms{id, p, on_product, {}, params};
  ms.exponents.assign(static_cast<std::size_t>(ms.generators()),
                      AffineExponent{cd(0.0), Eigen::VectorXcd::Zero(ms.variables())});
  return ms;
}

AffineExponent& exponent(MultiplierSystem& ms, int g) {
  return ms.exponents[static_cast<std::size_t>(g - 1)];
}

// Symbolic linear combination over 1 (key -1) and tau_ab (key a*n+b, a<=b).
using SymbolicSum = std::map<int, cd>;

void add_shift_pairing(SymbolicSum& out, const MultiplierSystem& ms, const Eigen::VectorXcd& a,
                       int generator, double sign) {
  const int n = ms.n();
  const int block = (generator - 1) / (2 * n);  // 0: z, 1: mu
  const int local = (generator - 1) % (2 * n);
  const int offset = block * n;
  if (local < n) {
    out[-1] += sign * a(offset + local) * static_cast<double>(ms.period.delta(local));
  } else {
    const int alpha = local - n;
    for (int k = 0; k < n; ++k) {
      const int key = std::min(alpha, k) * n + std::max(alpha, k);
      out[key] += sign * a(offset + k);
    }
  }
}

}  // namespace

std::string_view to_string(BundleId id) {
  switch (id) {
    case BundleId::L0: return "L0";
    case BundleId::Lmu: return "Lmu";
    case BundleId::Ktilde: return "Ktilde";
    case BundleId::PullbackP: return "PullbackP";
    case BundleId::CalL_xi: return "CalL_xi";
    case BundleId::P_muhat: return "P_muhat";
    case BundleId::L_Delta_xi: return "L_Delta_xi";
  }
  return "unknown";
}

std::string_view to_string(MetricId id) {
  switch (id) {
    case MetricId::h_L0: return "h_L0";
    case MetricId::h_Lmu: return "h_Lmu";
    case MetricId::h_P: return "h_P";
    case MetricId::h_Ktilde: return "h_Ktilde";
    case MetricId::h_pi1L0: return "h_pi1L0";
    case MetricId::h_pi2L0: return "h_pi2L0";
  }
  return "unknown";
}

MultiplierSystem multiplier_system(const PeriodData& p, BundleId id,
                                   const MultiplierParams& params) {
  const int n = p.n();
  const Eigen::MatrixXcd& Z = p.Z();
  auto missing = [&](const char* what) {
    std::ostringstream os;
    os << to_string(id) << " needs parameter " << what;
    return Error(ErrorCode::MissingParam, os.str());
  };

  switch (id) {
    case BundleId::L0: {
      MultiplierSystem ms = blank(p, id, false, params);
      for (int a = 0; a < n; ++a) {
        auto& e = exponent(ms, n + a + 1);
        e.c0 = -0.5 * Z(a, a);
        e.a(a) = -1.0;
      }
      return ms;
    }
    case BundleId::Lmu: {
      if (!params.mu) throw missing("mu");
      require_dim(p, params.mu->coords.size(), "mu");
      MultiplierSystem ms = blank(p, id, false, params);
      for (int a = 0; a < n; ++a) {
        auto& e = exponent(ms, n + a + 1);
        e.c0 = -params.mu->coords(a) - 0.5 * Z(a, a);
        e.a(a) = -1.0;
      }
      return ms;
    }
    case BundleId::Ktilde: {
      MultiplierSystem ms = blank(p, id, true, params);
      for (int a = 0; a < n; ++a) {
        for (int g : {n + a + 1, 3 * n + a + 1}) {
          auto& e = exponent(ms, g);
          e.c0 = -0.5 * Z(a, a);
          e.a(a) = -1.0;
          e.a(n + a) = -1.0;
        }
      }
      return ms;
    }
    case BundleId::PullbackP: {
      MultiplierSystem ms = blank(p, id, true, params);
      for (int a = 0; a < n; ++a) {
        exponent(ms, n + a + 1).a(n + a) = -1.0;
        exponent(ms, 3 * n + a + 1).a(a) = -1.0;
      }
      return ms;
    }
    case BundleId::CalL_xi: {
      if (!params.xi) throw missing("xi");
      const Eigen::VectorXd eta = params.xi->eta();
      if (eta.size() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "xi needs 2n entries");
      MultiplierSystem ms = blank(p, id, false, params);
      for (int j = 0; j < 2 * n; ++j) exponent(ms, j + 1).c0 = eta(j);
      return ms;
    }
    case BundleId::P_muhat: {
      if (!params.muhat) throw missing("muhat");
      require_dim(p, params.muhat->coords.size(), "muhat");
      MultiplierSystem ms = blank(p, id, false, params);
      for (int a = 0; a < n; ++a) {
        exponent(ms, n + a + 1).c0 =
            -static_cast<double>(p.delta(a)) / p.delta_n() * params.muhat->coords(a);
      }
      return ms;
    }
    case BundleId::L_Delta_xi: {
      if (!params.xi) throw missing("xi");
      const Eigen::VectorXd eta = params.xi->eta();
      if (eta.size() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "xi needs 2n entries");
      MultiplierSystem ms = blank(p, id, false, params);
      for (int a = 0; a < n; ++a) {
        exponent(ms, a + 1).c0 = eta(a);
        cd sum = 0.0;
        for (int b = 0; b < n; ++b) sum += Z(a, b) / static_cast<double>(p.delta(b)) * eta(b);
        exponent(ms, n + a + 1).c0 = sum;
      }
      return ms;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown bundle id");
}

MultiplierSystem pullback_L0_system(const PeriodData& p, int factor) {
  if (factor != 1 && factor != 2) {
    throw Error(ErrorCode::InvalidArgument, "pullback factor must be 1 or 2");
  }
  const int n = p.n();
  // Reuses the L0 tag; the product flag and the block tell the two apart.
  MultiplierSystem ms = blank(p, BundleId::L0, true, {});
  const int gen_offset = factor == 1 ? n : 3 * n;
  const int var_offset = factor == 1 ? 0 : n;
  for (int a = 0; a < n; ++a) {
    auto& e = exponent(ms, gen_offset + a + 1);
    e.c0 = -0.5 * p.Z()(a, a);
    e.a(var_offset + a) = -1.0;
  }
  return ms;
}

MultiplierSystem l_delta_xi_unsimplified(const PeriodData& p, const DualRealPoint& xi) {
  const int n = p.n();
  const Eigen::VectorXd eta = xi.eta();
  if (eta.size() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "xi needs 2n entries");
  const DualComplexPoint muhat = iso_inverse(p, xi);
  MultiplierSystem ms = blank(p, BundleId::L_Delta_xi, false, {std::nullopt, xi, muhat});
  for (int a = 0; a < n; ++a) {
    exponent(ms, a + 1).c0 = eta(a);
    exponent(ms, n + a + 1).c0 =
        eta(n + a) + static_cast<double>(p.delta(a)) / p.delta_n() * muhat.coords(a);
  }
  return ms;
}

MultiplierSystem perturbed(const MultiplierSystem& ms, int generator, double scale) {
  require_generator(ms, generator);
  MultiplierSystem out = ms;
  auto& e = exponent(out, generator);
  e.c0 *= scale;
  e.a *= scale;
  return out;
}

Eigen::VectorXcd joint_point(const MultiplierSystem& ms, const ComplexPoint& v,
                             const ComplexPoint& mu) {
  require_dim(ms.period, v.coords.size(), "v");
  if (!ms.on_product) return v.coords;
  require_dim(ms.period, mu.coords.size(), "mu");
  Eigen::VectorXcd w(2 * ms.n());
  w << v.coords, mu.coords;
  return w;
}

Eigen::VectorXcd generator_shift(const MultiplierSystem& ms, int generator) {
  require_generator(ms, generator);
  const int n = ms.n();
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(ms.variables());
  const int block = (generator - 1) / (2 * n);
  const int local = (generator - 1) % (2 * n) + 1;
  s.segment(block * n, n) = lattice_generator_shift(ms.period, local);
  return s;
}

cd log_multiplier(const MultiplierSystem& ms, int generator, const Eigen::VectorXcd& w) {
  require_generator(ms, generator);
  const auto& e = ms.exponents[static_cast<std::size_t>(generator - 1)];
  return kTwoPiI * (e.c0 + (e.a.transpose() * w)(0));
}

double cocycle_residual(const MultiplierSystem& ms, int i, int j, const ComplexPoint& v,
                        const ComplexPoint& mu) {
  const Eigen::VectorXcd w = joint_point(ms, v, mu);
  const Eigen::VectorXcd si = generator_shift(ms, i);
  const Eigen::VectorXcd sj = generator_shift(ms, j);
  const cd lhs = std::exp(log_multiplier(ms, i, w + sj) + log_multiplier(ms, j, w));
  const cd rhs = std::exp(log_multiplier(ms, j, w + si) + log_multiplier(ms, i, w));
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

double symbolic_cocycle_residual(const MultiplierSystem& ms, int i, int j) {
  require_generator(ms, i);
  require_generator(ms, j);
  SymbolicSum diff;
  add_shift_pairing(diff, ms, ms.exponents[static_cast<std::size_t>(i - 1)].a, j, 1.0);
  add_shift_pairing(diff, ms, ms.exponents[static_cast<std::size_t>(j - 1)].a, i, -1.0);
  double worst = 0.0;
  for (const auto& [key, coeff] : diff) {
    if (key < 0) {
      worst = std::max({worst, std::abs(coeff.real() - std::nearbyint(coeff.real())),
                        std::abs(coeff.imag())});
    } else {
      worst = std::max(worst, std::abs(coeff));
    }
  }
  return worst;
}

double section_transformation_residual(const MultiplierSystem& ms, const Characteristic& m,
                                       const ComplexPoint& v, const ComplexPoint& mu,
                                       int generator, const TruncationPlan& plan) {
  const int n = ms.n();
  const bool translated = ms.id != BundleId::L0 || ms.on_product;
  if (ms.id == BundleId::Lmu && !ms.params.mu) {
    throw Error(ErrorCode::MissingParam, "Lmu needs parameter mu");
  }
  const ComplexPoint& shift_mu = ms.id == BundleId::Lmu ? *ms.params.mu : mu;
  const Eigen::VectorXcd w = joint_point(ms, v, shift_mu);
  auto argument = [&](const Eigen::VectorXcd& x) {
    if (ms.on_product) return ComplexPoint{x.head(n) + x.tail(n)};
    return ComplexPoint{translated ? Eigen::VectorXcd(x + shift_mu.coords) : x};
  };
  const ThetaValue base = theta_m(ms.period, m, argument(w), plan);
  const ThetaValue moved = theta_m(ms.period, m, argument(w + generator_shift(ms, generator)), plan);
  const cd log_factor = log_multiplier(ms, generator, w);
  const cd expected = std::exp(log_factor) * base.value;
  const double scale = std::max({1.0, std::abs(base.value), std::abs(expected), base.envelope,
                                 moved.envelope, std::exp(log_factor.real()) * base.envelope});
  return std::abs(moved.value - expected) / scale;
}

LogQuadraticMetric log_quadratic_metric(const PeriodData& p, MetricId id) {
  const int n = p.n();
  const Eigen::MatrixXd& W = p.W();
  if (id == MetricId::h_L0) return {id, W};
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  switch (id) {
    case MetricId::h_Lmu:
    case MetricId::h_Ktilde:
      Q << W, W, W, W;
      break;
    case MetricId::h_P:
      Q.topRightCorner(n, n) = W;
      Q.bottomLeftCorner(n, n) = W;
      break;
    case MetricId::h_pi1L0:
      Q.topLeftCorner(n, n) = W;
      break;
    case MetricId::h_pi2L0:
      Q.bottomRightCorner(n, n) = W;
      break;
    case MetricId::h_L0:
      break;
  }
  return {id, Q};
}

double metric_log(const PeriodData& p, MetricId id, const ComplexPoint& v,
                  const std::optional<ComplexPoint>& mu) {
  require_dim(p, v.coords.size(), "v");
  const LogQuadraticMetric metric = log_quadratic_metric(p, id);
  Eigen::VectorXd u;
  if (metric.needs_mu()) {
    if (!mu) {
      std::ostringstream os;
      os << to_string(id) << " needs parameter mu";
      throw Error(ErrorCode::MissingParam, os.str());
    }
    require_dim(p, mu->coords.size(), "mu");
    u.resize(2 * p.n());
    u << v.coords.imag(), mu->coords.imag();
  } else {
    u = v.coords.imag();
  }
  return -2.0 * kPi * u.dot(metric.quadratic * u);
}

double metric_eval(const PeriodData& p, MetricId id, const ComplexPoint& v,
                   const std::optional<ComplexPoint>& mu) {
  return std::exp(metric_log(p, id, v, mu));
}

MultiplierSystem metric_multipliers(const PeriodData& p, MetricId id,
                                    const std::optional<ComplexPoint>& mu) {
  switch (id) {
    case MetricId::h_L0: return multiplier_system(p, BundleId::L0);
    case MetricId::h_Lmu: return multiplier_system(p, BundleId::Lmu, {mu, {}, {}});
    case MetricId::h_P: return multiplier_system(p, BundleId::PullbackP);
    case MetricId::h_Ktilde: return multiplier_system(p, BundleId::Ktilde);
    case MetricId::h_pi1L0: return pullback_L0_system(p, 1);
    case MetricId::h_pi2L0: return pullback_L0_system(p, 2);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown metric id");
}

double metric_quasiperiodicity_residual(const PeriodData& p, MetricId id, int generator,
                                        const ComplexPoint& v,
                                        const std::optional<ComplexPoint>& mu) {
  const int n = p.n();
  const MultiplierSystem ms = metric_multipliers(p, id, mu);
  if (id != MetricId::h_L0 && !mu) throw Error(ErrorCode::MissingParam, "metric needs mu");
  // h_Lmu lives on M: its variable is v and mu only enters as a parameter.
  const ComplexPoint mu_value = mu ? *mu : ComplexPoint{Eigen::VectorXcd::Zero(n)};
  const Eigen::VectorXcd w = joint_point(ms, v, mu_value);
  const Eigen::VectorXcd moved = w + generator_shift(ms, generator);
  auto log_h = [&](const Eigen::VectorXcd& x) {
    if (ms.on_product) {
      return metric_log(p, id, ComplexPoint{x.head(n)}, ComplexPoint{x.tail(n)});
    }
    return metric_log(p, id, ComplexPoint{x}, mu);
  };
  const double defect =
      log_h(moved) + 2.0 * log_multiplier(ms, generator, w).real() - log_h(w);
  return std::abs(std::expm1(defect));
}

cd trivializing_section_phi(const PeriodData& p, const DualRealPoint& xi, const ComplexPoint& z) {
  const int n = p.n();
  require_dim(p, z.coords.size(), "z");
  if (xi.xi.size() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "xi needs 2n entries");
  cd exponent = 0.0;
  for (int a = 0; a < n; ++a) exponent += xi.xi(a) / static_cast<double>(p.delta(a)) * z.coords(a);
  return std::exp(cd(0.0, 1.0) * exponent);
}

cd phi_transformation_exponent(const PeriodData& p, const DualRealPoint& xi, int generator) {
  const int n = p.n();
  if (xi.xi.size() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "xi needs 2n entries");
  const Eigen::VectorXcd s = lattice_generator_shift(p, generator);
  const Eigen::VectorXd eta = xi.eta();
  cd out = 0.0;
  for (int a = 0; a < n; ++a) out += eta(a) / static_cast<double>(p.delta(a)) * s(a);
  return out;
}

}  // namespace abeltheta
