// Fast Gram kernel. For fixed t'' every theta_m is a trigonometric
// polynomial in t':
//     theta_m(t', t'') = sum_k a_k(t'') prod_alpha exp(2 pi i (delta_alpha k_alpha + m_alpha) t'_alpha),
// and h_{L_mu} does not depend on t'. So per t'' node the coefficients are
// computed once (recentred, envelope divided out), the t' grid values are
// obtained by contracting one axis at a time against root-of-unity tables,
// and all pair sums are formed from those grids. Nodes t'' run in parallel;
// each writes its own partial and the partials are reduced serially in node
// order, so the result does not depend on the thread count.

#include <cmath>
#include <numbers>
#include <vector>

#include "abeltheta/compensated.hpp"
#include "abeltheta/inner_product.hpp"

namespace abeltheta::detail {

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

// Contracts axis `axis` of a tensor with dims `dims` (last index fastest)
// against table[k * N + i], replacing that extent by N.
std::vector<cd> contract_axis(const std::vector<cd>& in, std::vector<int>& dims, int axis,
                              const std::vector<cd>& table, int N) {
  std::size_t outer = 1;
  for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(dims[static_cast<std::size_t>(a)]);
  std::size_t inner = 1;
  for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < dims.size(); ++a) {
    inner *= static_cast<std::size_t>(dims[a]);
  }
  const auto K = static_cast<std::size_t>(dims[static_cast<std::size_t>(axis)]);
  const auto Nz = static_cast<std::size_t>(N);
  std::vector<cd> out(outer * Nz * inner, cd(0.0));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t k = 0; k < K; ++k) {
      const cd* src = in.data() + (o * K + k) * inner;
      for (std::size_t i = 0; i < Nz; ++i) {
        const cd ph = table[k * Nz + i];
        cd* dst = out.data() + (o * Nz + i) * inner;
        for (std::size_t r = 0; r < inner; ++r) dst[r] += src[r] * ph;
      }
    }
  }
  dims[static_cast<std::size_t>(axis)] = N;
  return out;
}

long positive_mod(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Eigen::MatrixXcd gram_kernel(const PeriodData& p, const std::vector<Characteristic>& chars,
                             const ComplexPoint& mu, const QuadratureSpec& q,
                             const TruncationPlan& plan) {
  const int n = p.n();
  const int N = q.nodes_per_axis;
  if (N < 4) throw Error(ErrorCode::InvalidArgument, "nodes_per_axis must be >= 4");
  if (mu.coords.size() != n) throw Error(ErrorCode::DimensionMismatch, "mu has wrong dimension");
  for (const auto& m : chars) check_characteristic(p, m);

  const int R = plan.radius;
  const int K = 2 * R + 1;
  std::size_t box = 1;
  std::size_t grid = 1;
  for (int a = 0; a < n; ++a) {
    box *= static_cast<std::size_t>(K);
    grid *= static_cast<std::size_t>(N);
  }
  const std::size_t nodes = grid;
  const auto C = static_cast<int>(chars.size());
  const std::size_t pairs = static_cast<std::size_t>(C * (C + 1) / 2);

  const Eigen::MatrixXcd& Z = p.Z();
  const Eigen::MatrixXd B = p.im_Z();
  const Eigen::MatrixXd& W = p.W();
  const double log_scale = q.metric_log_scale ? q.metric_log_scale(mu) : 0.0;

  std::vector<cd> roots(static_cast<std::size_t>(N));
  for (int r = 0; r < N; ++r) roots[static_cast<std::size_t>(r)] = std::polar(1.0, 2.0 * kPi * r / N);

  std::vector<Eigen::VectorXd> shifts;
  for (const auto& m : chars) {
    Eigen::VectorXd c(n);
    for (int a = 0; a < n; ++a) c(a) = static_cast<double>(m.m[static_cast<std::size_t>(a)]) / p.delta(a);
    shifts.push_back(c);
  }

  std::vector<cd> partials(nodes * pairs);
  const auto node_count = static_cast<long>(nodes);

#pragma omp parallel for schedule(static) if (q.parallel)
  for (long node = 0; node < node_count; ++node) {
    Eigen::VectorXd t2(n);
    long rest = node;
    for (int a = n - 1; a >= 0; --a) {
      t2(a) = static_cast<double>(rest % N) / N;
      rest /= N;
    }
    const Eigen::VectorXcd base = Z * t2.cast<cd>() + mu.coords;  // z at t' = 0
    const Eigen::VectorXd y = base.imag();
    const double log_h = -2.0 * kPi * y.dot(W * y) + log_scale;

    std::vector<std::vector<cd>> grids(static_cast<std::size_t>(C));
    std::vector<double> log_env(static_cast<std::size_t>(C));
    std::vector<int> j(static_cast<std::size_t>(n));
    Eigen::VectorXd k(n);
    std::vector<cd> table(static_cast<std::size_t>(K * N));

    for (int ci = 0; ci < C; ++ci) {
      const auto& m = chars[static_cast<std::size_t>(ci)];
      const Eigen::VectorXd& c = shifts[static_cast<std::size_t>(ci)];
      const Eigen::VectorXd s = c + W * y;
      Eigen::VectorXd k0(n);
      for (int a = 0; a < n; ++a) k0(a) = std::nearbyint(s(a));
      const double L = kPi * s.dot(B * s) - 2.0 * kPi * c.dot(y);
      log_env[static_cast<std::size_t>(ci)] = L;
      const Eigen::VectorXcd cZ = Z * c.cast<cd>();

      std::vector<cd> coeff(box);
      std::fill(j.begin(), j.end(), -R);
      for (std::size_t b = 0; b < box; ++b) {
        for (int a = 0; a < n; ++a) k(a) = j[static_cast<std::size_t>(a)] - k0(a);
        const Eigen::VectorXcd kc = k.cast<cd>();
        const cd quad = (kc.transpose() * Z * kc)(0);
        const cd cross = (cZ.transpose() * kc)(0);
        const cd lin = ((k + c).cast<cd>().transpose() * base)(0);
        const cd e = kI * kPi * quad + 2.0 * kI * kPi * cross + 2.0 * kI * kPi * lin;
        coeff[b] = std::exp(cd(e.real() - L, e.imag()));
        for (int a = n - 1; a >= 0; --a) {
          auto& slot = j[static_cast<std::size_t>(a)];
          if (++slot <= R) break;
          slot = -R;
        }
      }

      std::vector<int> dims(static_cast<std::size_t>(n), K);
      for (int a = n - 1; a >= 0; --a) {
        const long d = p.delta(a);
        const long ma = m.m[static_cast<std::size_t>(a)];
        for (int jj = -R; jj <= R; ++jj) {
          const long ka = jj - static_cast<long>(k0(a));
          const long freq = d * ka + ma;
          for (int i = 0; i < N; ++i) {
            table[static_cast<std::size_t>((jj + R) * N + i)] =
                roots[static_cast<std::size_t>(positive_mod(freq * i, N))];
          }
        }
        coeff = contract_axis(coeff, dims, a, table, N);
      }
      grids[static_cast<std::size_t>(ci)] = std::move(coeff);
    }

    std::size_t pair = 0;
    for (int r = 0; r < C; ++r) {
      const auto& gr = grids[static_cast<std::size_t>(r)];
      for (int c = r; c < C; ++c, ++pair) {
        const auto& gc = grids[static_cast<std::size_t>(c)];
        const double weight_log =
            log_h + log_env[static_cast<std::size_t>(r)] + log_env[static_cast<std::size_t>(c)];
        cd value;
        if (r == c) {
          CompensatedSum acc;
          for (std::size_t g = 0; g < grid; ++g) acc.add(std::norm(gr[g]));
          value = acc.value();
        } else {
          CompensatedComplexSum acc;
          for (std::size_t g = 0; g < grid; ++g) acc.add(gr[g] * std::conj(gc[g]));
          value = acc.value();
        }
        partials[static_cast<std::size_t>(node) * pairs + pair] = std::exp(weight_log) * value;
      }
    }
  }

  const double jacobian = static_cast<double>(p.Delta()) * p.det_im_Z();
  const double cell = jacobian / (static_cast<double>(nodes) * static_cast<double>(grid));
  Eigen::MatrixXcd out(C, C);
  std::size_t pair = 0;
  for (int r = 0; r < C; ++r) {
    for (int c = r; c < C; ++c, ++pair) {
      CompensatedComplexSum acc;
      for (std::size_t node = 0; node < nodes; ++node) acc.add(partials[node * pairs + pair]);
      const cd v = cell * acc.value();
      if (r == c) {
        out(r, r) = cd(v.real(), 0.0);
      } else {
        out(r, c) = v;
        out(c, r) = std::conj(v);
      }
    }
  }
  return out;
}

}  // namespace abeltheta::detail
