// Gram matrix timings: the pointwise serial reference against the kernel,
// serial and OpenMP. Set OMP_NUM_THREADS to vary the parallel run.

#include <benchmark/benchmark.h>

#include "abeltheta/inner_product.hpp"

namespace {

using abeltheta::cd;

abeltheta::PeriodData torus(int n) {
  if (n == 1) {
    Eigen::MatrixXcd Z(1, 1);
    Z(0, 0) = cd(0.3, 1.2);
    return abeltheta::PeriodData::validate({3}, Z);
  }
  Eigen::MatrixXcd Z(2, 2);
  Z << cd(0, 1), cd(0.2, 0), cd(0.2, 0), cd(0, 2);
  return abeltheta::PeriodData::validate({1, 2}, Z);
}

enum Variant { reference, kernel_serial, kernel_parallel };

void gram(benchmark::State& state, Variant v) {
  const auto p = torus(static_cast<int>(state.range(0)));
  const auto plan = abeltheta::radius_for(p, 1e-12);
  abeltheta::QuadratureSpec q;
  q.nodes_per_axis = static_cast<int>(state.range(1));
  q.parallel = v == kernel_parallel;
  const abeltheta::ComplexPoint mu{Eigen::VectorXcd::Constant(p.n(), cd(0.1, 0.2))};
  for (auto _ : state) {
    auto g = v == reference ? abeltheta::gram_matrix_reference(p, mu, q, plan) : abeltheta::gram_matrix(p, mu, q, plan);
    benchmark::DoNotOptimize(g.matrix.data());
  }
}

void args(benchmark::internal::Benchmark* b) {
  b->Args({1, 32})->Args({1, 64})->Args({2, 8})->Args({2, 16})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK_CAPTURE(gram, reference, reference)->Apply(args);
BENCHMARK_CAPTURE(gram, kernel_serial, kernel_serial)->Apply(args);
BENCHMARK_CAPTURE(gram, kernel_parallel, kernel_parallel)->Apply(args);

BENCHMARK_MAIN();
