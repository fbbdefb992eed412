#include <benchmark/benchmark.h>

#include <gnlr/gn_direction.hpp>
#include <gnlr/problems.hpp>
#include <gnlr/rng.hpp>
#include <gnlr/solvers.hpp>

using namespace gnlr;

namespace {

Matrix gauss(Rng& rng, Index m, Index n) {
  Matrix x(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) x(i, j) = rng.gaussian();
  }
  return x;
}

void bm_gn_direction(benchmark::State& state) {
  const Index m = state.range(0), n = state.range(0), r = state.range(1);
  Rng rng(1);
  const FactorPair x{gauss(rng, m, r), gauss(rng, n, r)};
  const Matrix z = gauss(rng, m, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gn_direction(x, z));
  }
}
BENCHMARK(bm_gn_direction)->Args({128, 4})->Args({512, 8})->Args({1024, 16});

void bm_truncated_svd(benchmark::State& state) {
  const Index m = state.range(0), r = state.range(1);
  Rng rng(2);
  const Matrix b = gauss(rng, m, r + 2) * gauss(rng, m, r + 2).transpose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(truncated_svd(b, r));
  }
}
BENCHMARK(bm_truncated_svd)->Args({128, 4})->Args({512, 8});

void bm_selection_apply(benchmark::State& state) {
  const Index m = state.range(0);
  Rng rng(3);
  const LinearOperator op =
      LinearOperator::selection(sample_index_set(m, m, 0.3, 7));
  const Matrix x = gauss(rng, m, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply(x));
  }
}
BENCHMARK(bm_selection_apply)->Arg(128)->Arg(512);

void bm_lsgn_completion(benchmark::State& state) {
  const Index m = state.range(0), n = state.range(0);
  const McInstance inst = gen_mc_integer(m, n, 4, 0.3, 0.0, 5);
  Problem prob;
  prob.op = LinearOperator::selection(inst.omega);
  prob.b = inst.b;
  prob.phi = least_squares();
  prob.rank = 4;
  prob.m = m;
  prob.n = n;
  normalize_scale(prob);
  const FactorPair x0 = init_point(prob);
  SolverConfig cfg;
  cfg.max_iters = 10;
  cfg.eps1 = 1e-300;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lsgn(prob, x0, cfg));
  }
}
BENCHMARK(bm_lsgn_completion)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
