// Serial reference against the OpenMP version of each parallel kernel.
// Worker count follows STABFORGE_THREADS like the rest of the library.

#include "stabforge/mirror_numeric.hpp"
#include "stabforge/product_stab.hpp"
#include "stabforge/slag_tracer.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace stabforge;

namespace {

const cplx kQ = std::exp(cplx{0.3, 0.8});
const cplx kC{0.1, -0.2};

void BM_IntegrateNodes(benchmark::State& state, bool parallel) {
  const NodeSet ns = circle_nodes(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(parallel ? integrate_nodes(ns, kQ, kC, 2) : integrate_nodes_serial(ns, kQ, kC, 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TensorQuadrature(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  const NodeSet a = circle_nodes(1.0, n), b = circle_nodes(0.8, n);
  const cplx q2 = std::exp(cplx{-0.4, 1.1});
  for (auto _ : state)
    benchmark::DoNotOptimize(parallel ? tensor_quadrature_2d(a, b, kQ, q2, 1, -1, kC)
                                      : tensor_quadrature_2d_serial(a, b, kQ, q2, 1, -1, kC));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_HomVanishing(benchmark::State& state, bool parallel) {
  const ProductStab ps = make_product({Algebraic{0, 0.1, 1.4, 1.0, 2.0}, Algebraic{-1, -0.3, 1.2, 0.5, 1.5},
                                       Algebraic{2, 0.2, 1.1, 3.0, 0.7}},
                                      {0.0, 0.2});
  const std::vector<Generator> gens = stable_generators(ps, {-2, 2});
  for (auto _ : state) {
    std::size_t checked = 0;
    benchmark::DoNotOptimize(parallel ? hom_vanishing_pairs(ps, gens, 2, &checked)
                                      : hom_vanishing_pairs_serial(ps, gens, 2, &checked));
    state.counters["pairs"] = static_cast<double>(checked);
  }
}

void BM_TraceMany(benchmark::State& state, bool parallel) {
  std::vector<SLagProblem> problems;
  for (int i = 0; i < state.range(0); ++i) {
    SLagProblem p;
    p.a = {1.0, 1.0};
    p.phi = 0.25;
    p.seed = std::polar(0.3 + 0.05 * i, 2.4 * i);
    problems.push_back(p);
  }
  for (auto _ : state) benchmark::DoNotOptimize(parallel ? trace_many(problems) : trace_many_serial(problems));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_IntegrateNodes, serial, false)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK_CAPTURE(BM_IntegrateNodes, parallel, true)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK_CAPTURE(BM_TensorQuadrature, serial, false)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_TensorQuadrature, parallel, true)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_HomVanishing, serial, false);
BENCHMARK_CAPTURE(BM_HomVanishing, parallel, true);
BENCHMARK_CAPTURE(BM_TraceMany, serial, false)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TraceMany, parallel, true)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
