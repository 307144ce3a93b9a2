// Parallel kernels against their serial references. ctest runs this binary
// with OMP_NUM_THREADS=4 so the worker paths are exercised on any machine.

#include "stabforge/mirror_numeric.hpp"
#include "stabforge/parallel.hpp"
#include "stabforge/product_stab.hpp"
#include "stabforge/slag_tracer.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace stabforge;

TEST_CASE("STABFORGE_THREADS caps the worker count") {
  unsetenv("STABFORGE_THREADS");
  const int uncapped = worker_count();
  CHECK(uncapped >= 1);
  setenv("STABFORGE_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  setenv("STABFORGE_THREADS", "100000", 1);
  CHECK(worker_count() == uncapped);
  setenv("STABFORGE_THREADS", "two", 1);
  CHECK(worker_count() == uncapped);
  setenv("STABFORGE_THREADS", "0", 1);
  CHECK(worker_count() == uncapped);
  unsetenv("STABFORGE_THREADS");
}

TEST_CASE("node sums are bitwise identical to the serial sum") {
  const NodeSet ns = circle_nodes(0.9, 1 << 14);
  for (int k : {-3, 0, 2}) {
    const cplx q = std::exp(cplx{0.4, -1.0});
    CHECK(integrate_nodes(ns, q, {0.1, 0.0}, k) == integrate_nodes_serial(ns, q, {0.1, 0.0}, k));
  }
}

TEST_CASE("tensor quadrature is bitwise identical to the serial sum") {
  const NodeSet a = circle_nodes(1.0, 200), b = trace_thimble({{1.0, 0.3}, {}}, 1).nodes;
  const cplx q1 = std::exp(cplx{0.2, 0.1}), q2 = std::exp(cplx{1.0, 0.3});
  CHECK(tensor_quadrature_2d(a, b, q1, q2, 0, 1, {0.3, 0.2}) == tensor_quadrature_2d_serial(a, b, q1, q2, 0, 1, {0.3, 0.2}));
}

TEST_CASE("Hom vanishing scan returns the same first failure and count") {
  for (double step : {1.6, 0.4}) {
    const ProductStab ps = make_product({Algebraic{0, 0.1, step, 1, 2}, Geometric{{0.1, 1.2}, {}}, Algebraic{1, -0.2, 1.3, 2, 1}}, {}, false);
    const auto gens = stable_generators(ps, {-4, 4});
    std::size_t c1 = 0, c2 = 0;
    const auto p = hom_vanishing_pairs(ps, gens, 2, &c1);
    const auto s = hom_vanishing_pairs_serial(ps, gens, 2, &c2);
    CHECK(p.has_value() == s.has_value());
    if (p && s) {
      CHECK(p->i == s->i);
      CHECK(p->j == s->j);
      CHECK(p->d == s->d);
    }
    CHECK(c1 == c2);
  }
}

TEST_CASE("fanned-out traces equal the serial traces sample by sample") {
  std::vector<SLagProblem> problems;
  for (int i = 0; i < 12; ++i) {
    SLagProblem p;
    p.a = {0.1 * i, 0.05 * i};
    p.phi = 0.125 * i;
    p.seed = {0.5 + 0.1 * i, 0.3 - 0.07 * i};
    problems.push_back(p);
  }
  const auto par = trace_many(problems);
  const auto ser = trace_many_serial(problems);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    REQUIRE(par[i].samples.size() == ser[i].samples.size());
    CHECK(par[i].mass == ser[i].mass);
    CHECK(path_csv(par[i]) == path_csv(ser[i]));
  }
}
