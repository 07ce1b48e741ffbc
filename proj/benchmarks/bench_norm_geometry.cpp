#include <benchmark/benchmark.h>

#include <sgcca/norm_geometry.hpp>
#include <sgcca/rng.hpp>

using namespace sgcca;

namespace {

Vector random_vector(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

double budget_for(Index n) { return 1.0 + 0.55 * (std::sqrt(static_cast<double>(n)) - 1.0); }

void BM_solve_lm(benchmark::State& state, Variant variant) {
  const Index n = state.range(0);
  const Vector v = random_vector(n, 42);
  const double t = budget_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lm(v, t, variant));
}

void BM_project_omega(benchmark::State& state, Variant variant) {
  const Index n = state.range(0);
  const Vector v = 2.0 * random_vector(n, 43);
  const double t = budget_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(project_omega(v, t, variant));
}

void BM_find_phi_root(benchmark::State& state) {
  const Index n = state.range(0);
  const Vector v = random_vector(n, 44).cwiseAbs();
  const double t = budget_for(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(find_phi_root(v, t, PhiDomain::NonnegativeHalf));
}

void BM_project_l1_ball(benchmark::State& state) {
  const Index n = state.range(0);
  const Vector v = random_vector(n, 45);
  for (auto _ : state) benchmark::DoNotOptimize(project_l1_ball(v, 0.1 * n));
}

}  // namespace

BENCHMARK_CAPTURE(BM_solve_lm, p1, Variant::P1)->Arg(64)->Arg(512)->Arg(4096);
BENCHMARK_CAPTURE(BM_solve_lm, p2, Variant::P2)->Arg(64)->Arg(512)->Arg(4096);
BENCHMARK_CAPTURE(BM_solve_lm, p3, Variant::P3)->Arg(64)->Arg(512)->Arg(4096);
BENCHMARK_CAPTURE(BM_project_omega, p1, Variant::P1)->Arg(64)->Arg(512)->Arg(4096);
BENCHMARK_CAPTURE(BM_project_omega, p3, Variant::P3)->Arg(64)->Arg(512)->Arg(4096);
BENCHMARK(BM_find_phi_root)->Arg(64)->Arg(512)->Arg(4096);
BENCHMARK(BM_project_l1_ball)->Arg(64)->Arg(512)->Arg(4096);

BENCHMARK_MAIN();
