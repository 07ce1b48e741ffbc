#include <benchmark/benchmark.h>

#include <sgcca/bcd_solver.hpp>
#include <sgcca/data_lab.hpp>
#include <sgcca/gp_solver.hpp>

using namespace sgcca;

namespace {

struct Fixture {
  BlockSet blocks;
  DesignGraph design;
  std::vector<double> sparsity{7.6, 8.7, 8.05};

  Fixture() : blocks(make_blocks()), design(design_preset("hierarchical")) {}

  static BlockSet make_blocks() {
    GenSpec spec = GenSpec::defaults();
    spec.seed = 2024;
    return generate(spec).first;
  }

  BcdConfig config(Scheme scheme) const {
    BcdConfig cfg;
    cfg.variant = Variant::P3;
    cfg.scheme = scheme;
    cfg.sparsity = sparsity;
    cfg.seed = 7;
    return cfg;
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_fit_bcd(benchmark::State& state, Scheme scheme) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(fit_bcd(f.blocks, f.design, f.config(scheme)));
}

void BM_fit_baseline(benchmark::State& state, Scheme scheme) {
  const Fixture& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_baseline(f.blocks, f.design, f.config(scheme)));
}

void BM_bcd_sweep(benchmark::State& state) {
  const Fixture& f = fixture();
  const BcdConfig cfg = f.config(Scheme::horst());
  const CoefState st = init_coefs(f.blocks, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(bcd_sweep(f.blocks, f.design, cfg, st));
}

void BM_baseline_sweep(benchmark::State& state) {
  const Fixture& f = fixture();
  const BcdConfig cfg = f.config(Scheme::horst());
  const CoefState st = init_coefs(f.blocks, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(baseline_sweep(f.blocks, f.design, cfg, st));
}

void BM_gradient_h(benchmark::State& state) {
  const Fixture& f = fixture();
  const CoefState st = init_coefs(f.blocks, f.config(Scheme::horst()));
  for (auto _ : state)
    benchmark::DoNotOptimize(gradient_h(f.blocks, f.design, Scheme::horst(), st));
}

void BM_lipschitz_bound(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(lipschitz_bound(f.blocks, f.design));
}

void BM_generate(benchmark::State& state) {
  GenSpec spec = GenSpec::defaults();
  spec.seed = 99;
  for (auto _ : state) benchmark::DoNotOptimize(generate(spec));
}

}  // namespace

BENCHMARK_CAPTURE(BM_fit_bcd, horst, Scheme::horst())->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_fit_bcd, centroid, Scheme::centroid())->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_fit_bcd, factorial, Scheme::factorial())->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_fit_baseline, horst, Scheme::horst())->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_fit_baseline, centroid, Scheme::centroid())->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_fit_baseline, factorial, Scheme::factorial())->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bcd_sweep)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_baseline_sweep)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gradient_h)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_lipschitz_bound)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_generate)->Unit(benchmark::kMillisecond);
