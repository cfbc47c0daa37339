#include <benchmark/benchmark.h>

#include "srk/srk.hpp"

namespace {

void BM_Step(benchmark::State& state, const char* method, const char* problem) {
    const srk::MethodTableau t = srk::registry_get(method);
    const srk::BenchmarkProblem p = srk::make_problem(problem, t.calculus);
    srk::Stepper stepper(p.sde, t);
    srk::Rng rng(1);
    srk::NoiseDraw draw(p.sde.m);
    srk::State x = p.x0;
    for (auto _ : state) {
        srk::sample_draw(stepper.family(), p.sde.m, rng, draw);
        stepper.step(x, 1e-3, draw, x);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_Step, bdk1_sinh1d, "BDK1", "sinh1d");
BENCHMARK_CAPTURE(BM_Step, bdk2_sinh1d, "BDK2", "sinh1d");
BENCHMARK_CAPTURE(BM_Step, bdk3_sinh1d, "BDK3", "sinh1d");
BENCHMARK_CAPTURE(BM_Step, bdk1_tennoise, "BDK1", "tennoise");
BENCHMARK_CAPTURE(BM_Step, strato_dirk_sinh1d, "StratoDIRK", "sinh1d");

void BM_SampleDraw(benchmark::State& state) {
    const srk::RvFamily family(srk::Calculus::Ito, 0.5, true);
    const auto m = static_cast<std::size_t>(state.range(0));
    srk::Rng rng(1);
    srk::NoiseDraw draw(m);
    for (auto _ : state) {
        srk::sample_draw(family, m, rng, draw);
        benchmark::DoNotOptimize(draw.Theta.data());
    }
}
BENCHMARK(BM_SampleDraw)->Arg(1)->Arg(10);

void BM_TableCheck(benchmark::State& state) {
    const srk::MethodTableau t = srk::registry_get("BDK3");
    for (auto _ : state) benchmark::DoNotOptimize(srk::check_all_table(t).all_satisfied);
}
BENCHMARK(BM_TableCheck)->Unit(benchmark::kMillisecond);

void BM_GlExponential(benchmark::State& state) {
    const srk::ForestSum l = srk::generator(srk::Calculus::Stratonovich);
    for (auto _ : state) benchmark::DoNotOptimize(srk::gl_exponential(l, 2).values().size());
}
BENCHMARK(BM_GlExponential)->Unit(benchmark::kMillisecond);

void BM_ConvolutionExp(benchmark::State& state) {
    const srk::CoefficientMap l = srk::generator_map(srk::Calculus::Ito);
    for (auto _ : state) benchmark::DoNotOptimize(srk::convolution_exp(l, 2).values().size());
}
BENCHMARK(BM_ConvolutionExp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
