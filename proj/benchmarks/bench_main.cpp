#include <benchmark/benchmark.h>

#include <random>

#include "gplab/coxeter.hpp"
#include "gplab/fock.hpp"
#include "gplab/growth.hpp"
#include "gplab/identity_suite.hpp"
#include "gplab/structure.hpp"

using namespace gplab;

namespace {

GraphProductProblem hecke_problem(const SimplicialGraph& g, double q) {
    return GraphProductProblem{g, std::vector<VertexSpec>(g.size(), VertexSpec::hecke(q))};
}

}  // namespace

static void BM_ReduceRandomWord(benchmark::State& state) {
    const CoxeterGroup grp(SimplicialGraph::path(5));
    std::mt19937_64 rng(1);
    std::vector<Word> words(256);
    for (auto& w : words)
        for (int k = 0; k < state.range(0); ++k) w.push_back(VertexId{static_cast<std::uint32_t>(rng() % 5)});
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(grp.reduce(words[i++ % words.size()]));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ReduceRandomWord)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void BM_Ball(benchmark::State& state) {
    const CoxeterGroup grp(SimplicialGraph::edgeless(3));
    for (auto _ : state) benchmark::DoNotOptimize(grp.ball(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Ball)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_GrowthTaylor(benchmark::State& state) {
    const auto g = SimplicialGraph::cycle(5);
    for (auto _ : state) benchmark::DoNotOptimize(growth_taylor(g, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_GrowthTaylor)->Arg(8)->Arg(16)->Arg(32);

static void BM_CriticalT(benchmark::State& state) {
    const GrowthData data(SimplicialGraph::cycle(6), std::vector<double>(6, 0.7));
    for (auto _ : state) benchmark::DoNotOptimize(critical_t(data));
}
BENCHMARK(BM_CriticalT)->Unit(benchmark::kMicrosecond);

static void BM_BuildFock(benchmark::State& state) {
    const auto p = hecke_problem(SimplicialGraph::edgeless(3), 2.0);
    const auto reps = p.reps();
    for (auto _ : state)
        benchmark::DoNotOptimize(build_fock(p.graph, reps, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BuildFock)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

static void BM_LambdaProduct(benchmark::State& state) {
    const auto p = hecke_problem(SimplicialGraph::path(3), 2.0);
    const auto reps = p.reps();
    const auto f = build_fock(p.graph, reps, static_cast<std::size_t>(state.range(0)));
    std::mt19937_64 rng(3);
    const auto a = lambda_op(f, VertexId{0}, reps[0].left_mult(AlgebraElement::random(reps[0].algebra(), rng)));
    const auto b = lambda_op(f, VertexId{1}, reps[1].left_mult(AlgebraElement::random(reps[1].algebra(), rng)));
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
    state.counters["dim"] = static_cast<double>(f->dim());
}
BENCHMARK(BM_LambdaProduct)->DenseRange(4, 8, 2)->Unit(benchmark::kMicrosecond);

static void BM_IdentitySuite(benchmark::State& state) {
    const auto p = hecke_problem(SimplicialGraph::path(3), 2.0);
    SuiteOptions options;
    options.depth = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(identity_suite(p, options));
}
BENCHMARK(BM_IdentitySuite)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_SimplicityReport(benchmark::State& state) {
    const auto p = hecke_problem(SimplicialGraph::cycle(5), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(simplicity_report(p));
}
BENCHMARK(BM_SimplicityReport)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
