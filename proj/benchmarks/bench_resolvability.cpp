#include <benchmark/benchmark.h>

#include <cmath>

#include "resolv/channel.hpp"
#include "resolv/codebook.hpp"
#include "resolv/info_measures.hpp"

using namespace resolv;

namespace {

const auto kBsc = FiniteChannel::bsc(0.25);
const auto kUniform = DiscreteDistribution::uniform(2);
const auto kQy = output_distribution(kBsc, kUniform);

void BM_DrawCodebook(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto cb = draw_codebook(kUniform, n, 0.5, seed++);
        benchmark::DoNotOptimize(cb.symbols.data());
    }
}
BENCHMARK(BM_DrawCodebook)->Arg(8)->Arg(12);

void BM_TvExact(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto cb = draw_codebook(kUniform, n, 0.5, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tv_exact(kBsc, cb, kQy).tv);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_TvExact)->Arg(8)->Arg(10)->Arg(12);

void BM_TvExactWithSplit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto cb = draw_codebook(kUniform, n, 0.5, 7);
    const double mi = mutual_information(kBsc, kUniform);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            tv_exact_with_split(kBsc, cb, kQy, mi, 0.1).p2_mass);
    }
}
BENCHMARK(BM_TvExactWithSplit)->Arg(8)->Arg(10);

void BM_TvMonteCarlo(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto cb = draw_codebook(kUniform, n, 0.5, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tv_monte_carlo(kBsc, cb, kQy, 500, 3).tv);
    }
}
BENCHMARK(BM_TvMonteCarlo)->Arg(10)->Arg(14);

void BM_AtypicalMassExpectation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            atypical_mass_expectation(kBsc, kUniform, n, 0.1));
    }
}
BENCHMARK(BM_AtypicalMassExpectation)->Arg(20)->Arg(50);

void BM_InducedOutputLogProb(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto cb = draw_codebook(kUniform, n, 0.5, 7);
    Rng rng(5);
    std::vector<int> y(static_cast<std::size_t>(n));
    for (auto& v : y) v = kQy.sample(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            induced_output_log_prob(kBsc, cb, std::span<const int>(y)));
    }
}
BENCHMARK(BM_InducedOutputLogProb)->Arg(10)->Arg(20);

} // namespace

BENCHMARK_MAIN();
