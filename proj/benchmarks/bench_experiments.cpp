#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "oeval/pareto.hpp"
#include "oeval/review_io.hpp"
#include "oeval/simulation.hpp"

using namespace oeval;

namespace {

struct Synthetic {
    EvaluationCorpus corpus;
    StudyPublicationMap map;
};

const Synthetic& synthetic() {
    static const Synthetic s{
        EvaluationCorpus(load_corpus(std::filesystem::path(OEVAL_SYNTHETIC_DIR) / "reviews").reviews),
        parse_mapping(read_file(std::filesystem::path(OEVAL_SYNTHETIC_DIR) / "mapping.csv")).map};
    return s;
}

void BM_SimulateRemovals(benchmark::State& state) {
    const auto& s = synthetic();
    SimulationSpec spec;
    spec.n_seeds = 20;
    spec.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_removals(s.corpus, s.map, spec));
}
BENCHMARK(BM_SimulateRemovals)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ParetoFrontier(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::vector<ParetoInput> pts;
    for (std::int64_t i = 0; i < state.range(0); ++i)
        pts.push_back({"r" + std::to_string(i), rng() % 1000, static_cast<double>(rng() % 100000) / 7.0});
    for (auto _ : state) benchmark::DoNotOptimize(pareto_frontier(pts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ParetoFrontier)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity(benchmark::oNLogN);

}  // namespace
BENCHMARK_MAIN();
