#include <benchmark/benchmark.h>

#include <random>

#include "oeval/ir_metrics.hpp"
#include "oeval/meta_analysis.hpp"

using namespace oeval;

namespace {

Outcome random_outcome(std::size_t k, EffectMeasure measure, Pooling pooling, Model model, bool dichotomous) {
    std::mt19937_64 rng(k);
    Outcome o;
    o.outcome_id = "O1";
    o.data_kind = dichotomous ? DataKind::Dichotomous : DataKind::Continuous;
    o.effect_measure = measure;
    o.pooling = pooling;
    o.model = model;
    Subgroup sg;
    sg.subgroup_id = "O1";
    std::normal_distribution<double> mean(10, 3);
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t n1 = 20 + static_cast<std::int64_t>(rng() % 200);
        const std::int64_t n2 = 20 + static_cast<std::int64_t>(rng() % 200);
        if (dichotomous)
            sg.rows.push_back({"S" + std::to_string(i),
                               DichotomousArms{1 + static_cast<std::int64_t>(rng() % (n1 - 1)), n1,
                                               1 + static_cast<std::int64_t>(rng() % (n2 - 1)), n2}});
        else
            sg.rows.push_back({"S" + std::to_string(i), ContinuousArms{n1, mean(rng), 2.0, n2, mean(rng), 2.5}});
    }
    o.subgroups.push_back(std::move(sg));
    return o;
}

void BM_MantelHaenszelRR(benchmark::State& state) {
    const auto o = random_outcome(static_cast<std::size_t>(state.range(0)), EffectMeasure::RR,
                                  Pooling::MantelHaenszel, Model::Fixed, true);
    for (auto _ : state) benchmark::DoNotOptimize(pool_outcome(o));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MantelHaenszelRR)->RangeMultiplier(4)->Range(2, 512)->Complexity();

void BM_InverseVarianceRandomSMD(benchmark::State& state) {
    const auto o = random_outcome(static_cast<std::size_t>(state.range(0)), EffectMeasure::SMD,
                                  Pooling::InverseVariance, Model::Random, false);
    for (auto _ : state) benchmark::DoNotOptimize(pool_outcome(o));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InverseVarianceRandomSMD)->RangeMultiplier(4)->Range(2, 512)->Complexity();

void BM_PoolSubset(benchmark::State& state) {
    const auto o = random_outcome(64, EffectMeasure::OR, Pooling::MantelHaenszel, Model::Fixed, true);
    std::set<std::string> half;
    for (int i = 0; i < 64; i += 2) half.insert("S" + std::to_string(i));
    for (auto _ : state) benchmark::DoNotOptimize(pool_outcome(o, half));
}
BENCHMARK(BM_PoolSubset);

void BM_TopicMetrics(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<std::string> ranking;
    TopicJudgments judged;
    std::mt19937_64 rng(1);
    for (std::size_t i = 0; i < n; ++i) {
        ranking.push_back("d" + std::to_string(i));
        judged[ranking.back()] = rng() % 20 == 0 ? 1 : 0;
    }
    judged[ranking.front()] = 1;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_topic("t", ranking, judged));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TopicMetrics)->RangeMultiplier(8)->Range(64, 32768)->Complexity();

}  // namespace
