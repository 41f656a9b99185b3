#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oeval/correlation.hpp"
#include "oeval/error.hpp"
#include "oeval/ir_metrics.hpp"
#include "oeval/pareto.hpp"
#include "oeval/rng.hpp"
#include "oeval/run_evaluation.hpp"
#include "oeval/simulation.hpp"
#include "test_support.hpp"

using namespace oeval;
using testing_support::dich;
using testing_support::outcome_of;
using testing_support::synthetic_data;

namespace {

// One review "R1" with studies S1..S3, each reported by publication P<i>,
// plus S3 also by P3b. Collection: P1..P3, P3b and non-relevant N1..N6.
struct Small {
    std::vector<Review> reviews;
    StudyPublicationMap map;
    Qrels qrels;
};

Small small_world() {
    Small w;
    Review r;
    r.review_id = "R1";
    r.comparisons.push_back({"C1", "c",
                             {outcome_of({dich("S1", 12, 40, 5, 40), dich("S2", 9, 30, 4, 31),
                                          dich("S3", 20, 60, 11, 58)},
                                         EffectMeasure::RR, Pooling::MantelHaenszel)}});
    w.reviews.push_back(r);
    for (int i = 1; i <= 3; ++i) w.map.insert("R1", "S" + std::to_string(i), "P" + std::to_string(i));
    w.map.insert("R1", "S3", "P3b");
    for (const char* p : {"P1", "P2", "P3", "P3b"}) w.qrels.topics["R1"][p] = 1;
    for (int i = 1; i <= 6; ++i) w.qrels.topics["R1"]["N" + std::to_string(i)] = 0;
    return w;
}

RunRanking ranking_of(const std::string& tag, const std::string& topic, std::vector<std::string> ids) {
    RunRanking run;
    run.tag = tag;
    auto& docs = run.topics[topic];
    for (std::size_t i = 0; i < ids.size(); ++i)
        docs.push_back({ids[i], static_cast<int>(i + 1), static_cast<double>(ids.size() - i)});
    return run;
}

bool dominates(const ParetoInput& a, const ParetoInput& b) {
    return a.x <= b.x && a.y_raw <= b.y_raw && (a.x < b.x || a.y_raw < b.y_raw);
}

}  // namespace

TEST(Rng, ReferenceVectors) {
    SplitMix64 rng(0);
    EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFull);
    EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ull);
    EXPECT_EQ(rng.next(), 0x06C45D188009454Full);
    EXPECT_EQ(fnv1a64(""), 0xCBF29CE484222325ull);
    EXPECT_EQ(fnv1a64("a"), 0xAF63DC4C8601EC8Cull);
    EXPECT_NE(stream_seed(0, "CD1", 0), stream_seed(0, "CD1", 1));
    EXPECT_NE(stream_seed(0, "CD1", 0), stream_seed(0, "CD2", 0));
    EXPECT_EQ(stream_seed(7, "CD1", 3), stream_seed(7, "CD1", 3));
}

TEST(Rng, PartialShuffleIsPermutationPrefix) {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> v(20);
        std::iota(v.begin(), v.end(), 0);
        partial_shuffle(v, static_cast<std::size_t>(trial % 25), rng);
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < 20; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
    }
    for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.uniform(7), 7u);
}

TEST(Simulation, ValidateSpec) {
    SimulationSpec spec;
    spec.n_seeds = 0;
    EXPECT_THROW(validate(spec), ConfigError);
    spec.n_seeds = 1;
    spec.removal_counts = {1, 1};
    EXPECT_THROW(validate(spec), ConfigError);
    spec.removal_counts = {0, 1};
    EXPECT_NO_THROW(validate(spec));
}

TEST(Simulation, CountZeroEqualsGoldAndAllRemovedIsAllMissing) {
    const auto& d = synthetic_data();
    SimulationSpec spec;
    spec.removal_counts = {0, 100000};
    spec.n_seeds = 3;
    const auto t = simulate_removals(*d.corpus, d.map, spec);
    ASSERT_EQ(t.columns.size(), 2u);
    EXPECT_EQ(t.gold.n_equal, t.gold.n_total);
    EXPECT_EQ(t.gold.mean_mod, 0.0);
    for (const auto& seed : t.columns[0].per_seed) {
        EXPECT_EQ(seed.n_equal, seed.n_total);
        EXPECT_EQ(seed.mean_mod, 0.0);
    }
    for (const auto& seed : t.columns[1].per_seed) {
        EXPECT_EQ(seed.n_missing, seed.n_total);
        EXPECT_EQ(seed.mean_mod, 1.0);
    }
    EXPECT_EQ(t.columns[1].mean_study_recall, 0.0);
    EXPECT_EQ(t.columns[1].mean_publication_recall, 0.0);
    EXPECT_EQ(t.columns[0].mean_publication_recall, 1.0);
}

TEST(Simulation, DeterministicAcrossThreadCounts) {
    const auto& d = synthetic_data();
    SimulationSpec spec;
    spec.removal_counts = {1, 5, 20};
    spec.n_seeds = 6;
    spec.base_seed = 99;
    spec.threads = 1;
    const auto a = simulate_removals(*d.corpus, d.map, spec);
    spec.threads = 4;
    const auto b = simulate_removals(*d.corpus, d.map, spec);
    ASSERT_EQ(a.columns.size(), b.columns.size());
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
        EXPECT_EQ(a.columns[c].mean.mean_mod, b.columns[c].mean.mean_mod);
        EXPECT_EQ(a.columns[c].publication_recall, b.columns[c].publication_recall);
        for (std::size_t s = 0; s < spec.n_seeds; ++s)
            EXPECT_EQ(a.columns[c].per_seed[s].sum_mod_estimable, b.columns[c].per_seed[s].sum_mod_estimable);
    }
    spec.base_seed = 100;
    const auto other = simulate_removals(*d.corpus, d.map, spec);
    EXPECT_NE(other.columns[0].mean.mean_mod, a.columns[0].mean.mean_mod);
}

TEST(Simulation, PerSeedTablesConsistentAndNested) {
    const auto& d = synthetic_data();
    SimulationSpec spec;
    spec.removal_counts = {1, 2, 3, 10};
    spec.n_seeds = 5;
    const auto t = simulate_removals(*d.corpus, d.map, spec);
    for (const auto& col : t.columns)
        for (const auto& seed : col.per_seed) EXPECT_TRUE(seed.consistent());
    // Nested removal sets: recall cannot grow with the count within a seed.
    for (std::size_t s = 0; s < spec.n_seeds; ++s)
        for (std::size_t c = 1; c < t.columns.size(); ++c) {
            EXPECT_LE(t.columns[c].publication_recall[s], t.columns[c - 1].publication_recall[s]);
            EXPECT_LE(t.columns[c].study_recall[s], t.columns[c - 1].study_recall[s]);
        }
}

TEST(Simulation, ReviewWithoutPublicationsSkipped) {
    auto w = small_world();
    const EvaluationCorpus corpus(w.reviews);
    const StudyPublicationMap empty;
    SimulationSpec spec;
    spec.removal_counts = {1};
    spec.n_seeds = 1;
    const auto t = simulate_removals(corpus, empty, spec);
    EXPECT_EQ(t.n_reviews, 0u);
    ASSERT_EQ(t.warnings.size(), 1u);
    EXPECT_NE(t.warnings[0].find("R1"), std::string::npos);
}

TEST(EvaluateRun, GoldAtFullCutoffIsIdentity) {
    const auto& d = synthetic_data();
    const auto gold = gold_baseline(d.corpus->reviews(), d.map, &d.qrels);
    RunEvalConfig cfg;
    cfg.cutoffs = {30, 100};
    const auto ev = evaluate_run(gold, *d.corpus, d.qrels, d.map, cfg);
    const auto* full = ev.at_cutoff(100);
    ASSERT_NE(full, nullptr);
    EXPECT_EQ(full->aggregate.mean_mod, 0.0);
    EXPECT_EQ(full->aggregate.n_missing, 0u);
    EXPECT_EQ(full->aggregate.n_equal, full->aggregate.n_total);
    EXPECT_EQ(full->aggregate.n_total, d.corpus->outcomes().size());
    EXPECT_EQ(ev.at_cutoff(30)->outcomes.size(), full->outcomes.size());
}

TEST(EvaluateRun, CompleteRunMatchesGoldColumn) {
    const auto& d = synthetic_data();
    RunEvalConfig cfg;
    cfg.cutoffs = {100};
    const auto ev = evaluate_run(d.runs[0], *d.corpus, d.qrels, d.map, cfg);
    for (const auto& res : ev.cutoffs[0].outcomes) {
        const auto identity = aspect_report(res.gold->pooled, res.gold->pooled);
        EXPECT_EQ(res.report.mod, identity.mod);
        EXPECT_EQ(res.report.estimate_class, identity.estimate_class);
        EXPECT_EQ(res.report.delta_ci, identity.delta_ci);
    }
}

TEST(EvaluateRun, NothingRelevantRetrieved) {
    auto w = small_world();
    const EvaluationCorpus corpus(w.reviews);
    const auto run = ranking_of("junk", "R1", {"N1", "N2", "N3", "P1"});
    RunEvalConfig cfg;
    cfg.cutoffs = {50};
    const auto ev = evaluate_run(run, corpus, w.qrels, w.map, cfg);
    EXPECT_EQ(ev.cutoffs[0].aggregate.mean_mod, 1.0);
    EXPECT_EQ(ev.cutoffs[0].aggregate.n_missing, 1u);
}

TEST(EvaluateRun, UnknownTopicWarnsAndContinues) {
    auto w = small_world();
    const EvaluationCorpus corpus(w.reviews);
    auto run = ranking_of("partial", "R1", {"P1", "P2", "P3"});
    run.topics["R404"].push_back({"X", 1, 1.0});
    const auto ev = evaluate_run(run, corpus, w.qrels, w.map);
    EXPECT_EQ(ev.cutoffs.front().aggregate.n_total, 1u);
    EXPECT_TRUE(std::any_of(ev.warnings.begin(), ev.warnings.end(),
                            [](const std::string& s) { return s.find("R404") != std::string::npos; }));
    RunEvalConfig bad;
    bad.cutoffs = {0};
    EXPECT_THROW(evaluate_run(run, corpus, w.qrels, w.map, bad), ConfigError);
}

TEST(Baselines, IdenticalRelevantBlocksWhenQrelsCoverMapping) {
    auto w = small_world();
    const auto gold = gold_baseline(w.reviews, w.map, &w.qrels);
    const auto maxq = max_with_qrels_baseline(w.qrels, w.reviews);
    const auto& g = gold.topics.at("R1");
    const auto& m = maxq.topics.at("R1");
    ASSERT_EQ(g.size(), 10u);
    ASSERT_EQ(m.size(), 10u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(g[i].publication_id, m[i].publication_id);
    EXPECT_EQ(g[0].publication_id, "P1");
    EXPECT_EQ(g[3].publication_id, "P3b");
    EXPECT_EQ(g[4].publication_id, "N1");
}

TEST(Baselines, GoldRecallAtThirtyPercent) {
    Small w = small_world();
    // 3 relevant documents among 10.
    w.map = {};
    for (int i = 1; i <= 3; ++i) w.map.insert("R1", "S" + std::to_string(i), "P" + std::to_string(i));
    w.qrels.topics["R1"].erase("P3b");
    w.qrels.topics["R1"]["N7"] = 0;
    const auto gold = gold_baseline(w.reviews, w.map, &w.qrels);
    std::vector<std::string> ids;
    for (const auto& doc : gold.topics.at("R1")) ids.push_back(doc.publication_id);
    ASSERT_EQ(ids.size(), 10u);
    EXPECT_EQ(recall_at_percent(ids, w.qrels.topics.at("R1"), 30), 1.0);
}

TEST(Baselines, MaxWithQrelsMissesUnjudgedPublications) {
    const auto& d = synthetic_data();
    const auto run = max_with_qrels_baseline(d.qrels, d.corpus->reviews());
    RunEvalConfig cfg;
    cfg.cutoffs = {100};
    const auto ev = evaluate_run(run, *d.corpus, d.qrels, d.map, cfg);
    EXPECT_GT(ev.cutoffs[0].aggregate.mean_mod, 0.0);
}

TEST(Pareto, Examples) {
    const std::vector<ParetoInput> pts{{"A", 1, 1}, {"B", 2, 2}, {"C", 0, 3}};
    const auto out = pareto_frontier(pts);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_FALSE(out[0].dominated);
    EXPECT_TRUE(out[1].dominated);
    EXPECT_FALSE(out[2].dominated);
    EXPECT_EQ(out[0].y, 0.0);
    EXPECT_EQ(out[1].y, 0.5);
    EXPECT_EQ(out[2].y, 1.0);
    const auto front = frontier_of(out);
    ASSERT_EQ(front.size(), 2u);
    EXPECT_EQ(front[0].run_tag, "C");
    EXPECT_EQ(front[1].run_tag, "A");

    const std::vector<ParetoInput> one{{"solo", 4, 2.5}};
    const auto single = pareto_frontier(one);
    EXPECT_FALSE(single[0].dominated);
    EXPECT_EQ(single[0].y, 0.0);

    const std::vector<ParetoInput> dup{{"a", 1, 1}, {"b", 1, 1}, {"c", 2, 2}};
    const auto dd = pareto_frontier(dup);
    EXPECT_FALSE(dd[0].dominated);
    EXPECT_FALSE(dd[1].dominated);
    EXPECT_TRUE(dd[2].dominated);

    EXPECT_TRUE(pareto_frontier({}).empty());
}

TEST(ParetoProperty, MatchesBruteForce) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 200;
        std::vector<ParetoInput> pts{{"gold", 0, 0.0}};
        for (std::size_t i = 1; i < n; ++i)
            pts.push_back({"r" + std::to_string(i), rng() % 12, static_cast<double>(rng() % 40) / 4.0});
        const auto out = pareto_frontier(pts);
        ASSERT_EQ(out.size(), pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            bool dom = false;
            for (std::size_t j = 0; j < pts.size() && !dom; ++j) dom = j != i && dominates(pts[j], pts[i]);
            ASSERT_EQ(out[i].dominated, dom) << "trial " << trial << " point " << i;
            EXPECT_GE(out[i].y, 0.0);
            EXPECT_LE(out[i].y, 1.0);
        }
        EXPECT_FALSE(out[0].dominated);
        const auto front = frontier_of(out);
        for (const auto& p : out) {
            if (!p.dominated) continue;
            const bool covered = std::any_of(front.begin(), front.end(), [&](const ParetoPoint& f) {
                return dominates({f.run_tag, f.x, f.y_raw}, {p.run_tag, p.x, p.y_raw});
            });
            EXPECT_TRUE(covered);
        }
        for (const auto& a : front)
            for (const auto& b : front) EXPECT_FALSE(dominates({a.run_tag, a.x, a.y_raw}, {b.run_tag, b.x, b.y_raw}));
    }
}

TEST(Pareto, InputsFromEvaluations) {
    const auto& d = synthetic_data();
    RunEvalConfig cfg;
    cfg.cutoffs = {30};
    std::vector<RunEvaluation> evs;
    evs.push_back(evaluate_run(gold_baseline(d.corpus->reviews(), d.map, &d.qrels), *d.corpus, d.qrels, d.map,
                               {{100}, {}, {}}));
    evs.push_back(evaluate_run(d.runs[0], *d.corpus, d.qrels, d.map, cfg));
    EXPECT_THROW(pareto_inputs(evs, 30), ConfigError);
    evs.erase(evs.begin());
    const auto in = pareto_inputs(evs, 30);
    ASSERT_EQ(in.size(), 1u);
    EXPECT_EQ(in[0].x, evs[0].cutoffs[0].aggregate.n_missing);
    EXPECT_EQ(in[0].y_raw, evs[0].cutoffs[0].aggregate.sum_mod_estimable);
}

TEST(Correlation, Basics) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 4, 6, 8, 10};
    const std::vector<double> rev{5, 4, 3, 2, 1};
    EXPECT_NEAR(pearson(x, y), 1.0, 1e-15);
    EXPECT_NEAR(pearson(x, rev), -1.0, 1e-15);
    EXPECT_NEAR(spearman(x, rev), -1.0, 1e-15);
    const auto fit = least_squares(x, y);
    EXPECT_NEAR(fit.slope, 2.0, 1e-15);
    EXPECT_NEAR(fit.intercept, 0.0, 1e-14);
    const std::vector<double> flat{3, 3, 3, 3, 3};
    EXPECT_EQ(pearson(x, flat), 0.0);

    // Ties share the average rank: ranks of {1,2,2,3} are {1,2.5,2.5,4}.
    const std::vector<double> a{1, 2, 2, 3}, b{10, 20, 30, 40};
    const std::vector<double> ra{1, 2.5, 2.5, 4}, rb{1, 2, 3, 4};
    EXPECT_NEAR(spearman(a, b), pearson(ra, rb), 1e-15);
}

TEST(Correlation, MeasuresOverSyntheticRuns) {
    const auto& d = synthetic_data();
    std::vector<RunEvaluation> evs;
    auto gold = evaluate_run(gold_baseline(d.corpus->reviews(), d.map, &d.qrels), *d.corpus, d.qrels, d.map);
    gold.baseline = true;
    evs.push_back(gold);
    for (const auto& run : d.runs) evs.push_back(evaluate_run(run, *d.corpus, d.qrels, d.map));
    const auto cs = correlate_measures(evs, 30);
    ASSERT_FALSE(cs.empty());
    EXPECT_TRUE(std::any_of(cs.begin(), cs.end(), [](const auto& c) { return c.measure == "map"; }));
    for (const auto& c : cs) {
        EXPECT_EQ(c.run_tags.size(), d.runs.size());
        EXPECT_GE(c.pearson, -1.0 - 1e-12);
        EXPECT_LE(c.pearson, 1.0 + 1e-12);
    }
}
