#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <regex>

#include "oeval/csv.hpp"
#include "oeval/report.hpp"
#include "oeval/svg.hpp"
#include "test_support.hpp"

using namespace oeval;
using testing_support::dich;
using testing_support::outcome_of;
using testing_support::synthetic_data;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
    return n;
}

std::vector<RunEvaluation> synthetic_evaluations() {
    const auto& d = synthetic_data();
    std::vector<RunEvaluation> evs;
    auto gold = evaluate_run(gold_baseline(d.corpus->reviews(), d.map, &d.qrels), *d.corpus, d.qrels, d.map,
                             {{30, 100}, {}, {}});
    gold.baseline = true;
    evs.push_back(std::move(gold));
    for (const auto& run : d.runs) evs.push_back(evaluate_run(run, *d.corpus, d.qrels, d.map, {{30, 100}, {}, {}}));
    return evs;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(0.25), "0.25");
    EXPECT_EQ(format_number(0.1), "0.1");
    for (double v : {1.0 / 3.0, 2.718281828459045, 1e-300, 123456789.125})
        EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(ReportCsv, SelfRoundTrip) {
    const auto& d = synthetic_data();
    const auto evs = synthetic_evaluations();

    const auto rows = csv::parse(outcome_rows_csv(evs[1], *d.corpus));
    EXPECT_EQ(rows.header.front(), "run_tag");
    EXPECT_EQ(rows.rows.size(), 2 * d.corpus->outcomes().size());
    const auto mod_col = *rows.column("mod");
    for (std::size_t i = 0; i < rows.rows.size(); ++i)
        EXPECT_EQ(std::stod(rows.rows[i][mod_col]), evs[1].cutoffs[i / d.corpus->outcomes().size()].outcomes[i % d.corpus->outcomes().size()].report.mod);

    const auto agg = csv::parse(aggregate_rows_csv(evs));
    EXPECT_EQ(agg.rows.size(), 2 * evs.size());
    const auto total = *agg.column("n_total"), eq = *agg.column("n_equal"), over = *agg.column("n_over"),
               under = *agg.column("n_under"), miss = *agg.column("n_missing"), rep = *agg.column("n_reported");
    for (const auto& r : agg.rows) {
        EXPECT_EQ(std::stoul(r[eq]) + std::stoul(r[over]) + std::stoul(r[under]) + std::stoul(r[miss]),
                  std::stoul(r[total]));
        EXPECT_EQ(std::stoul(r[rep]) + std::stoul(r[miss]), std::stoul(r[total]));
    }

    EXPECT_NO_THROW(csv::parse(topics_csv(evs[1])));
    EXPECT_NO_THROW(csv::parse(correlation_csv(correlate_measures(evs, 30))));

    SimulationSpec spec;
    spec.removal_counts = {1};
    spec.n_seeds = 2;
    const auto sim = simulate_removals(*d.corpus, d.map, spec);
    const auto matrix = csv::parse(simulation_matrix_csv(sim));
    EXPECT_EQ(matrix.header, (std::vector<std::string>{"aspect", "gold", "1"}));
    EXPECT_EQ(simulation_matrix_csv(sim), simulation_matrix_csv(simulate_removals(*d.corpus, d.map, spec)));
    EXPECT_EQ(csv::parse(simulation_seeds_csv(sim)).rows.size(), 2u);
}

TEST(RunComparison, ExposesBothOrderings) {
    const auto evs = synthetic_evaluations();
    const auto table = csv::parse(run_comparison_csv(evs, 30));
    ASSERT_EQ(table.rows.size(), evs.size());
    const auto tag = *table.column("run_tag"), map_rank = *table.column("rank_by_map"),
               mod_rank = *table.column("rank_by_mean_mod"), map_col = *table.column("map");
    EXPECT_EQ(table.rows[0][tag], "gold");

    // Independent sort of the non-baseline runs.
    std::vector<const RunEvaluation*> runs;
    for (const auto& e : evs)
        if (!e.baseline) runs.push_back(&e);
    std::stable_sort(runs.begin(), runs.end(), [](const RunEvaluation* a, const RunEvaluation* b) {
        if (a->map != b->map) return a->map > b->map;
        return a->run_tag < b->run_tag;
    });
    for (std::size_t i = 0; i < runs.size(); ++i) {
        EXPECT_EQ(table.rows[i + 1][tag], runs[i]->run_tag);
        EXPECT_EQ(std::stod(table.rows[i + 1][map_col]), runs[i]->map);
        EXPECT_EQ(std::stoul(table.rows[i + 1][map_rank]), i + 2);
    }
    std::set<std::string> mod_ranks;
    for (const auto& r : table.rows) mod_ranks.insert(r[mod_rank]);
    EXPECT_EQ(mod_ranks.size(), evs.size());
    EXPECT_EQ(run_comparison_csv(evs, 30), run_comparison_csv(evs, 30));
}

TEST(RunComparison, StrictlyBetterRunOrderedFirst) {
    const auto& d = synthetic_data();
    auto evs = synthetic_evaluations();
    std::reverse(evs.begin(), evs.end());
    const auto order = order_runs(evs, 30);
    auto by_mod = order.by_mean_mod;
    for (std::size_t i = 1; i < by_mod.size(); ++i) {
        const auto& a = evs[by_mod[i - 1]];
        const auto& b = evs[by_mod[i]];
        EXPECT_LE(a.at_cutoff(30)->aggregate.mean_mod, b.at_cutoff(30)->aggregate.mean_mod);
    }
    (void)d;
}

TEST(ReportJson, ContainsAggregates) {
    const auto& d = synthetic_data();
    const auto evs = synthetic_evaluations();
    const auto text = run_evaluation_json(evs[1], *d.corpus);
    EXPECT_NE(text.find("\"run_tag\""), std::string::npos);
    EXPECT_EQ(text, run_evaluation_json(evs[1], *d.corpus));
}

TEST(ForestSvg, RowsAndTotal) {
    const auto o = outcome_of({dich("S1", 10, 50, 5, 50), dich("S2", 8, 40, 6, 41), dich("S3", 3, 30, 7, 30),
                               dich("S4", 12, 60, 9, 58), dich("S5", 6, 35, 2, 33)},
                              EffectMeasure::RR, Pooling::MantelHaenszel);
    const auto pooled = pool_outcome(o);
    const auto svg = render_forest_svg(o, pooled);
    EXPECT_EQ(count_of(svg, "class=\"study-row\""), 5u);
    EXPECT_EQ(count_of(svg, "class=\"total-row\""), 1u);
    EXPECT_EQ(svg, render_forest_svg(o, pooled));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);

    const std::set<std::string> none;
    const auto empty = render_forest_svg(o, pool_outcome(o, none), &none);
    EXPECT_NE(empty.find("Not estimable"), std::string::npos);
    EXPECT_EQ(count_of(empty, "class=\"study-row\""), 0u);
}

TEST(ParetoSvg, DominatedHollow) {
    const std::vector<ParetoInput> pts{{"A", 1, 1}, {"B", 2, 2}, {"C", 0, 3}};
    const auto svg = render_pareto_svg(pareto_frontier(pts));
    EXPECT_EQ(count_of(svg, "class=\"dominated\""), 1u);
    EXPECT_EQ(count_of(svg, "class=\"frontier\""), 2u);
    const std::regex hollow_b("<circle[^>]*fill=\"none\"[^>]*class=\"dominated\"[^>]*/>\\s*<text[^>]*>B<");
    EXPECT_TRUE(std::regex_search(svg, hollow_b)) << svg;
}

TEST(BoxSvg, Deterministic) {
    const std::vector<BoxSeries> s{{"a", {0.1, 0.5, 0.9, 40}}, {"b", {}}};
    EXPECT_EQ(render_box_plot_svg("t", s, 30.0), render_box_plot_svg("t", s, 30.0));
}

TEST(WriteFileAtomic, ReplacesContents) {
    const auto dir = std::filesystem::temp_directory_path() / "oeval_report_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    const auto path = dir / "out.csv";
    write_file_atomic(path, "one\n");
    write_file_atomic(path, "two\n");
    EXPECT_EQ(read_file(path), "two\n");
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove_all(dir.parent_path());
}
