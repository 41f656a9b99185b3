#pragma once

// Report serialization. All emitters are deterministic: identical inputs give
// byte-identical output. Reals are written in shortest round-trip form.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oeval/correlation.hpp"
#include "oeval/evaluation_corpus.hpp"
#include "oeval/pareto.hpp"
#include "oeval/run_evaluation.hpp"
#include "oeval/simulation.hpp"

namespace oeval {

std::string format_number(double value);

// Per-outcome rows, one per (outcome, cutoff):
// run_tag,review_id,comparison_id,outcome_id,cutoff,mod,delta_ci,
// estimate_class,sign_match,estimable,predicted,original
std::string outcome_rows_csv(const RunEvaluation& evaluation, const EvaluationCorpus& corpus);

// One row per (run_tag, cutoff) with the aggregate table columns.
std::string aggregate_rows_csv(std::span<const RunEvaluation> evaluations);

std::string topics_csv(const RunEvaluation& evaluation);

struct RunOrdering {
    std::vector<std::size_t> by_map;       // indices into evaluations
    std::vector<std::size_t> by_mean_mod;  // at the reference cutoff
};

// Baselines sort as if they had the highest MAP. by_map: (baseline, MAP desc,
// mean_mod asc, tag); by_mean_mod: (mean_mod asc, MAP desc, tag).
RunOrdering order_runs(std::span<const RunEvaluation> evaluations, double reference_cutoff);

// Rows sorted by MAP then mean_mod, with both rank columns.
std::string run_comparison_csv(std::span<const RunEvaluation> evaluations, double reference_cutoff);

std::string run_evaluation_json(const RunEvaluation& evaluation, const EvaluationCorpus& corpus);

// Aspect rows by removal-count columns (gold first), plus recall rows.
std::string simulation_matrix_csv(const SimulationTable& table);
// Long format: removal_count,seed,<aggregate columns>,publication_recall,study_recall
std::string simulation_seeds_csv(const SimulationTable& table);
std::string simulation_json(const SimulationTable& table);

std::string pareto_csv(std::span<const ParetoPoint> points);
std::string correlation_csv(std::span<const MeasureCorrelation> correlations);

// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace oeval
