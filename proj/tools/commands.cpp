#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "oeval/correlation.hpp"
#include "oeval/csv.hpp"
#include "oeval/error.hpp"
#include "oeval/evaluation_corpus.hpp"
#include "oeval/pareto.hpp"
#include "oeval/report.hpp"
#include "oeval/review_io.hpp"
#include "oeval/run_evaluation.hpp"
#include "oeval/simulation.hpp"
#include "oeval/svg.hpp"

namespace oeval::cli {
namespace {

namespace fs = std::filesystem;

std::string_view to_string(Level level) { return level == Level::Abstract ? "abstract" : "fulltext"; }

void warn(std::string_view message) { fmt::print(stderr, "warning: {}\n", message); }

void require(const fs::path& p, std::string_view flag) {
    if (p.empty()) throw UsageError(fmt::format("{} is required for this command", flag));
}

void check_cutoffs(const CliConfig& c) {
    if (c.cutoffs.empty()) throw UsageError("--cutoffs must not be empty");
    for (double k : c.cutoffs)
        if (!(k > 0.0 && k <= 100.0)) throw UsageError("--cutoffs values must lie in (0, 100]");
    if (!(c.reference_cutoff > 0.0 && c.reference_cutoff <= 100.0))
        throw UsageError("--ref-cutoff must lie in (0, 100]");
}

EvaluationCorpus load_evaluation_corpus(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error("corpus directory not found: " + dir.string());
    return EvaluationCorpus(load_corpus(dir).reviews);
}

StudyPublicationMap load_mapping(const fs::path& file) {
    auto parsed = parse_mapping(read_file(file));
    for (const auto& w : parsed.warnings) warn(file.filename().string() + ": " + w);
    return std::move(parsed.map);
}

Qrels load_qrels(const fs::path& file) {
    auto parsed = parse_qrels(read_file(file));
    for (const auto& w : parsed.warnings) warn(file.filename().string() + ": " + w);
    return std::move(parsed.qrels);
}

RunRanking load_run(const fs::path& file) {
    RunParseResult parsed;
    try {
        parsed = parse_run(read_file(file));
    } catch (const Error& e) {
        throw Error(file.filename().string() + ": " + e.what());
    }
    for (const auto& w : parsed.warnings) warn(file.filename().string() + ": " + w);
    if (parsed.run.tag.empty()) parsed.run.tag = file.stem().string();
    return std::move(parsed.run);
}

std::string safe_name(std::string_view s) {
    std::string out(s);
    for (char& ch : out)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) ch = '_';
    return out;
}

void write(const fs::path& path, std::string_view contents) {
    write_file_atomic(path, contents);
    fmt::print("wrote {}\n", path.string());
}

struct RunBundle {
    std::vector<RunEvaluation> evaluations;
};

RunBundle evaluate_runs(const CliConfig& config, const EvaluationCorpus& corpus,
                        const StudyPublicationMap& map, const Qrels& qrels) {
    RunEvalConfig rc;
    rc.cutoffs = config.cutoffs;
    if (std::find(rc.cutoffs.begin(), rc.cutoffs.end(), config.reference_cutoff) == rc.cutoffs.end())
        rc.cutoffs.push_back(config.reference_cutoff);
    std::sort(rc.cutoffs.begin(), rc.cutoffs.end());

    RunBundle bundle;
    std::set<std::string> tags;
    auto add = [&](const RunRanking& run, bool baseline) {
        if (!tags.insert(run.tag).second) throw Error("duplicate run tag " + run.tag);
        RunEvaluation ev = evaluate_run(run, corpus, qrels, map, rc);
        ev.baseline = baseline;
        for (const auto& w : ev.warnings) warn(ev.run_tag + ": " + w);
        bundle.evaluations.push_back(std::move(ev));
    };
    if (config.baselines) {
        add(gold_baseline(corpus.reviews(), map, &qrels), true);
        add(max_with_qrels_baseline(qrels, corpus.reviews()), true);
    }
    for (const auto& path : config.runs) add(load_run(path), false);
    return bundle;
}

std::string warnings_csv(std::span<const RunEvaluation> evaluations) {
    std::string out = csv::join_row({"run_tag", "message"});
    for (const auto& ev : evaluations)
        for (const auto& w : ev.warnings) out += csv::join_row({ev.run_tag, w});
    return out;
}

std::string config_json(const CliConfig& c, std::string_view command) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["level"] = to_string(c.level);
    j["cutoffs"] = c.cutoffs;
    j["reference_cutoff"] = c.reference_cutoff;
    j["removals"] = c.removals;
    j["seeds"] = c.seeds;
    j["base_seed"] = c.base_seed;
    j["baselines"] = c.baselines;
    return j.dump(2) + "\n";
}

}  // namespace

int cmd_validate(const CliConfig& config) {
    require(config.corpus, "--corpus");
    const Corpus loaded = load_corpus(config.corpus);
    const EvaluationCorpus corpus(loaded.reviews);

    std::size_t n_dich = 0, n_cont = 0, n_skipped = 0;
    for (const auto& review : corpus.reviews())
        for (const auto& cmp : review.comparisons)
            for (const auto& o : cmp.outcomes) (o.data_kind == DataKind::Dichotomous ? n_dich : n_cont)++;
    fmt::print("reviews: {}\n", corpus.reviews().size());
    fmt::print("outcomes: {} (dichotomous {}, continuous {})\n", n_dich + n_cont, n_dich, n_cont);
    for (const auto& review : corpus.reviews()) n_skipped += review.skipped.size();
    fmt::print("skipped outcomes: {}\n", n_skipped);
    for (const auto& review : corpus.reviews())
        for (const auto& s : review.skipped)
            fmt::print("  {} / {} / {}: {}\n", review.review_id, s.comparison_id, s.outcome_id, s.reason);
    fmt::print("evaluation outcomes: {}\n", corpus.outcomes().size());
    for (const auto& ex : corpus.excluded())
        fmt::print("  excluded {} / {} / {}: {}\n", ex.key.review_id, ex.key.comparison_id, ex.key.outcome_id,
                   ex.reason);

    std::size_t mismatches = 0;
    for (const auto& gold : corpus.outcomes()) {
        const Outcome& o = corpus.outcome(gold);
        if (!o.original_estimate) continue;
        const double diff = std::abs(*o.original_estimate - gold.pooled.estimate);
        if (diff > config.published_tolerance * std::max(std::abs(*o.original_estimate), 1e-12) && diff > 1e-6) {
            const auto key = corpus.key(gold);
            fmt::print("  published total differs: {} / {} / {}: published {} recomputed {}\n", key.review_id,
                       key.comparison_id, key.outcome_id, format_number(*o.original_estimate),
                       format_number(gold.pooled.estimate));
            ++mismatches;
        }
    }
    fmt::print("published totals differing from recomputation: {}\n", mismatches);

    std::optional<StudyPublicationMap> map;
    if (!config.mapping.empty()) {
        map = load_mapping(config.mapping);
        std::size_t studies = 0, mapped = 0;
        for (const auto& review : corpus.reviews()) {
            std::set<std::string> ids;
            for (const auto& cmp : review.comparisons)
                for (const auto& o : cmp.outcomes)
                    for (const auto& sg : o.subgroups)
                        for (const auto& row : sg.rows) ids.insert(row.study_id);
            const auto known = map->studies(review.review_id);
            studies += ids.size();
            for (const auto& id : ids) mapped += known.contains(id) ? 1 : 0;
        }
        fmt::print("mapping: {} entries; study coverage {:.1f}% ({}/{})\n", map->size(),
                   studies ? 100.0 * static_cast<double>(mapped) / static_cast<double>(studies) : 0.0, mapped,
                   studies);
    }
    if (!config.qrels.empty()) {
        const Qrels qrels = load_qrels(config.qrels);
        std::size_t topics = 0;
        for (const auto& review : corpus.reviews()) topics += qrels.topic(review.review_id) ? 1 : 0;
        fmt::print("qrels: {} topics; {} of {} reviews judged\n", qrels.topics.size(), topics,
                   corpus.reviews().size());
        if (map) {
            std::size_t pubs = 0, relevant = 0;
            for (const auto& review : corpus.reviews())
                for (const auto& p : map->publications(review.review_id)) {
                    ++pubs;
                    relevant += qrels.is_relevant(review.review_id, p) ? 1 : 0;
                }
            fmt::print("qrels coverage of mapped publications: {:.1f}% ({}/{})\n",
                       pubs ? 100.0 * static_cast<double>(relevant) / static_cast<double>(pubs) : 0.0, relevant,
                       pubs);
        }
    }
    for (const auto& path : config.runs) {
        const RunRanking run = load_run(path);
        std::size_t docs = 0;
        for (const auto& [_, d] : run.topics) docs += d.size();
        fmt::print("run {}: {} topics, {} documents\n", run.tag, run.topics.size(), docs);
    }
    fmt::print("level: {}\n", to_string(config.level));
    return kExitOk;
}

int cmd_eval_run(const CliConfig& config) {
    require(config.corpus, "--corpus");
    require(config.mapping, "--mapping");
    require(config.qrels, "--qrels");
    check_cutoffs(config);
    if (config.runs.empty() && !config.baselines) throw UsageError("nothing to evaluate: no --runs and --no-baselines");

    const EvaluationCorpus corpus = load_evaluation_corpus(config.corpus);
    const StudyPublicationMap map = load_mapping(config.mapping);
    const Qrels qrels = load_qrels(config.qrels);
    const RunBundle bundle = evaluate_runs(config, corpus, map, qrels);
    const auto& evals = bundle.evaluations;

    switch (config.format) {
        case Format::Csv:
            for (const auto& ev : evals) {
                write(config.out / (safe_name(ev.run_tag) + ".outcomes.csv"), outcome_rows_csv(ev, corpus));
                write(config.out / (safe_name(ev.run_tag) + ".topics.csv"), topics_csv(ev));
            }
            write(config.out / "aggregates.csv", aggregate_rows_csv(evals));
            write(config.out / "runs_comparison.csv", run_comparison_csv(evals, config.reference_cutoff));
            write(config.out / "correlation.csv",
                  correlation_csv(correlate_measures(evals, config.reference_cutoff)));
            write(config.out / "warnings.csv", warnings_csv(evals));
            break;
        case Format::Json:
            for (const auto& ev : evals)
                write(config.out / (safe_name(ev.run_tag) + ".json"), run_evaluation_json(ev, corpus));
            write(config.out / "runs_comparison.csv", run_comparison_csv(evals, config.reference_cutoff));
            break;
        case Format::Svg: {
            std::vector<BoxSeries> series;
            const RunOrdering ord = order_runs(evals, config.reference_cutoff);
            for (std::size_t i : ord.by_map) {
                BoxSeries s{evals[i].run_tag, {}};
                for (const auto& res : evals[i].at_cutoff(config.reference_cutoff)->outcomes)
                    if (res.report.estimable) s.values.push_back(res.report.mod);
                series.push_back(std::move(s));
            }
            write(config.out / "mod_by_run.svg",
                  render_box_plot_svg(fmt::format("Relative difference at {}%", format_number(config.reference_cutoff)),
                                      series, config.axis_clamp));
            break;
        }
    }
    write(config.out / "config.json", config_json(config, "eval-run"));
    return kExitOk;
}

int cmd_simulate(const CliConfig& config) {
    require(config.corpus, "--corpus");
    require(config.mapping, "--mapping");
    SimulationSpec spec;
    spec.removal_counts = config.removals;
    spec.n_seeds = config.seeds;
    spec.base_seed = config.base_seed;
    spec.threads = config.threads;
    try {
        validate(spec);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }

    const EvaluationCorpus corpus = load_evaluation_corpus(config.corpus);
    const StudyPublicationMap map = load_mapping(config.mapping);
    const SimulationTable table = simulate_removals(corpus, map, spec);
    for (const auto& w : table.warnings) warn(w);

    switch (config.format) {
        case Format::Csv:
            write(config.out / "simulation_matrix.csv", simulation_matrix_csv(table));
            write(config.out / "simulation_seeds.csv", simulation_seeds_csv(table));
            break;
        case Format::Json:
            write(config.out / "simulation.json", simulation_json(table));
            break;
        case Format::Svg: {
            std::vector<BoxSeries> series;
            for (const auto& col : table.columns) {
                BoxSeries s{std::to_string(col.removal_count), {}};
                for (const auto& t : col.per_seed) s.values.push_back(100.0 * t.mean_mod);
                series.push_back(std::move(s));
            }
            write(config.out / "simulation_mod.svg",
                  render_box_plot_svg("Mean relative difference (%) by removed publications", series,
                                      config.axis_clamp));
            break;
        }
    }
    write(config.out / "config.json", config_json(config, "simulate"));
    return kExitOk;
}

int cmd_pareto(const CliConfig& config) {
    std::vector<ParetoInput> inputs;
    if (!config.points.empty()) {
        const csv::Table table = csv::parse(read_file(config.points));
        const auto tag = table.column("run_tag"), x = table.column("x"), y = table.column("y_raw");
        if (!tag || !x || !y) throw FormatError("points: expected columns run_tag,x,y_raw");
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto& row = table.rows[i];
            try {
                const double xv = std::stod(row[*x]);
                if (xv < 0 || xv != std::floor(xv)) throw std::invalid_argument("x");
                inputs.push_back({row[*tag], static_cast<std::size_t>(xv), std::stod(row[*y])});
            } catch (const std::logic_error&) {
                throw FormatError(fmt::format("points line {}: x must be a count and y_raw a number", table.lines[i]));
            }
        }
    } else {
        require(config.corpus, "--corpus (or --points)");
        require(config.mapping, "--mapping");
        require(config.qrels, "--qrels");
        check_cutoffs(config);
        const EvaluationCorpus corpus = load_evaluation_corpus(config.corpus);
        const StudyPublicationMap map = load_mapping(config.mapping);
        const Qrels qrels = load_qrels(config.qrels);
        const RunBundle bundle = evaluate_runs(config, corpus, map, qrels);
        // Gold is the full original review: nothing missing, nothing changed.
        // A truncated gold ranking at the cutoff would not be (0, 0).
        inputs.push_back({"gold", 0, 0.0});
        for (auto& in : pareto_inputs(bundle.evaluations, config.reference_cutoff))
            if (in.run_tag != "gold") inputs.push_back(std::move(in));
    }

    const auto points = pareto_frontier(inputs);
    write(config.out / "pareto.csv", pareto_csv(points));
    write(config.out / "pareto.svg", render_pareto_svg(points));
    return kExitOk;
}

int cmd_report(const CliConfig& config) {
    require(config.corpus, "--corpus");
    const EvaluationCorpus corpus = load_evaluation_corpus(config.corpus);

    // Optional: draw each outcome as pooled from one run's retrieved set.
    std::optional<RunRanking> run;
    std::optional<StudyPublicationMap> map;
    if (!config.runs.empty()) {
        if (config.runs.size() > 1) throw UsageError("report takes at most one --runs file");
        require(config.mapping, "--mapping");
        check_cutoffs(config);
        run = load_run(config.runs.front());
        map = load_mapping(config.mapping);
    }

    std::size_t written = 0;
    for (std::size_t r = 0; r < corpus.reviews().size(); ++r) {
        const Review& review = corpus.reviews()[r];
        if (!config.review.empty() && review.review_id != config.review) continue;
        std::optional<std::set<std::string>> found;
        if (run) {
            std::set<std::string> retrieved;
            if (const auto* docs = run->topic(review.review_id)) {
                const std::size_t cut =
                    docs->empty() ? 0 : std::min(cutoff_at_percent(docs->size(), config.reference_cutoff), docs->size());
                for (std::size_t i = 0; i < cut; ++i) retrieved.insert((*docs)[i].publication_id);
            }
            found = studies_found(review.review_id, retrieved, *map);
        }
        for (const auto& gold : corpus.outcomes_of(r)) {
            const Outcome& outcome = corpus.outcome(gold);
            const PooledOutcome pooled = found ? pool_outcome(outcome, *found) : gold.pooled;
            const auto key = corpus.key(gold);
            const std::string name = safe_name(key.review_id + "_" + key.comparison_id + "_" + key.outcome_id);
            write(config.out / "forest" / (name + ".svg"),
                  render_forest_svg(outcome, pooled, found ? &*found : nullptr));
            ++written;
        }
    }
    if (!config.review.empty() && written == 0) throw Error("no evaluable outcomes for review " + config.review);
    return kExitOk;
}

int run_command(const CliConfig& config) {
    try {
        switch (config.command) {
            case Command::Validate: return cmd_validate(config);
            case Command::EvalRun: return cmd_eval_run(config);
            case Command::Simulate: return cmd_simulate(config);
            case Command::Pareto: return cmd_pareto(config);
            case Command::Report: return cmd_report(config);
        }
    } catch (const UsageError& e) {
        fmt::print(stderr, "usage error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace oeval::cli
