#include "oeval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "oeval/csv.hpp"
#include "oeval/error.hpp"

namespace oeval {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string str(std::size_t n) { return std::to_string(n); }

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

const std::vector<std::string> kAggregateColumns{
    "mean_mod", "mean_delta_ci", "n_equal",   "n_over",    "n_under",  "n_same_sign",
    "n_diff_sign", "n_reported", "n_missing", "n_total", "sum_mod_estimable"};

std::vector<std::string> aggregate_fields(const AggregateTable& t) {
    return {format_number(t.mean_mod), format_number(t.mean_delta_ci), str(t.n_equal),
            str(t.n_over),            str(t.n_under),                 str(t.n_same_sign),
            str(t.n_diff_sign),       str(t.n_reported),              str(t.n_missing),
            str(t.n_total),           format_number(t.sum_mod_estimable)};
}

ordered_json aggregate_json(const AggregateTable& t) {
    ordered_json j;
    j["mean_mod"] = t.mean_mod;
    j["mean_delta_ci"] = t.mean_delta_ci;
    j["n_equal"] = t.n_equal;
    j["n_over"] = t.n_over;
    j["n_under"] = t.n_under;
    j["n_same_sign"] = t.n_same_sign;
    j["n_diff_sign"] = t.n_diff_sign;
    j["n_reported"] = t.n_reported;
    j["n_missing"] = t.n_missing;
    j["n_total"] = t.n_total;
    j["sum_mod_estimable"] = t.sum_mod_estimable;
    return j;
}

ordered_json mean_json(const MeanAggregate& t) {
    ordered_json j;
    j["mean_mod"] = t.mean_mod;
    j["mean_delta_ci"] = t.mean_delta_ci;
    j["n_equal"] = t.n_equal;
    j["n_over"] = t.n_over;
    j["n_under"] = t.n_under;
    j["n_same_sign"] = t.n_same_sign;
    j["n_diff_sign"] = t.n_diff_sign;
    j["n_reported"] = t.n_reported;
    j["n_missing"] = t.n_missing;
    j["n_total"] = t.n_total;
    return j;
}

double mean_mod_at(const RunEvaluation& ev, double cutoff) {
    const CutoffEvaluation* at = ev.at_cutoff(cutoff);
    if (!at) throw ConfigError("run " + ev.run_tag + " was not evaluated at cutoff " + format_number(cutoff));
    return at->aggregate.mean_mod;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    return fmt::format("{}", value);
}

std::string outcome_rows_csv(const RunEvaluation& evaluation, const EvaluationCorpus& corpus) {
    std::string out = csv::join_row({"run_tag", "review_id", "comparison_id", "outcome_id", "cutoff",
                                     "mod", "delta_ci", "estimate_class", "sign_match", "estimable",
                                     "predicted", "original"});
    for (const auto& ce : evaluation.cutoffs) {
        for (const auto& res : ce.outcomes) {
            const OutcomeKey key = corpus.key(*res.gold);
            out += csv::join_row({evaluation.run_tag, key.review_id, key.comparison_id, key.outcome_id,
                                  format_number(ce.cutoff), format_number(res.report.mod),
                                  opt_number(res.report.delta_ci),
                                  std::string(to_string(res.report.estimate_class)),
                                  std::string(to_string(res.report.sign_match)),
                                  res.report.estimable ? "true" : "false", opt_number(res.predicted),
                                  format_number(res.gold->pooled.estimate)});
        }
    }
    return out;
}

std::string aggregate_rows_csv(std::span<const RunEvaluation> evaluations) {
    std::vector<std::string> header{"run_tag", "baseline", "cutoff"};
    header.insert(header.end(), kAggregateColumns.begin(), kAggregateColumns.end());
    std::string out = csv::join_row(header);
    for (const auto& ev : evaluations)
        for (const auto& ce : ev.cutoffs) {
            std::vector<std::string> row{ev.run_tag, ev.baseline ? "true" : "false", format_number(ce.cutoff)};
            const auto fields = aggregate_fields(ce.aggregate);
            row.insert(row.end(), fields.begin(), fields.end());
            out += csv::join_row(row);
        }
    return out;
}

std::string topics_csv(const RunEvaluation& evaluation) {
    std::vector<std::string> header{"run_tag", "topic_id", "n_docs", "n_relevant", "n_unjudged", "ap"};
    std::vector<double> recall_keys, ndcg_keys, wss_keys;
    if (!evaluation.topics.empty()) {
        const auto& t0 = evaluation.topics.front();
        for (const auto& [k, _] : t0.recall_at) recall_keys.push_back(k);
        for (const auto& [k, _] : t0.ndcg_at) ndcg_keys.push_back(k);
        for (const auto& [k, _] : t0.wss) wss_keys.push_back(k);
    }
    for (double k : recall_keys) header.push_back("recall@" + format_number(k));
    for (double k : ndcg_keys) header.push_back("ndcg@" + format_number(k));
    for (double k : wss_keys) header.push_back("wss@" + format_number(k));
    header.push_back("last_rel");
    header.push_back("aurc");
    std::string out = csv::join_row(header);

    auto lookup = [](const std::map<double, double>& m, double k) {
        auto it = m.find(k);
        return it == m.end() ? std::string() : format_number(it->second);
    };
    for (const auto& t : evaluation.topics) {
        std::vector<std::string> row{evaluation.run_tag, t.topic_id, str(t.n_docs), str(t.n_relevant),
                                     str(t.n_unjudged), format_number(t.ap)};
        for (double k : recall_keys) row.push_back(lookup(t.recall_at, k));
        for (double k : ndcg_keys) row.push_back(lookup(t.ndcg_at, k));
        for (double k : wss_keys) row.push_back(lookup(t.wss, k));
        row.push_back(t.last_rel_rank ? str(*t.last_rel_rank) : std::string());
        row.push_back(format_number(t.aurc));
        out += csv::join_row(row);
    }
    return out;
}

RunOrdering order_runs(std::span<const RunEvaluation> evaluations, double reference_cutoff) {
    std::vector<double> mods;
    for (const auto& ev : evaluations) mods.push_back(mean_mod_at(ev, reference_cutoff));

    RunOrdering ord;
    ord.by_map.resize(evaluations.size());
    std::iota(ord.by_map.begin(), ord.by_map.end(), 0);
    ord.by_mean_mod = ord.by_map;

    std::sort(ord.by_map.begin(), ord.by_map.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = evaluations[a];
        const auto& eb = evaluations[b];
        if (ea.baseline != eb.baseline) return ea.baseline;
        if (ea.map != eb.map) return ea.map > eb.map;
        if (mods[a] != mods[b]) return mods[a] < mods[b];
        return ea.run_tag < eb.run_tag;
    });
    std::sort(ord.by_mean_mod.begin(), ord.by_mean_mod.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = evaluations[a];
        const auto& eb = evaluations[b];
        if (mods[a] != mods[b]) return mods[a] < mods[b];
        if (ea.map != eb.map) return ea.map > eb.map;
        return ea.run_tag < eb.run_tag;
    });
    return ord;
}

std::string run_comparison_csv(std::span<const RunEvaluation> evaluations, double reference_cutoff) {
    const RunOrdering ord = order_runs(evaluations, reference_cutoff);
    std::vector<std::size_t> rank_by_mod(evaluations.size());
    for (std::size_t i = 0; i < ord.by_mean_mod.size(); ++i) rank_by_mod[ord.by_mean_mod[i]] = i + 1;

    std::vector<double> cutoffs;
    if (!evaluations.empty())
        for (const auto& ce : evaluations.front().cutoffs) cutoffs.push_back(ce.cutoff);

    std::vector<std::string> header{"run_tag",          "baseline",   "map", "rank_by_map", "rank_by_mean_mod",
                                    "reference_cutoff", "reference_mean_mod"};
    for (double k : cutoffs) header.push_back("mean_mod@" + format_number(k));
    for (double k : cutoffs) header.push_back("n_missing@" + format_number(k));
    std::string out = csv::join_row(header);

    for (std::size_t pos = 0; pos < ord.by_map.size(); ++pos) {
        const std::size_t i = ord.by_map[pos];
        const auto& ev = evaluations[i];
        std::vector<std::string> row{ev.run_tag,        ev.baseline ? "true" : "false",
                                     format_number(ev.map), str(pos + 1),
                                     str(rank_by_mod[i]), format_number(reference_cutoff),
                                     format_number(mean_mod_at(ev, reference_cutoff))};
        for (double k : cutoffs) {
            const auto* at = ev.at_cutoff(k);
            row.push_back(at ? format_number(at->aggregate.mean_mod) : std::string());
        }
        for (double k : cutoffs) {
            const auto* at = ev.at_cutoff(k);
            row.push_back(at ? str(at->aggregate.n_missing) : std::string());
        }
        out += csv::join_row(row);
    }
    return out;
}

std::string run_evaluation_json(const RunEvaluation& evaluation, const EvaluationCorpus& corpus) {
    ordered_json j;
    j["run_tag"] = evaluation.run_tag;
    j["baseline"] = evaluation.baseline;
    j["map"] = evaluation.map;
    j["warnings"] = evaluation.warnings;

    ordered_json cutoffs = ordered_json::array();
    for (const auto& ce : evaluation.cutoffs) {
        ordered_json c;
        c["cutoff"] = ce.cutoff;
        c["aggregate"] = aggregate_json(ce.aggregate);
        ordered_json outcomes = ordered_json::array();
        for (const auto& res : ce.outcomes) {
            const OutcomeKey key = corpus.key(*res.gold);
            const Outcome& outcome = corpus.outcome(*res.gold);
            ordered_json o;
            o["review_id"] = key.review_id;
            o["comparison_id"] = key.comparison_id;
            o["outcome_id"] = key.outcome_id;
            o["effect_measure"] = to_string(outcome.effect_measure);
            o["model"] = to_string(outcome.model);
            o["mod"] = res.report.mod;
            o["delta_ci"] = res.report.delta_ci ? ordered_json(*res.report.delta_ci) : ordered_json();
            o["estimate_class"] = to_string(res.report.estimate_class);
            o["sign_match"] = to_string(res.report.sign_match);
            o["estimable"] = res.report.estimable;
            o["predicted"] = res.predicted ? ordered_json(*res.predicted) : ordered_json();
            o["original"] = res.gold->pooled.estimate;
            outcomes.push_back(std::move(o));
        }
        c["outcomes"] = std::move(outcomes);
        cutoffs.push_back(std::move(c));
    }
    j["cutoffs"] = std::move(cutoffs);

    ordered_json topics = ordered_json::array();
    for (const auto& t : evaluation.topics) {
        ordered_json o;
        o["topic_id"] = t.topic_id;
        o["n_docs"] = t.n_docs;
        o["n_relevant"] = t.n_relevant;
        o["n_unjudged"] = t.n_unjudged;
        o["ap"] = t.ap;
        for (const auto& [name, m] : {std::pair{"recall_at", &t.recall_at}, std::pair{"ndcg_at", &t.ndcg_at},
                                      std::pair{"wss", &t.wss}}) {
            ordered_json obj = ordered_json::object();
            for (const auto& [k, v] : *m) obj[format_number(k)] = v;
            o[name] = std::move(obj);
        }
        o["last_rel_rank"] = t.last_rel_rank ? ordered_json(*t.last_rel_rank) : ordered_json();
        o["aurc"] = t.aurc;
        topics.push_back(std::move(o));
    }
    j["topics"] = std::move(topics);
    return dump(j);
}

std::string simulation_matrix_csv(const SimulationTable& table) {
    std::vector<std::string> header{"aspect", "gold"};
    for (const auto& col : table.columns) header.push_back(str(col.removal_count));
    std::string out = csv::join_row(header);

    auto add = [&](std::string name, double gold, auto&& pick) {
        std::vector<std::string> row{std::move(name), format_number(gold)};
        for (const auto& col : table.columns) row.push_back(format_number(pick(col)));
        out += csv::join_row(row);
    };
    const auto& g = table.gold;
    // Relative difference in percent; the other rows stay as counts.
    add("mean_relative_difference_pct", 100.0 * g.mean_mod,
        [](const SimulationColumn& c) { return 100.0 * c.mean.mean_mod; });
    add("mean_delta_ci", g.mean_delta_ci, [](const SimulationColumn& c) { return c.mean.mean_delta_ci; });
    add("equal", static_cast<double>(g.n_equal), [](const SimulationColumn& c) { return c.mean.n_equal; });
    add("different", static_cast<double>(g.n_different()),
        [](const SimulationColumn& c) { return c.mean.n_over + c.mean.n_under; });
    add("overestimated", static_cast<double>(g.n_over), [](const SimulationColumn& c) { return c.mean.n_over; });
    add("underestimated", static_cast<double>(g.n_under),
        [](const SimulationColumn& c) { return c.mean.n_under; });
    add("same_sign", static_cast<double>(g.n_same_sign),
        [](const SimulationColumn& c) { return c.mean.n_same_sign; });
    add("different_sign", static_cast<double>(g.n_diff_sign),
        [](const SimulationColumn& c) { return c.mean.n_diff_sign; });
    add("reported", static_cast<double>(g.n_reported),
        [](const SimulationColumn& c) { return c.mean.n_reported; });
    add("missing", static_cast<double>(g.n_missing), [](const SimulationColumn& c) { return c.mean.n_missing; });
    add("total", static_cast<double>(g.n_total), [](const SimulationColumn& c) { return c.mean.n_total; });
    add("publication_recall", 1.0, [](const SimulationColumn& c) { return c.mean_publication_recall; });
    add("study_recall", 1.0, [](const SimulationColumn& c) { return c.mean_study_recall; });
    return out;
}

std::string simulation_seeds_csv(const SimulationTable& table) {
    std::vector<std::string> header{"removal_count", "seed"};
    header.insert(header.end(), kAggregateColumns.begin(), kAggregateColumns.end());
    header.push_back("publication_recall");
    header.push_back("study_recall");
    std::string out = csv::join_row(header);
    for (const auto& col : table.columns)
        for (std::size_t s = 0; s < col.per_seed.size(); ++s) {
            std::vector<std::string> row{str(col.removal_count), str(s)};
            const auto fields = aggregate_fields(col.per_seed[s]);
            row.insert(row.end(), fields.begin(), fields.end());
            row.push_back(format_number(col.publication_recall[s]));
            row.push_back(format_number(col.study_recall[s]));
            out += csv::join_row(row);
        }
    return out;
}

std::string simulation_json(const SimulationTable& table) {
    ordered_json j;
    j["n_reviews"] = table.n_reviews;
    j["gold"] = aggregate_json(table.gold);
    ordered_json cols = ordered_json::array();
    for (const auto& col : table.columns) {
        ordered_json c;
        c["removal_count"] = col.removal_count;
        c["mean"] = mean_json(col.mean);
        c["mean_publication_recall"] = col.mean_publication_recall;
        c["mean_study_recall"] = col.mean_study_recall;
        ordered_json seeds = ordered_json::array();
        for (std::size_t s = 0; s < col.per_seed.size(); ++s) {
            ordered_json sj = aggregate_json(col.per_seed[s]);
            sj["publication_recall"] = col.publication_recall[s];
            sj["study_recall"] = col.study_recall[s];
            seeds.push_back(std::move(sj));
        }
        c["per_seed"] = std::move(seeds);
        cols.push_back(std::move(c));
    }
    j["columns"] = std::move(cols);
    j["warnings"] = table.warnings;
    return dump(j);
}

std::string pareto_csv(std::span<const ParetoPoint> points) {
    std::string out = csv::join_row({"run_tag", "x", "y_raw", "y", "dominated"});
    for (const auto& p : points)
        out += csv::join_row({p.run_tag, str(p.x), format_number(p.y_raw), format_number(p.y),
                              p.dominated ? "true" : "false"});
    return out;
}

std::string correlation_csv(std::span<const MeasureCorrelation> correlations) {
    std::string out = csv::join_row(
        {"measure", "run_tag", "measure_value", "mean_mod", "pearson", "spearman", "slope", "intercept"});
    for (const auto& mc : correlations)
        for (std::size_t i = 0; i < mc.run_tags.size(); ++i)
            out += csv::join_row({mc.measure, mc.run_tags[i], format_number(mc.measure_values[i]),
                                  format_number(mc.mean_mod[i]), format_number(mc.pearson),
                                  format_number(mc.spearman), format_number(mc.fit.slope),
                                  format_number(mc.fit.intercept)});
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

}  // namespace oeval
