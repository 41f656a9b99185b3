#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oeval/error.hpp"
#include "oeval/review_io.hpp"

namespace oeval {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

class Reader {
public:
    const json& field(const json& obj, const std::string& key, const std::string& path) const {
        if (!obj.is_object()) throw ValidationError(path, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) throw ValidationError(path + "." + key, "missing field");
        return *it;
    }

    std::string string_field(const json& obj, const std::string& key, const std::string& path,
                             bool required = true) const {
        if (!required && (!obj.contains(key) || obj.at(key).is_null())) return {};
        const json& v = field(obj, key, path);
        if (!v.is_string()) throw ValidationError(path + "." + key, "expected a string");
        return v.get<std::string>();
    }

    double real_field(const json& obj, const std::string& key, const std::string& path) const {
        const json& v = field(obj, key, path);
        if (!v.is_number()) throw ValidationError(path + "." + key, "expected a number");
        const double value = v.get<double>();
        if (!std::isfinite(value)) throw ValidationError(path + "." + key, "non-finite number");
        return value;
    }

    std::int64_t count_field(const json& obj, const std::string& key, const std::string& path) const {
        const json& v = field(obj, key, path);
        if (v.is_number_integer()) return v.get<std::int64_t>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d == std::floor(d)) return static_cast<std::int64_t>(d);
        }
        throw ValidationError(path + "." + key, "expected an integer");
    }

    const json& array_field(const json& obj, const std::string& key, const std::string& path) const {
        const json& v = field(obj, key, path);
        if (!v.is_array()) throw ValidationError(path + "." + key, "expected an array");
        return v;
    }

    template <typename T, typename ParseFn>
    T enum_field(const json& obj, const std::string& key, const std::string& path,
                 ParseFn parse) const {
        const std::string text = string_field(obj, key, path);
        const auto value = parse(text);
        if (!value) throw ValidationError(path + "." + key, "unknown value '" + text + "'");
        return *value;
    }
};

StudyRow read_row(const Reader& r, const json& j, DataKind kind, const std::string& path) {
    StudyRow row;
    row.study_id = r.string_field(j, "study_id", path);
    if (row.study_id.empty()) throw ValidationError(path + ".study_id", "empty study id");
    if (kind == DataKind::Dichotomous) {
        DichotomousArms a{r.count_field(j, "events_exp", path), r.count_field(j, "total_exp", path),
                          r.count_field(j, "events_ctrl", path),
                          r.count_field(j, "total_ctrl", path)};
        if (a.total_exp < 0) throw ValidationError(path + ".total_exp", "negative total");
        if (a.total_ctrl < 0) throw ValidationError(path + ".total_ctrl", "negative total");
        if (a.events_exp < 0 || a.events_exp > a.total_exp)
            throw ValidationError(path + ".events_exp", "events outside [0, total]");
        if (a.events_ctrl < 0 || a.events_ctrl > a.total_ctrl)
            throw ValidationError(path + ".events_ctrl", "events outside [0, total]");
        row.data = a;
    } else {
        ContinuousArms c{r.count_field(j, "n_exp", path),   r.real_field(j, "mean_exp", path),
                         r.real_field(j, "sd_exp", path),   r.count_field(j, "n_ctrl", path),
                         r.real_field(j, "mean_ctrl", path), r.real_field(j, "sd_ctrl", path)};
        if (c.n_exp < 0) throw ValidationError(path + ".n_exp", "negative group size");
        if (c.n_ctrl < 0) throw ValidationError(path + ".n_ctrl", "negative group size");
        if (c.sd_exp < 0) throw ValidationError(path + ".sd_exp", "negative standard deviation");
        if (c.sd_ctrl < 0) throw ValidationError(path + ".sd_ctrl", "negative standard deviation");
        row.data = c;
    }
    return row;
}

Outcome read_outcome(const Reader& r, const json& j, const std::string& path) {
    Outcome out;
    out.outcome_id = r.string_field(j, "id", path);
    out.name = r.string_field(j, "name", path, /*required=*/false);
    out.data_kind = r.enum_field<DataKind>(j, "data_kind", path, parse_data_kind);
    out.effect_measure = r.enum_field<EffectMeasure>(j, "effect_measure", path, parse_effect_measure);
    out.pooling = r.enum_field<Pooling>(j, "pooling", path, parse_pooling);
    out.model = r.enum_field<Model>(j, "model", path, parse_model);
    out.ci_level = j.contains("ci_level") ? r.real_field(j, "ci_level", path) : 0.95;
    if (!measure_fits_kind(out.effect_measure, out.data_kind))
        throw ValidationError(path + ".effect_measure", "does not fit data_kind");
    if (out.pooling == Pooling::MantelHaenszel && out.data_kind != DataKind::Dichotomous)
        throw ValidationError(path + ".pooling", "Mantel-Haenszel requires dichotomous data");
    if (!(out.ci_level > 0.0 && out.ci_level < 1.0))
        throw ValidationError(path + ".ci_level", "must lie in (0, 1)");

    if (j.contains("original") && !j.at("original").is_null()) {
        const json& o = j.at("original");
        const std::string opath = path + ".original";
        if (!o.is_object()) throw ValidationError(opath, "expected an object");
        if (o.contains("estimate")) out.original_estimate = r.real_field(o, "estimate", opath);
        const bool has_lo = o.contains("ci_low"), has_hi = o.contains("ci_high");
        if (has_lo != has_hi) throw ValidationError(opath, "ci_low and ci_high must appear together");
        if (has_lo) out.original_ci = Interval{r.real_field(o, "ci_low", opath),
                                               r.real_field(o, "ci_high", opath)};
    }

    const json& subgroups = r.array_field(j, "subgroups", path);
    for (std::size_t s = 0; s < subgroups.size(); ++s) {
        const std::string spath = path + ".subgroups[" + std::to_string(s) + "]";
        const json& sj = subgroups[s];
        Subgroup sg;
        sg.subgroup_id = r.string_field(sj, "id", spath);
        sg.name = r.string_field(sj, "name", spath, /*required=*/false);
        const json& rows = r.array_field(sj, "rows", spath);
        for (std::size_t i = 0; i < rows.size(); ++i)
            sg.rows.push_back(
                read_row(r, rows[i], out.data_kind, spath + ".rows[" + std::to_string(i) + "]"));
        out.subgroups.push_back(std::move(sg));
    }
    return out;
}

ordered_json row_json(const StudyRow& row) {
    ordered_json j;
    j["study_id"] = row.study_id;
    if (const auto* d = std::get_if<DichotomousArms>(&row.data)) {
        j["events_exp"] = d->events_exp;
        j["total_exp"] = d->total_exp;
        j["events_ctrl"] = d->events_ctrl;
        j["total_ctrl"] = d->total_ctrl;
    } else {
        const auto& c = std::get<ContinuousArms>(row.data);
        j["n_exp"] = c.n_exp;
        j["mean_exp"] = c.mean_exp;
        j["sd_exp"] = c.sd_exp;
        j["n_ctrl"] = c.n_ctrl;
        j["mean_ctrl"] = c.mean_ctrl;
        j["sd_ctrl"] = c.sd_ctrl;
    }
    return j;
}

}  // namespace

Review parse_review_json(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
    const Reader r;
    Review review;
    review.review_id = r.string_field(doc, "review_id", "$");
    const json& comparisons = r.array_field(doc, "comparisons", "$");
    for (std::size_t c = 0; c < comparisons.size(); ++c) {
        const std::string cpath = "$.comparisons[" + std::to_string(c) + "]";
        const json& cj = comparisons[c];
        Comparison cmp;
        cmp.comparison_id = r.string_field(cj, "id", cpath);
        cmp.name = r.string_field(cj, "name", cpath, /*required=*/false);
        const json& outcomes = r.array_field(cj, "outcomes", cpath);
        for (std::size_t o = 0; o < outcomes.size(); ++o)
            cmp.outcomes.push_back(
                read_outcome(r, outcomes[o], cpath + ".outcomes[" + std::to_string(o) + "]"));
        review.comparisons.push_back(std::move(cmp));
    }
    if (doc.contains("skipped")) {
        const json& skipped = r.array_field(doc, "skipped", "$");
        for (std::size_t i = 0; i < skipped.size(); ++i) {
            const std::string spath = "$.skipped[" + std::to_string(i) + "]";
            review.skipped.push_back({r.string_field(skipped[i], "comparison_id", spath),
                                      r.string_field(skipped[i], "outcome_id", spath),
                                      r.string_field(skipped[i], "reason", spath, false)});
        }
    }
    validate(review);
    return review;
}

std::string emit_review_json(const Review& review) {
    ordered_json doc;
    doc["review_id"] = review.review_id;
    doc["comparisons"] = ordered_json::array();
    for (const auto& cmp : review.comparisons) {
        ordered_json cj;
        cj["id"] = cmp.comparison_id;
        cj["name"] = cmp.name;
        cj["outcomes"] = ordered_json::array();
        for (const auto& out : cmp.outcomes) {
            ordered_json oj;
            oj["id"] = out.outcome_id;
            oj["name"] = out.name;
            oj["data_kind"] = std::string(to_string(out.data_kind));
            oj["effect_measure"] = std::string(to_string(out.effect_measure));
            oj["pooling"] = std::string(to_string(out.pooling));
            oj["model"] = std::string(to_string(out.model));
            oj["ci_level"] = out.ci_level;
            if (out.original_estimate || out.original_ci) {
                ordered_json orig = ordered_json::object();
                if (out.original_estimate) orig["estimate"] = *out.original_estimate;
                if (out.original_ci) {
                    orig["ci_low"] = out.original_ci->low;
                    orig["ci_high"] = out.original_ci->high;
                }
                oj["original"] = std::move(orig);
            }
            oj["subgroups"] = ordered_json::array();
            for (const auto& sg : out.subgroups) {
                ordered_json sj;
                sj["id"] = sg.subgroup_id;
                sj["name"] = sg.name;
                sj["rows"] = ordered_json::array();
                for (const auto& row : sg.rows) sj["rows"].push_back(row_json(row));
                oj["subgroups"].push_back(std::move(sj));
            }
            cj["outcomes"].push_back(std::move(oj));
        }
        doc["comparisons"].push_back(std::move(cj));
    }
    if (!review.skipped.empty()) {
        doc["skipped"] = ordered_json::array();
        for (const auto& s : review.skipped)
            doc["skipped"].push_back(
                {{"comparison_id", s.comparison_id}, {"outcome_id", s.outcome_id}, {"reason", s.reason}});
    }
    return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Review load_review_file(const std::filesystem::path& file) {
    const std::string bytes = read_file(file);
    try {
        if (file.extension() == ".json") return parse_review_json(bytes);
        return parse_review_xml(bytes, file.stem().string());
    } catch (const ParseError& e) {
        throw ParseError(file.filename().string() + ": " + e.what(), e.byte_offset(), e.line());
    } catch (const ValidationError& e) {
        throw ValidationError(file.filename().string() + ": " + e.where(),
                              std::string(e.what()).substr(e.where().empty() ? 0 : e.where().size() + 2));
    }
}

Corpus load_corpus(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError("corpus directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension();
        if (ext == ".xml" || ext == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ConfigError("no reviews found in " + dir.string());

    Corpus corpus;
    for (const auto& f : files) {
        corpus.reviews.push_back(load_review_file(f));
        corpus.sources.push_back(f);
    }
    return corpus;
}

}  // namespace oeval
