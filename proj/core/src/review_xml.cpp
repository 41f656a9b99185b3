#include <expat.h>

#include <cmath>
#include <memory>
#include <regex>
#include <string>
#include <vector>

#include "oeval/error.hpp"
#include "oeval/review_io.hpp"
#include "text_util.hpp"

namespace oeval {
namespace {

struct XmlNode {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<std::unique_ptr<XmlNode>> children;
    std::string text;

    const std::string* attribute(std::string_view key) const {
        for (const auto& [k, v] : attributes)
            if (k == key) return &v;
        return nullptr;
    }

    const XmlNode* child(std::string_view child_name) const {
        for (const auto& c : children)
            if (c->name == child_name) return c.get();
        return nullptr;
    }
};

class DomBuilder {
public:
    explicit DomBuilder(std::string_view bytes) {
        XML_Parser parser = XML_ParserCreate("UTF-8");
        if (!parser) throw Error("cannot allocate XML parser");
        XML_SetUserData(parser, this);
        XML_SetElementHandler(parser, &DomBuilder::on_start, &DomBuilder::on_end);
        XML_SetCharacterDataHandler(parser, &DomBuilder::on_text);

        const auto status =
            XML_Parse(parser, bytes.data(), static_cast<int>(bytes.size()), /*isFinal=*/1);
        if (status != XML_STATUS_OK) {
            const auto offset = XML_GetCurrentByteIndex(parser);
            std::string message = "malformed XML: ";
            message += XML_ErrorString(XML_GetErrorCode(parser));
            message += " at line " + std::to_string(XML_GetCurrentLineNumber(parser)) + ", column " +
                       std::to_string(XML_GetCurrentColumnNumber(parser)) + " (byte offset " +
                       std::to_string(offset < 0 ? 0 : offset) + ")";
            XML_ParserFree(parser);
            throw ParseError(message, static_cast<std::size_t>(offset < 0 ? 0 : offset));
        }
        XML_ParserFree(parser);
    }

    std::unique_ptr<XmlNode> take_root() { return std::move(root_); }

private:
    static void on_start(void* self_ptr, const XML_Char* name, const XML_Char** attrs) {
        auto* self = static_cast<DomBuilder*>(self_ptr);
        auto node = std::make_unique<XmlNode>();
        node->name = name;
        for (int i = 0; attrs[i]; i += 2) node->attributes.emplace_back(attrs[i], attrs[i + 1]);
        XmlNode* raw = node.get();
        if (self->stack_.empty()) {
            self->root_ = std::move(node);
        } else {
            self->stack_.back()->children.push_back(std::move(node));
        }
        self->stack_.push_back(raw);
    }

    static void on_end(void* self_ptr, const XML_Char*) {
        static_cast<DomBuilder*>(self_ptr)->stack_.pop_back();
    }

    static void on_text(void* self_ptr, const XML_Char* s, int len) {
        auto* self = static_cast<DomBuilder*>(self_ptr);
        if (!self->stack_.empty()) self->stack_.back()->text.append(s, static_cast<std::size_t>(len));
    }

    std::unique_ptr<XmlNode> root_;
    std::vector<XmlNode*> stack_;
};

std::string node_name_text(const XmlNode& node) {
    const XmlNode* name = node.child("NAME");
    return name ? std::string(detail::trim(name->text)) : std::string();
}

std::optional<double> real_attribute(const XmlNode& node, std::string_view key,
                                     const std::string& where) {
    const std::string* raw = node.attribute(key);
    if (!raw) return std::nullopt;
    const auto trimmed = detail::trim(*raw);
    if (trimmed.empty()) return std::nullopt;
    const auto value = detail::parse_double(trimmed);
    if (!value)
        throw ValidationError(where, "attribute " + std::string(key) + "='" + *raw +
                                         "' is not a number");
    return value;
}

double required_real(const XmlNode& node, std::string_view key, const std::string& where) {
    const auto value = real_attribute(node, key, where);
    if (!value) throw ValidationError(where, "missing attribute " + std::string(key));
    return *value;
}

std::int64_t required_count(const XmlNode& node, std::string_view key, const std::string& where) {
    const double value = required_real(node, key, where);
    if (value != std::floor(value))
        throw ValidationError(where, "attribute " + std::string(key) + " is not an integer");
    return static_cast<std::int64_t>(value);
}

std::string row_where(const std::string& outcome_where, const XmlNode& data, std::size_t index) {
    const std::string* sid = data.attribute("STUDY_ID");
    return outcome_where + " / row " + std::to_string(index) + (sid ? " (" + *sid + ")" : "");
}

StudyRow parse_data_row(const XmlNode& data, DataKind kind, const std::string& where) {
    StudyRow row;
    if (const std::string* sid = data.attribute("STUDY_ID")) row.study_id = *sid;
    if (row.study_id.empty()) throw ValidationError(where, "missing STUDY_ID");
    if (kind == DataKind::Dichotomous) {
        DichotomousArms arms{required_count(data, "EVENTS_1", where),
                             required_count(data, "TOTAL_1", where),
                             required_count(data, "EVENTS_2", where),
                             required_count(data, "TOTAL_2", where)};
        if (arms.events_exp > arms.total_exp || arms.events_ctrl > arms.total_ctrl)
            throw ValidationError(where, "events exceed total");
        row.data = arms;
    } else {
        row.data = ContinuousArms{required_count(data, "TOTAL_1", where),
                                  required_real(data, "MEAN_1", where),
                                  required_real(data, "SD_1", where),
                                  required_count(data, "TOTAL_2", where),
                                  required_real(data, "MEAN_2", where),
                                  required_real(data, "SD_2", where)};
    }
    return row;
}

// Returns a reason string when the outcome cannot be represented.
std::optional<std::string> fill_outcome(const XmlNode& node, DataKind kind, Outcome& out,
                                        const std::string& where) {
    const std::string prefix = kind == DataKind::Dichotomous ? "DICH" : "CONT";
    out.data_kind = kind;
    out.name = node_name_text(node);

    const std::string* measure = node.attribute("EFFECT_MEASURE");
    if (!measure) throw ValidationError(where, "missing EFFECT_MEASURE");
    const auto parsed_measure = parse_effect_measure(*measure);
    if (!parsed_measure || !measure_fits_kind(*parsed_measure, kind))
        return "unsupported effect measure " + *measure;
    out.effect_measure = *parsed_measure;

    const std::string* method = node.attribute("METHOD");
    if (!method || *method == "IV") {
        out.pooling = Pooling::InverseVariance;
    } else if (*method == "MH") {
        if (kind != DataKind::Dichotomous) return "Mantel-Haenszel on continuous data";
        out.pooling = Pooling::MantelHaenszel;
    } else {
        return "unsupported method " + *method;
    }
    // RevMan's default for dichotomous data is MH when METHOD is absent.
    if (!method && kind == DataKind::Dichotomous) out.pooling = Pooling::MantelHaenszel;

    const std::string* random = node.attribute("RANDOM");
    out.model = (random && *random == "YES") ? Model::Random : Model::Fixed;

    if (const auto ci = real_attribute(node, "CI_TOTAL", where)) {
        out.ci_level = *ci > 1.0 ? *ci / 100.0 : *ci;
    }

    const std::string* totals = node.attribute("TOTALS");
    const std::string* estimable = node.attribute("ESTIMABLE");
    const bool has_totals = !(totals && *totals != "YES") && !(estimable && *estimable == "NO");
    if (has_totals) {
        out.original_estimate = real_attribute(node, "EFFECT_SIZE", where);
        const auto lo = real_attribute(node, "CI_START", where);
        const auto hi = real_attribute(node, "CI_END", where);
        if (lo && hi) out.original_ci = Interval{*lo, *hi};
    }

    const std::string data_tag = prefix + "_DATA";
    const std::string subgroup_tag = prefix + "_SUBGROUP";
    std::size_t row_index = 0;
    Subgroup direct;
    direct.subgroup_id = out.outcome_id;
    for (const auto& child : node.children) {
        if (child->name == data_tag) {
            direct.rows.push_back(
                parse_data_row(*child, kind, row_where(where, *child, row_index++)));
        } else if (child->name == subgroup_tag) {
            Subgroup sg;
            if (const std::string* id = child->attribute("ID")) sg.subgroup_id = *id;
            sg.name = node_name_text(*child);
            const std::string sg_where = where + " / subgroup " + sg.subgroup_id;
            for (const auto& data : child->children) {
                if (data->name != data_tag) continue;
                sg.rows.push_back(
                    parse_data_row(*data, kind, row_where(sg_where, *data, row_index++)));
            }
            out.subgroups.push_back(std::move(sg));
        }
    }
    if (!direct.rows.empty()) out.subgroups.insert(out.subgroups.begin(), std::move(direct));
    return std::nullopt;
}

std::string review_id_of(const XmlNode& root, std::string_view fallback_id) {
    for (const char* key : {"REVIEW_ID", "CD_NUMBER"}) {
        if (const std::string* v = root.attribute(key); v && !v->empty()) return *v;
    }
    if (const std::string* doi = root.attribute("DOI")) {
        static const std::regex cd_number(R"(CD\d+)");
        std::smatch m;
        if (std::regex_search(*doi, m, cd_number)) return m.str();
    }
    return std::string(fallback_id);
}

void collect_comparisons(const XmlNode& node, Review& review) {
    for (const auto& child : node.children) {
        if (child->name != "COMPARISON") {
            collect_comparisons(*child, review);
            continue;
        }
        Comparison cmp;
        if (const std::string* id = child->attribute("ID")) cmp.comparison_id = *id;
        cmp.name = node_name_text(*child);
        for (const auto& elem : child->children) {
            const std::string& tag = elem->name;
            if (!tag.ends_with("_OUTCOME")) continue;
            Outcome out;
            if (const std::string* id = elem->attribute("ID")) out.outcome_id = *id;
            const std::string where =
                "comparison " + cmp.comparison_id + " / outcome " + out.outcome_id;
            std::optional<std::string> skip_reason;
            if (tag == "DICH_OUTCOME") {
                skip_reason = fill_outcome(*elem, DataKind::Dichotomous, out, where);
            } else if (tag == "CONT_OUTCOME") {
                skip_reason = fill_outcome(*elem, DataKind::Continuous, out, where);
            } else {
                skip_reason = "unsupported outcome type " + tag;
            }
            if (skip_reason) {
                review.skipped.push_back({cmp.comparison_id, out.outcome_id, *skip_reason});
            } else {
                cmp.outcomes.push_back(std::move(out));
            }
        }
        review.comparisons.push_back(std::move(cmp));
    }
}

}  // namespace

Review parse_review_xml(std::string_view bytes, std::string_view fallback_id) {
    DomBuilder builder(bytes);
    auto root = builder.take_root();
    if (!root) throw ParseError("XML document has no root element", 0);

    Review review;
    review.review_id = review_id_of(*root, fallback_id);
    collect_comparisons(*root, review);
    validate(review);
    return review;
}

}  // namespace oeval
