#include "oeval/trec.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "oeval/error.hpp"
#include "text_util.hpp"

namespace oeval {

const TopicJudgments* Qrels::topic(std::string_view topic_id) const {
    auto it = topics.find(topic_id);
    return it == topics.end() ? nullptr : &it->second;
}

std::size_t Qrels::relevant_count(std::string_view topic_id) const {
    const auto* judged = topic(topic_id);
    if (!judged) return 0;
    return static_cast<std::size_t>(
        std::count_if(judged->begin(), judged->end(), [](const auto& kv) { return kv.second > 0; }));
}

bool Qrels::is_relevant(std::string_view topic_id, std::string_view publication_id) const {
    const auto* judged = topic(topic_id);
    if (!judged) return false;
    auto it = judged->find(publication_id);
    return it != judged->end() && it->second > 0;
}

const std::vector<RankedDoc>* RunRanking::topic(std::string_view topic_id) const {
    auto it = topics.find(topic_id);
    return it == topics.end() ? nullptr : &it->second;
}

QrelsParseResult parse_qrels(std::string_view bytes) {
    QrelsParseResult result;
    detail::for_each_line(bytes, [&](std::string_view line, std::size_t line_no) {
        const auto fields = detail::split_ws(line);
        if (fields.empty() || fields.front().starts_with('#')) return;
        if (fields.size() != 4)
            throw ParseError(fmt::format("qrels line {}: expected 4 fields, found {}", line_no,
                                         fields.size()),
                             std::nullopt, line_no);
        const auto grade = detail::parse_int<int>(fields[3]);
        if (!grade || *grade < 0)
            throw ParseError(fmt::format("qrels line {}: grade '{}' is not a non-negative integer",
                                         line_no, fields[3]),
                             std::nullopt, line_no);
        auto& judged = result.qrels.topics[std::string(fields[0])];
        auto [it, inserted] = judged.emplace(std::string(fields[2]), *grade);
        if (!inserted) {
            if (it->second != *grade)
                throw ParseError(fmt::format("qrels line {}: conflicting grade for ({}, {})", line_no,
                                             fields[0], fields[2]),
                                 std::nullopt, line_no);
            result.warnings.push_back(fmt::format("qrels line {}: duplicate judgment for ({}, {})",
                                                  line_no, fields[0], fields[2]));
        }
    });
    return result;
}

void normalize_ranking(std::vector<RankedDoc>& docs) {
    std::sort(docs.begin(), docs.end(), [](const RankedDoc& a, const RankedDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.publication_id < b.publication_id;
    });
    for (std::size_t i = 0; i < docs.size(); ++i) docs[i].rank = static_cast<int>(i + 1);
}

RunParseResult parse_run(std::string_view bytes) {
    RunParseResult result;
    // topic -> publication -> index into that topic's list
    std::map<std::string, std::map<std::string, std::size_t, std::less<>>, std::less<>> seen;

    detail::for_each_line(bytes, [&](std::string_view line, std::size_t line_no) {
        const auto fields = detail::split_ws(line);
        if (fields.empty() || fields.front().starts_with('#')) return;
        if (fields.size() != 6)
            throw ParseError(fmt::format("run line {}: expected 6 fields, found {}", line_no,
                                         fields.size()),
                             std::nullopt, line_no);
        const auto rank = detail::parse_int<long long>(fields[3]);
        if (!rank)
            throw ParseError(fmt::format("run line {}: rank '{}' is not an integer", line_no,
                                         fields[3]),
                             std::nullopt, line_no);
        const auto score = detail::parse_double(fields[4]);
        if (!score)
            throw ParseError(fmt::format("run line {}: score '{}' is not a number", line_no,
                                         fields[4]),
                             std::nullopt, line_no);
        if (result.run.tag.empty()) {
            result.run.tag = std::string(fields[5]);
        } else if (fields[5] != result.run.tag && result.warnings.empty()) {
            result.warnings.push_back(fmt::format("run line {}: tag '{}' differs from '{}'; using the first",
                                                  line_no, fields[5], result.run.tag));
        }

        const std::string topic(fields[0]);
        const std::string pub(fields[2]);
        auto& docs = result.run.topics[topic];
        auto& index = seen[topic];
        if (auto it = index.find(pub); it != index.end()) {
            result.warnings.push_back(
                fmt::format("run line {}: duplicate document {} for topic {}", line_no, pub, topic));
            docs[it->second].score = std::max(docs[it->second].score, *score);
            return;
        }
        index.emplace(pub, docs.size());
        docs.push_back(RankedDoc{pub, static_cast<int>(*rank), *score});
    });

    for (auto& [_, docs] : result.run.topics) normalize_ranking(docs);
    return result;
}

std::string emit_run(const RunRanking& run) {
    std::string out;
    const std::string tag = run.tag.empty() ? "run" : run.tag;
    for (const auto& [topic, docs] : run.topics)
        for (const auto& d : docs)
            out += fmt::format("{} Q0 {} {} {} {}\n", topic, d.publication_id, d.rank, d.score, tag);
    return out;
}

}  // namespace oeval
