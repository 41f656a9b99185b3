#pragma once

// TREC-style relevance judgments and run files.
//
//   qrels: <topic> 0 <publication_id> <grade>
//   run:   <topic> Q0 <publication_id> <rank> <score> <tag>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace oeval {

using TopicJudgments = std::map<std::string, int, std::less<>>;

struct Qrels {
    std::map<std::string, TopicJudgments, std::less<>> topics;

    const TopicJudgments* topic(std::string_view topic_id) const;
    std::size_t relevant_count(std::string_view topic_id) const;
    bool is_relevant(std::string_view topic_id, std::string_view publication_id) const;
};

struct RankedDoc {
    std::string publication_id;
    int rank = 0;
    double score = 0.0;
};

struct RunRanking {
    std::string tag;
    // Sorted by ascending rank; ranks are exactly 1..n.
    std::map<std::string, std::vector<RankedDoc>, std::less<>> topics;

    const std::vector<RankedDoc>* topic(std::string_view topic_id) const;
};

struct QrelsParseResult {
    Qrels qrels;
    std::vector<std::string> warnings;
};

struct RunParseResult {
    RunRanking run;
    std::vector<std::string> warnings;
};

QrelsParseResult parse_qrels(std::string_view bytes);

// Ranks in the file are informational only: every topic is re-ranked 1..n by
// descending score, ties broken by ascending publication_id. A publication
// listed twice for one topic keeps its highest score.
RunParseResult parse_run(std::string_view bytes);

// Re-ranks `docs` in place by (descending score, ascending publication_id).
void normalize_ranking(std::vector<RankedDoc>& docs);

// Serializes a run in the format parse_run() reads.
std::string emit_run(const RunRanking& run);

}  // namespace oeval
