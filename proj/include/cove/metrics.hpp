#pragma once

// Task metrics: micro-averaged list precision with positive/negative
// entity counts, multi-span F1, and factuality scoring over atomic facts.

#include "cove/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cove {

// Canonical form used for every entity/span comparison: lowercase, single
// internal spaces, no leading articles, no trailing punctuation.
// Idempotent: normalize(normalize(x)) == normalize(x).
std::string normalize_entity(const std::string& surface);

struct GoldEntity {
    std::string name;
    std::vector<std::string> aliases;  // surface forms mapping to this entity
};

struct ListJudgment {
    std::string query_id;
    std::vector<std::string> predicted;  // raw model output, order preserved
    std::vector<GoldEntity> gold;        // non-empty for scoring
};

struct ListPrecisionResult {
    double precision = 0.0;
    double avg_pos = 0.0;
    double avg_neg = 0.0;
    bool no_predictions = false;  // flagged when nothing was predicted at all
};

// Micro-averaged: total true positives over total (deduplicated)
// predictions across all queries. Predictions are normalized,
// alias-resolved, and deduplicated per query before counting.
ListPrecisionResult micro_precision(const std::vector<ListJudgment>& judgments);

struct SpanScores {
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

// Exact-match micro counting over normalized spans.
SpanScores multispan_f1(const std::vector<std::string>& pred_spans,
                        const std::vector<std::string>& gold_spans);

struct SpanJudgment {
    std::string query_id;
    std::vector<std::string> predicted;
    std::vector<std::string> gold;
};

// Corpus-level aggregation sums numerators and denominators across
// questions before dividing.
SpanScores multispan_f1_corpus(const std::vector<SpanJudgment>& judgments);

enum class RarityBucket { Head, Torso, Tail };

std::string_view to_string(RarityBucket b);
RarityBucket rarity_from_string(std::string_view s);

struct FactCheck {
    std::string text;
    bool supported = false;
};

struct FactJudgment {
    std::string response_id;
    std::vector<FactCheck> facts;  // may be empty; see factscore()
    std::optional<RarityBucket> rarity;
};

struct FactScoreResult {
    double score = 0.0;      // percentage: mean supported fraction over
                             // responses that contributed >= 1 fact
    double avg_facts = 0.0;  // mean fact count over ALL responses
    std::size_t num_responses = 0;
};

// Throws NoFactsError when every response has zero facts.
FactScoreResult factscore(const std::vector<FactJudgment>& judgments);

// Per-bucket breakdown; judgments without a bucket label are skipped.
std::map<RarityBucket, FactScoreResult> factscore_by_bucket(
    const std::vector<FactJudgment>& judgments);

}  // namespace cove
