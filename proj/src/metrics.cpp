#include "cove/metrics.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <unordered_map>
#include <unordered_set>

namespace cove {

std::string normalize_entity(const std::string& surface) {
    std::string s = collapse_ws(lower_ascii(surface));
    // Strip to a fixpoint so the result is idempotent even for stacked
    // articles and punctuation ("the the x..").
    bool changed = true;
    while (changed) {
        changed = false;
        for (const char* art : {"the ", "an ", "a "}) {
            std::string_view a(art);
            if (s.size() > a.size() && s.rfind(a, 0) == 0) {
                s = s.substr(a.size());
                changed = true;
            }
        }
        while (!s.empty() &&
               (s.back() == '.' || s.back() == ',' || s.back() == '!' ||
                s.back() == '?' || s.back() == ';' || s.back() == ':' ||
                s.back() == '"' || s.back() == '\'' || s.back() == ' ')) {
            s.pop_back();
            changed = true;
        }
    }
    return s;
}

namespace {

// normalized alias -> gold index, for one judgment.
std::unordered_map<std::string, std::size_t> alias_index(
    const std::vector<GoldEntity>& gold) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t g = 0; g < gold.size(); ++g) {
        index.emplace(normalize_entity(gold[g].name), g);
        for (const auto& alias : gold[g].aliases) {
            index.emplace(normalize_entity(alias), g);
        }
    }
    return index;
}

}  // namespace

ListPrecisionResult micro_precision(const std::vector<ListJudgment>& judgments) {
    long long total_tp = 0;
    long long total_pred = 0;
    long long sum_pos = 0;
    long long sum_neg = 0;

    for (const auto& j : judgments) {
        if (j.gold.empty()) {
            throw EmptyGoldError("judgment '" + j.query_id +
                                 "' has no gold entities");
        }
        auto index = alias_index(j.gold);

        // Dedup by resolved identity: predictions hitting the same gold
        // entity (through any alias) count once, unmatched ones count once
        // per distinct normalized form.
        std::unordered_set<std::string> seen_keys;
        long long tp = 0;
        long long fp = 0;
        for (const auto& raw : j.predicted) {
            std::string norm = normalize_entity(raw);
            if (norm.empty()) continue;
            auto hit = index.find(norm);
            std::string key = hit != index.end()
                                  ? "g:" + std::to_string(hit->second)
                                  : "s:" + norm;
            if (!seen_keys.insert(key).second) continue;
            if (hit != index.end()) {
                ++tp;
            } else {
                ++fp;
            }
        }
        total_tp += tp;
        total_pred += tp + fp;
        sum_pos += tp;
        sum_neg += fp;
    }

    ListPrecisionResult r;
    if (total_pred == 0) {
        r.no_predictions = true;
        r.precision = 0.0;
    } else {
        r.precision = static_cast<double>(total_tp) /
                      static_cast<double>(total_pred);
    }
    if (!judgments.empty()) {
        r.avg_pos = static_cast<double>(sum_pos) /
                    static_cast<double>(judgments.size());
        r.avg_neg = static_cast<double>(sum_neg) /
                    static_cast<double>(judgments.size());
    }
    return r;
}

namespace {

struct SpanCounts {
    long long overlap = 0;
    long long pred = 0;
    long long gold = 0;
};

SpanCounts count_spans(const std::vector<std::string>& pred_spans,
                       const std::vector<std::string>& gold_spans) {
    std::unordered_set<std::string> pred_set;
    for (const auto& p : pred_spans) {
        std::string n = normalize_entity(p);
        if (!n.empty()) pred_set.insert(n);
    }
    std::unordered_set<std::string> gold_set;
    for (const auto& g : gold_spans) {
        std::string n = normalize_entity(g);
        if (!n.empty()) gold_set.insert(n);
    }
    SpanCounts c;
    c.pred = static_cast<long long>(pred_set.size());
    c.gold = static_cast<long long>(gold_set.size());
    for (const auto& p : pred_set) {
        if (gold_set.count(p) != 0) ++c.overlap;
    }
    return c;
}

SpanScores scores_from_counts(const SpanCounts& c) {
    SpanScores s;
    s.precision = c.pred == 0 ? 0.0
                              : static_cast<double>(c.overlap) /
                                    static_cast<double>(c.pred);
    s.recall = c.gold == 0 ? 0.0
                           : static_cast<double>(c.overlap) /
                                 static_cast<double>(c.gold);
    s.f1 = (s.precision + s.recall) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

}  // namespace

SpanScores multispan_f1(const std::vector<std::string>& pred_spans,
                        const std::vector<std::string>& gold_spans) {
    if (gold_spans.empty()) {
        throw EmptyGoldError("multispan_f1 needs non-empty gold spans");
    }
    return scores_from_counts(count_spans(pred_spans, gold_spans));
}

SpanScores multispan_f1_corpus(const std::vector<SpanJudgment>& judgments) {
    SpanCounts total;
    for (const auto& j : judgments) {
        if (j.gold.empty()) {
            throw EmptyGoldError("judgment '" + j.query_id +
                                 "' has no gold spans");
        }
        SpanCounts c = count_spans(j.predicted, j.gold);
        total.overlap += c.overlap;
        total.pred += c.pred;
        total.gold += c.gold;
    }
    return scores_from_counts(total);
}

std::string_view to_string(RarityBucket b) {
    switch (b) {
        case RarityBucket::Head: return "head";
        case RarityBucket::Torso: return "torso";
        case RarityBucket::Tail: return "tail";
    }
    return "head";
}

RarityBucket rarity_from_string(std::string_view s) {
    if (s == "head") return RarityBucket::Head;
    if (s == "torso") return RarityBucket::Torso;
    if (s == "tail") return RarityBucket::Tail;
    throw ParseError("unknown rarity bucket: '" + std::string(s) + "'", 0);
}

FactScoreResult factscore(const std::vector<FactJudgment>& judgments) {
    double score_sum = 0.0;
    std::size_t scored = 0;
    std::size_t fact_total = 0;
    for (const auto& j : judgments) {
        fact_total += j.facts.size();
        if (j.facts.empty()) continue;  // contributes to avg_facts only
        std::size_t supported = 0;
        for (const auto& f : j.facts) {
            if (f.supported) ++supported;
        }
        score_sum += static_cast<double>(supported) /
                     static_cast<double>(j.facts.size());
        ++scored;
    }
    if (scored == 0) {
        throw NoFactsError("every response has zero facts");
    }
    FactScoreResult r;
    r.score = 100.0 * score_sum / static_cast<double>(scored);
    r.avg_facts = static_cast<double>(fact_total) /
                  static_cast<double>(judgments.size());
    r.num_responses = judgments.size();
    return r;
}

std::map<RarityBucket, FactScoreResult> factscore_by_bucket(
    const std::vector<FactJudgment>& judgments) {
    std::map<RarityBucket, std::vector<FactJudgment>> grouped;
    for (const auto& j : judgments) {
        if (j.rarity) grouped[*j.rarity].push_back(j);
    }
    std::map<RarityBucket, FactScoreResult> out;
    for (const auto& [bucket, group] : grouped) {
        out.emplace(bucket, factscore(group));
    }
    return out;
}

}  // namespace cove
