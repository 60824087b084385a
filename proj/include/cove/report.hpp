#pragma once

// Metric reporting: one row per system, rendered as an aligned plain-text
// table per task plus a structured JSON file for machine diffing.

#include "cove/metrics.hpp"
#include "cove/types.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cove {

struct EvalReport {
    TaskKind task_kind = TaskKind::ListQA;
    std::string system_label;  // typically the variant name
    std::size_t num_queries = 0;

    std::optional<ListPrecisionResult> list_precision;
    std::optional<SpanScores> span_scores;
    std::optional<FactScoreResult> fact_score;
    std::map<RarityBucket, FactScoreResult> fact_score_by_bucket;

    std::string config_hash;
    std::string dataset_hash;
};

// All rows must share a task kind; columns follow the task's layout
// (Prec./Pos./Neg., F1/Prec./Rec., or FactScore/Avg. facts with optional
// Head/Torso/Tail columns).
std::string render_report_table(const std::vector<EvalReport>& rows);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

}  // namespace cove
