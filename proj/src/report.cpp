#include "cove/report.hpp"

#include "cove/errors.hpp"

#include <cstdio>
#include <sstream>

namespace cove {

namespace {

std::string fixed(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    if (s.size() >= width) return s + "  ";
    return s + std::string(width - s.size(), ' ') + "  ";
}

std::size_t label_width(const std::vector<EvalReport>& rows) {
    std::size_t w = 8;
    for (const auto& r : rows) w = std::max(w, r.system_label.size());
    return w;
}

}  // namespace

std::string render_report_table(const std::vector<EvalReport>& rows) {
    if (rows.empty()) return "(no report rows)\n";
    TaskKind task = rows.front().task_kind;
    for (const auto& r : rows) {
        if (r.task_kind != task) {
            throw Error("report rows mix task kinds");
        }
    }

    std::ostringstream out;
    std::size_t lw = label_width(rows);
    switch (task) {
        case TaskKind::ListQA: {
            out << pad("Method", lw) << pad("Prec.", 6) << pad("Pos.", 6)
                << pad("Neg.", 6) << "\n";
            for (const auto& r : rows) {
                const auto& m = r.list_precision;
                out << pad(r.system_label, lw);
                if (m) {
                    out << pad(fixed(m->precision, 2), 6)
                        << pad(fixed(m->avg_pos, 2), 6)
                        << pad(fixed(m->avg_neg, 2), 6);
                    if (m->no_predictions) out << "(no predictions)";
                } else {
                    out << "(missing)";
                }
                out << "\n";
            }
            break;
        }
        case TaskKind::MultiSpanQA: {
            out << pad("Method", lw) << pad("F1", 6) << pad("Prec.", 6)
                << pad("Rec.", 6) << "\n";
            for (const auto& r : rows) {
                const auto& m = r.span_scores;
                out << pad(r.system_label, lw);
                if (m) {
                    out << pad(fixed(m->f1, 2), 6)
                        << pad(fixed(m->precision, 2), 6)
                        << pad(fixed(m->recall, 2), 6);
                } else {
                    out << "(missing)";
                }
                out << "\n";
            }
            break;
        }
        case TaskKind::LongformBio: {
            bool buckets = false;
            for (const auto& r : rows) {
                if (!r.fact_score_by_bucket.empty()) buckets = true;
            }
            out << pad("Method", lw) << pad("FactScore", 10)
                << pad("Avg. facts", 10);
            if (buckets) {
                out << pad("Head", 6) << pad("Torso", 6) << pad("Tail", 6);
            }
            out << "\n";
            for (const auto& r : rows) {
                const auto& m = r.fact_score;
                out << pad(r.system_label, lw);
                if (m) {
                    out << pad(fixed(m->score, 1), 10)
                        << pad(fixed(m->avg_facts, 1), 10);
                } else {
                    out << pad("(missing)", 10) << pad("", 10);
                }
                if (buckets) {
                    for (RarityBucket b : {RarityBucket::Head, RarityBucket::Torso,
                                           RarityBucket::Tail}) {
                        auto it = r.fact_score_by_bucket.find(b);
                        out << pad(it == r.fact_score_by_bucket.end()
                                       ? "-"
                                       : fixed(it->second.score, 1),
                                   6);
                    }
                }
                out << "\n";
            }
            break;
        }
    }
    return out.str();
}

nlohmann::json report_to_json(const EvalReport& r) {
    nlohmann::json j{{"task_kind", to_string(r.task_kind)},
                     {"system", r.system_label},
                     {"num_queries", r.num_queries},
                     {"config_hash", r.config_hash},
                     {"dataset_hash", r.dataset_hash}};
    if (r.list_precision) {
        j["list_precision"] = {{"precision", r.list_precision->precision},
                               {"avg_pos", r.list_precision->avg_pos},
                               {"avg_neg", r.list_precision->avg_neg},
                               {"no_predictions", r.list_precision->no_predictions}};
    }
    if (r.span_scores) {
        j["span_scores"] = {{"f1", r.span_scores->f1},
                            {"precision", r.span_scores->precision},
                            {"recall", r.span_scores->recall}};
    }
    if (r.fact_score) {
        j["fact_score"] = {{"score", r.fact_score->score},
                           {"avg_facts", r.fact_score->avg_facts},
                           {"num_responses", r.fact_score->num_responses}};
    }
    if (!r.fact_score_by_bucket.empty()) {
        nlohmann::json buckets;
        for (const auto& [bucket, result] : r.fact_score_by_bucket) {
            buckets[std::string(to_string(bucket))] = {
                {"score", result.score},
                {"avg_facts", result.avg_facts},
                {"num_responses", result.num_responses}};
        }
        j["fact_score_by_bucket"] = std::move(buckets);
    }
    return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
    EvalReport r;
    r.task_kind = task_kind_from_string(j.at("task_kind").get<std::string>());
    r.system_label = j.at("system").get<std::string>();
    r.num_queries = j.at("num_queries").get<std::size_t>();
    r.config_hash = j.value("config_hash", "");
    r.dataset_hash = j.value("dataset_hash", "");
    if (j.contains("list_precision")) {
        const auto& m = j.at("list_precision");
        ListPrecisionResult lp;
        lp.precision = m.at("precision").get<double>();
        lp.avg_pos = m.at("avg_pos").get<double>();
        lp.avg_neg = m.at("avg_neg").get<double>();
        lp.no_predictions = m.value("no_predictions", false);
        r.list_precision = lp;
    }
    if (j.contains("span_scores")) {
        const auto& m = j.at("span_scores");
        SpanScores s;
        s.f1 = m.at("f1").get<double>();
        s.precision = m.at("precision").get<double>();
        s.recall = m.at("recall").get<double>();
        r.span_scores = s;
    }
    if (j.contains("fact_score")) {
        const auto& m = j.at("fact_score");
        FactScoreResult f;
        f.score = m.at("score").get<double>();
        f.avg_facts = m.at("avg_facts").get<double>();
        f.num_responses = m.value("num_responses", std::size_t{0});
        r.fact_score = f;
    }
    if (j.contains("fact_score_by_bucket")) {
        for (const auto& [key, value] : j.at("fact_score_by_bucket").items()) {
            FactScoreResult f;
            f.score = value.at("score").get<double>();
            f.avg_facts = value.at("avg_facts").get<double>();
            f.num_responses = value.value("num_responses", std::size_t{0});
            r.fact_score_by_bucket.emplace(rarity_from_string(key), f);
        }
    }
    return r;
}

}  // namespace cove
