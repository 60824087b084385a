#include "cove/types.hpp"

#include "cove/errors.hpp"

#include <utility>

namespace cove {

std::string_view to_string(TaskKind k) {
    switch (k) {
        case TaskKind::ListQA: return "list_qa";
        case TaskKind::MultiSpanQA: return "multi_span_qa";
        case TaskKind::LongformBio: return "longform_bio";
    }
    return "list_qa";
}

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::Baseline: return "baseline";
        case Variant::ZeroShot: return "zero_shot";
        case Variant::ZeroShotCoT: return "zero_shot_cot";
        case Variant::Joint: return "joint";
        case Variant::TwoStep: return "two_step";
        case Variant::Factored: return "factored";
        case Variant::FactorRevise: return "factor_revise";
    }
    return "baseline";
}

std::string_view to_string(PlannerStrategy s) {
    switch (s) {
        case PlannerStrategy::OpenGenerated: return "open";
        case PlannerStrategy::YesNoGenerated: return "yes_no";
        case PlannerStrategy::RuleTemplated: return "rule";
    }
    return "open";
}

std::string_view to_string(Step s) {
    switch (s) {
        case Step::BaselineGen: return "baseline_gen";
        case Step::Plan: return "plan";
        case Step::Execute: return "execute";
        case Step::CrossCheck: return "cross_check";
        case Step::FinalGen: return "final_gen";
    }
    return "baseline_gen";
}

std::string_view to_string(FailurePolicy p) {
    switch (p) {
        case FailurePolicy::Abort: return "abort";
        case FailurePolicy::SkipQuestion: return "skip_question";
    }
    return "abort";
}

std::string_view to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Consistent: return "consistent";
        case VerdictStatus::Inconsistent: return "inconsistent";
        case VerdictStatus::PartiallyConsistent: return "partially_consistent";
    }
    return "inconsistent";
}

namespace {
[[noreturn]] void bad_enum(const char* what, std::string_view value) {
    throw ParseError(std::string("unknown ") + what + ": '" +
                         std::string(value) + "'",
                     0);
}
}  // namespace

TaskKind task_kind_from_string(std::string_view s) {
    if (s == "list_qa") return TaskKind::ListQA;
    if (s == "multi_span_qa") return TaskKind::MultiSpanQA;
    if (s == "longform_bio") return TaskKind::LongformBio;
    bad_enum("task kind", s);
}

Variant variant_from_string(std::string_view s) {
    if (s == "baseline") return Variant::Baseline;
    if (s == "zero_shot") return Variant::ZeroShot;
    if (s == "zero_shot_cot") return Variant::ZeroShotCoT;
    if (s == "joint") return Variant::Joint;
    if (s == "two_step") return Variant::TwoStep;
    if (s == "factored") return Variant::Factored;
    if (s == "factor_revise") return Variant::FactorRevise;
    bad_enum("variant", s);
}

PlannerStrategy strategy_from_string(std::string_view s) {
    if (s == "open") return PlannerStrategy::OpenGenerated;
    if (s == "yes_no") return PlannerStrategy::YesNoGenerated;
    if (s == "rule") return PlannerStrategy::RuleTemplated;
    bad_enum("planner strategy", s);
}

Step step_from_string(std::string_view s) {
    if (s == "baseline_gen") return Step::BaselineGen;
    if (s == "plan") return Step::Plan;
    if (s == "execute") return Step::Execute;
    if (s == "cross_check") return Step::CrossCheck;
    if (s == "final_gen") return Step::FinalGen;
    bad_enum("step", s);
}

FailurePolicy failure_policy_from_string(std::string_view s) {
    if (s == "abort") return FailurePolicy::Abort;
    if (s == "skip_question") return FailurePolicy::SkipQuestion;
    bad_enum("failure policy", s);
}

VerdictStatus verdict_status_from_string(std::string_view s) {
    if (s == "consistent") return VerdictStatus::Consistent;
    if (s == "inconsistent") return VerdictStatus::Inconsistent;
    if (s == "partially_consistent") return VerdictStatus::PartiallyConsistent;
    bad_enum("verdict status", s);
}

bool is_degenerate_variant(Variant v) {
    return v == Variant::Baseline || v == Variant::ZeroShot ||
           v == Variant::ZeroShotCoT;
}

std::vector<std::string> validate_config(const PipelineConfig& config) {
    if (config.max_questions < 1) {
        throw InvalidConfigError("max_questions must be >= 1");
    }
    if (config.parallelism < 1) {
        throw InvalidConfigError("parallelism must be >= 1");
    }
    if (config.decoding.temperature < 0.0) {
        throw InvalidConfigError("temperature must be non-negative");
    }
    if (config.decoding.max_tokens < 1) {
        throw InvalidConfigError("max_tokens must be >= 1");
    }

    std::vector<std::string> warnings;
    if (is_degenerate_variant(config.variant)) {
        warnings.push_back("planner_strategy ignored for " +
                           std::string(to_string(config.variant)));
    }
    if (config.planner_strategy == PlannerStrategy::RuleTemplated &&
        !is_degenerate_variant(config.variant)) {
        warnings.push_back(
            "rule-templated planning makes no planner backend call");
    }
    return warnings;
}

CrossCheckVerdict make_consistent(std::string part) {
    return CrossCheckVerdict{VerdictStatus::Consistent, std::move(part)};
}

CrossCheckVerdict make_inconsistent() {
    return CrossCheckVerdict{VerdictStatus::Inconsistent, std::nullopt};
}

CrossCheckVerdict make_partially_consistent(std::string part) {
    return CrossCheckVerdict{VerdictStatus::PartiallyConsistent,
                             std::move(part)};
}

PipelineTrace::PipelineTrace(std::string query_id, PipelineConfig config)
    : query_id_(std::move(query_id)), config_(std::move(config)) {}

PipelineTrace::PipelineTrace(const PipelineTrace& other) {
    std::lock_guard lock(other.mu_);
    query_id_ = other.query_id_;
    config_ = other.config_;
    calls_ = other.calls_;
    warnings_ = other.warnings_;
    next_seq_ = other.next_seq_;
}

PipelineTrace& PipelineTrace::operator=(const PipelineTrace& other) {
    if (this == &other) return *this;
    PipelineTrace copy(other);
    *this = std::move(copy);
    return *this;
}

PipelineTrace::PipelineTrace(PipelineTrace&& other) noexcept {
    std::lock_guard lock(other.mu_);
    query_id_ = std::move(other.query_id_);
    config_ = std::move(other.config_);
    calls_ = std::move(other.calls_);
    warnings_ = std::move(other.warnings_);
    next_seq_ = other.next_seq_;
}

PipelineTrace& PipelineTrace::operator=(PipelineTrace&& other) noexcept {
    if (this == &other) return *this;
    std::scoped_lock lock(mu_, other.mu_);
    query_id_ = std::move(other.query_id_);
    config_ = std::move(other.config_);
    calls_ = std::move(other.calls_);
    warnings_ = std::move(other.warnings_);
    next_seq_ = other.next_seq_;
    return *this;
}

std::uint64_t PipelineTrace::append(Step step, std::string prompt,
                                    std::string completion,
                                    std::string backend_id,
                                    std::uint64_t wall_ms) {
    std::lock_guard lock(mu_);
    CallRecord rec;
    rec.seq = next_seq_++;
    rec.step = step;
    rec.prompt = std::move(prompt);
    rec.completion = std::move(completion);
    rec.backend_id = std::move(backend_id);
    rec.wall_ms = wall_ms;
    calls_.push_back(std::move(rec));
    return calls_.back().seq;
}

void PipelineTrace::append_record(CallRecord record) {
    std::lock_guard lock(mu_);
    if (record.seq >= next_seq_) next_seq_ = record.seq + 1;
    calls_.push_back(std::move(record));
}

void PipelineTrace::warn(std::string message) {
    std::lock_guard lock(mu_);
    warnings_.push_back(std::move(message));
}

std::vector<CallRecord> PipelineTrace::calls() const {
    std::lock_guard lock(mu_);
    return calls_;
}

std::vector<std::string> PipelineTrace::warnings() const {
    std::lock_guard lock(mu_);
    return warnings_;
}

std::size_t PipelineTrace::call_count() const {
    std::lock_guard lock(mu_);
    return calls_.size();
}

bool PipelineTrace::operator==(const PipelineTrace& other) const {
    if (this == &other) return true;
    std::scoped_lock lock(mu_, other.mu_);
    return query_id_ == other.query_id_ && config_ == other.config_ &&
           calls_ == other.calls_ && warnings_ == other.warnings_;
}

bool results_equal(const PipelineResult& a, const PipelineResult& b) {
    return a.baseline_response == b.baseline_response && a.plan == b.plan &&
           a.qa == b.qa && a.verdicts == b.verdicts &&
           a.final_response == b.final_response && a.trace == b.trace;
}

}  // namespace cove
