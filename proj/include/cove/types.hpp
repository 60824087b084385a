#pragma once

// Core domain types shared by every module: queries, pipeline
// configuration, plans, verdicts, and the call trace.

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cove {

enum class TaskKind { ListQA, MultiSpanQA, LongformBio };

enum class Variant {
    Baseline,
    ZeroShot,
    ZeroShotCoT,
    Joint,
    TwoStep,
    Factored,
    FactorRevise,
};

enum class PlannerStrategy { OpenGenerated, YesNoGenerated, RuleTemplated };

// Stage tag stored on every trace record.
enum class Step { BaselineGen, Plan, Execute, CrossCheck, FinalGen };

// What to do when a backend call fails mid-plan.
enum class FailurePolicy { Abort, SkipQuestion };

std::string_view to_string(TaskKind k);
std::string_view to_string(Variant v);
std::string_view to_string(PlannerStrategy s);
std::string_view to_string(Step s);
std::string_view to_string(FailurePolicy p);

TaskKind task_kind_from_string(std::string_view s);
Variant variant_from_string(std::string_view s);
PlannerStrategy strategy_from_string(std::string_view s);
Step step_from_string(std::string_view s);
FailurePolicy failure_policy_from_string(std::string_view s);

struct Query {
    std::string text;
    TaskKind task_kind = TaskKind::ListQA;
    std::string id;

    bool operator==(const Query&) const = default;
};

struct DecodingParams {
    double temperature = 0.0;  // greedy by default
    int max_tokens = 512;
    std::vector<std::string> stop_sequences;

    bool operator==(const DecodingParams&) const = default;
};

struct PipelineConfig {
    Variant variant = Variant::Factored;
    PlannerStrategy planner_strategy = PlannerStrategy::OpenGenerated;
    int max_questions = 10;
    DecodingParams decoding;
    int parallelism = 1;
    std::uint64_t seed = 0;  // mock tie-breaking only; live backends ignore it
    FailurePolicy failure_policy = FailurePolicy::Abort;

    bool operator==(const PipelineConfig&) const = default;
};

// True for Baseline/ZeroShot/ZeroShotCoT, which skip steps 2-4.
bool is_degenerate_variant(Variant v);

// Returns human-readable warnings for ignored-field combinations; throws
// InvalidConfigError on hard violations (max_questions < 1, parallelism < 1,
// negative temperature).
std::vector<std::string> validate_config(const PipelineConfig& config);

struct PlannedVerification {
    std::string source_fact;  // claim from the draft; may be empty (rule plans)
    std::string question;
    int passage_index = 0;  // which draft passage planned it (longform)

    bool operator==(const PlannedVerification&) const = default;
};

struct VerificationPlan {
    std::vector<PlannedVerification> items;
    bool truncated = false;  // raw parse exceeded max_questions

    bool operator==(const VerificationPlan&) const = default;
};

struct VerificationQA {
    PlannedVerification planned;
    std::string answer;  // verbatim completion, no post-editing

    bool operator==(const VerificationQA&) const = default;
};

enum class VerdictStatus { Consistent, Inconsistent, PartiallyConsistent };

std::string_view to_string(VerdictStatus s);
VerdictStatus verdict_status_from_string(std::string_view s);

struct CrossCheckVerdict {
    VerdictStatus status = VerdictStatus::Inconsistent;
    // Present iff status is Consistent or PartiallyConsistent.
    std::optional<std::string> consistent_part;

    bool operator==(const CrossCheckVerdict&) const = default;
};

CrossCheckVerdict make_consistent(std::string part);
CrossCheckVerdict make_inconsistent();
CrossCheckVerdict make_partially_consistent(std::string part);

struct CallRecord {
    std::uint64_t seq = 0;
    Step step = Step::BaselineGen;
    std::string prompt;      // byte-for-byte as sent
    std::string completion;  // byte-for-byte as received
    std::string backend_id;
    std::uint64_t wall_ms = 0;

    bool operator==(const CallRecord&) const = default;
};

// Append-only record of every backend call in a run. Appends may come from
// concurrent stages and are serialized internally; sequence numbers increase
// monotonically in issue order.
class PipelineTrace {
public:
    PipelineTrace() = default;
    PipelineTrace(std::string query_id, PipelineConfig config);

    PipelineTrace(const PipelineTrace& other);
    PipelineTrace& operator=(const PipelineTrace& other);
    PipelineTrace(PipelineTrace&& other) noexcept;
    PipelineTrace& operator=(PipelineTrace&& other) noexcept;

    std::uint64_t append(Step step, std::string prompt, std::string completion,
                         std::string backend_id, std::uint64_t wall_ms);
    // Re-inserts a fully formed record (deserialization path). The next
    // sequence number advances past it.
    void append_record(CallRecord record);
    void warn(std::string message);

    const std::string& query_id() const { return query_id_; }
    const PipelineConfig& config() const { return config_; }
    // Snapshot copies: safe to call while another thread appends.
    std::vector<CallRecord> calls() const;
    std::vector<std::string> warnings() const;
    std::size_t call_count() const;

    bool operator==(const PipelineTrace& other) const;

private:
    mutable std::mutex mu_;
    std::string query_id_;
    PipelineConfig config_;
    std::vector<CallRecord> calls_;
    std::vector<std::string> warnings_;
    std::uint64_t next_seq_ = 0;
};

struct PipelineResult {
    std::string baseline_response;
    VerificationPlan plan;
    std::vector<VerificationQA> qa;
    // Present iff variant is FactorRevise; aligned index-wise with qa.
    std::optional<std::vector<CrossCheckVerdict>> verdicts;
    std::string final_response;
    PipelineTrace trace;
};

bool results_equal(const PipelineResult& a, const PipelineResult& b);

}  // namespace cove
