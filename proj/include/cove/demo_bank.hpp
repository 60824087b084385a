#pragma once

// Few-shot demonstration banks, one per (task, step[, strategy]).
//
// File format (UTF-8): header lines `@task:` / `@step:` (and `@strategy:`
// for plan and joint banks), then records separated by a line `---` with
// `@context:` / `@response:` fields. Example-draft material inside a bank
// is wrapped in [draft]...[/draft] markers; the loader strips the markers
// and rejects any draft-marked material in execute banks.

#include "cove/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cove {

// Which prompt a bank feeds. FactExtract backs the factuality harness's
// atomic-fact extraction prompt.
enum class PromptStep {
    BaselineGen,
    Plan,
    JointPlanExecute,
    Execute,
    CrossCheck,
    FinalGen,
    FactExtract,
};

std::string_view to_string(PromptStep s);
PromptStep prompt_step_from_string(std::string_view s);

struct Demonstration {
    std::string context;
    std::string response;
};

struct DemoBank {
    TaskKind task_kind = TaskKind::ListQA;
    PromptStep step = PromptStep::BaselineGen;
    // Plan/Joint banks are strategy-specific; nullopt elsewhere.
    std::optional<PlannerStrategy> strategy;
    std::vector<Demonstration> demonstrations;
};

// Parses one bank file. Throws BankFormatError on structural problems,
// zero demonstrations, or draft-marked material in an execute bank.
DemoBank parse_bank(const std::string& content, const std::string& origin);
DemoBank load_bank_file(const std::string& path);

// Loaded banks for a run, keyed by (task, step, strategy). Plan lookups
// fall back from the requested strategy to the open-question bank.
class BankSet {
public:
    void add(DemoBank bank);
    // Loads every *.bank file under dir (non-recursive).
    static BankSet load_dir(const std::string& dir);

    // Throws MissingBankError when absent.
    const DemoBank& get(TaskKind task, PromptStep step) const;
    // fell_back, when given, is set if the open-strategy bank was used in
    // place of the requested one.
    const DemoBank& get_plan(TaskKind task, PromptStep step,
                             PlannerStrategy strategy,
                             bool* fell_back = nullptr) const;

    bool has(TaskKind task, PromptStep step,
             std::optional<PlannerStrategy> strategy = std::nullopt) const;
    std::size_t size() const { return banks_.size(); }

private:
    using Key = std::tuple<TaskKind, PromptStep, std::optional<PlannerStrategy>>;
    std::map<Key, DemoBank> banks_;
};

}  // namespace cove
