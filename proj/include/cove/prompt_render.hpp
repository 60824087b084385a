#pragma once

// Renders every prompt in the pipeline from demonstration banks.
//
// The per-variant context-visibility rules live here by construction:
// execute renders accept only the question, never the draft, so a
// factored run cannot leak the baseline into verification prompts.
// All renders are pure: same inputs, identical bytes.

#include "cove/demo_bank.hpp"
#include "cove/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cove {

// Returned by render_plan under the rule-templated strategy: no backend
// call is implied; the pipeline builds the questions mechanically.
inline constexpr std::string_view kRulePlanSentinel =
    "<rule-templated-plan:no-backend-call>";

inline constexpr std::string_view kCotSuffix = "Let's think step by step.";
inline constexpr std::string_view kListOnlySuffix =
    "List only the answers separated by a comma";

// The cue that opens each demonstration frame for a step; tests count
// these to check demo conservation.
std::string_view frame_cue(PromptStep step);

// Few-shot draft prompt: demonstrations in the Q/A frame, then the query,
// ending at the answer cue. An empty bank degenerates to the bare query.
std::string render_baseline(const Query& query, const DemoBank& bank);

// Bare-query prompt for the instruction-tuned baselines. List tasks end
// with the comma-list instruction.
std::string render_zero_shot(const Query& query, bool chain_of_thought);

// Conditions on the query and the draft passage. Rule-templated strategy
// returns kRulePlanSentinel instead of a prompt.
std::string render_plan(const Query& query, const std::string& draft_or_passage,
                        PlannerStrategy strategy, const DemoBank& bank);

// Combined plan-and-answer prompt for the joint variant.
std::string render_joint(const Query& query, const std::string& draft,
                         const DemoBank& bank);

// One question, nothing else: no draft, no sibling questions.
std::string render_execute(const std::string& question, const DemoBank& bank);

// One prompt listing all questions (two-step variant); still no draft.
std::string render_execute_2step(const std::vector<std::string>& questions,
                                 const DemoBank& bank);

// Juxtaposes an original fact with its verification QA "from another
// source" for the explicit consistency check.
std::string render_crosscheck(const std::string& original_fact,
                              const VerificationQA& qa, const DemoBank& bank);

// Revision prompt. Without verdicts the context is the draft passage plus
// all QA pairs; with verdicts the inconsistent facts are dropped and the
// consistent parts stand in for the draft.
std::string render_final(
    const Query& query, const std::string& baseline_passage,
    const std::vector<VerificationQA>& qa,
    const std::optional<std::vector<CrossCheckVerdict>>& verdicts,
    const DemoBank& bank);

// Atomic-fact extraction prompt for the factuality harness.
std::string render_fact_extract(const std::string& response,
                                const DemoBank& bank);

}  // namespace cove
