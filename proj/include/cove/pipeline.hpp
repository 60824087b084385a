#pragma once

// Orchestrates the four steps — draft, plan verifications, execute them,
// revise — across all execution variants, and emits the result with a
// full step-tagged trace.
//
// Call counts per variant for a single-passage task with a k-question
// plan (longform drafts repeat the plan and final calls per passage):
//   Baseline/ZeroShot/ZeroShotCoT  1
//   Joint                          3        (draft, combined, final)
//   TwoStep                        3 + (k > 0 ? 1 : 0)
//   Factored                       3 + k
//   FactorRevise                   3 + k + f   (f = items with a source fact)
// Rule-templated planning makes no plan call; its questions are built
// mechanically, and TwoStep/Joint execute them in one combined prompt.

#include "cove/backend.hpp"
#include "cove/demo_bank.hpp"
#include "cove/types.hpp"

namespace cove {

PipelineResult run(const Query& query, const PipelineConfig& config,
                   Backend& backend, const BankSet& banks);

}  // namespace cove
