#pragma once

// Parsers that turn backend completions into structured values. All of
// them are total: garbage input degrades to empty/fallback results plus a
// warning, never an exception.

#include "cove/types.hpp"

#include <string>
#include <vector>

namespace cove {

// Accepts both the line-oriented "fact, question" form and a flat
// comma-separated question list. Dedups exact question matches (first
// occurrence kept) and truncates to max_questions in parse order.
VerificationPlan parse_plan(const std::string& completion,
                            PlannerStrategy strategy, int max_questions,
                            std::vector<std::string>* warnings = nullptr);

// Canonical one-line-per-item rendering; parse_plan inverts it for
// delimiter-free facts and questions.
std::string serialize_plan(const VerificationPlan& plan);

// Joint completions interleave "Q:"/"A:"-cued lines; the final answer may
// be missing. Questions are deduped and truncated like parse_plan.
std::vector<VerificationQA> parse_joint(const std::string& completion,
                                        int max_questions,
                                        std::vector<std::string>* warnings = nullptr);

// Leading-label match, case-insensitive; anything unrecognized counts as
// inconsistent (dubious facts get dropped, not kept).
CrossCheckVerdict parse_crosscheck(const std::string& completion,
                                   std::vector<std::string>* warnings = nullptr);

// Splits on commas and newlines, strips enumeration markers and quotes,
// preserves order, keeps duplicates (dedup is an eval concern).
std::vector<std::string> parse_list_answer(const std::string& completion);

// Pairs a two-step combined completion with its k questions; missing
// answers come back empty.
std::vector<std::string> parse_numbered_answers(const std::string& completion,
                                                std::size_t expected);

// Templated yes/no questions for list tasks: one per entity, deduped.
// Throws NotApplicableError for non-list tasks.
VerificationPlan build_rule_plan(const std::vector<std::string>& entities,
                                 const Query& query,
                                 int max_questions = 1 << 30);

}  // namespace cove
