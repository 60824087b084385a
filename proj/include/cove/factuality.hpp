#pragma once

// Backend-assisted factuality harness: atomic-fact extraction from a
// response and per-fact support judgment against gold facts or a judge
// backend.

#include "cove/backend.hpp"
#include "cove/demo_bank.hpp"
#include "cove/types.hpp"

#include <string>
#include <vector>

namespace cove {

// Prompts the backend to list atomic declarative statements found in the
// response. The call is recorded in the trace (when given) under the
// execute step tag as an audit entry.
std::vector<std::string> extract_facts(const std::string& response,
                                       Backend& backend, const DemoBank& bank,
                                       PipelineTrace* trace = nullptr,
                                       const DecodingParams& decoding = {});

enum class JudgeMode { ExactNormalized, BackendJudge };

// ExactNormalized: normalized-string membership in gold_facts (paraphrases
// do not match; documented limitation). BackendJudge: yes/no prompt to the
// judge backend; an unparseable reply counts as unsupported plus a warning.
bool judge_fact(const std::string& fact,
                const std::vector<std::string>& gold_facts, JudgeMode mode,
                Backend* judge = nullptr, PipelineTrace* trace = nullptr,
                std::vector<std::string>* warnings = nullptr,
                const DecodingParams& decoding = {});

}  // namespace cove
