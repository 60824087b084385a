#pragma once

// JSON encoding of the core types and the line-delimited audit format.
// One UTF-8 JSON object per line; keys sorted, no trailing whitespace.
// Schemas are documented in docs/formats.md.

#include "cove/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace cove {

using json = nlohmann::json;

json to_json(const DecodingParams& p);
json to_json(const PipelineConfig& c);
json to_json(const Query& q);
json to_json(const PlannedVerification& p);
json to_json(const VerificationPlan& p);
json to_json(const VerificationQA& qa);
json to_json(const CrossCheckVerdict& v);
json to_json(const CallRecord& r);
json to_json(const PipelineTrace& t);
json to_json(const PipelineResult& r);

DecodingParams decoding_from_json(const json& j);
PipelineConfig config_from_json(const json& j);
Query query_from_json(const json& j);
PlannedVerification planned_from_json(const json& j);
VerificationPlan plan_from_json(const json& j);
VerificationQA qa_from_json(const json& j);
CrossCheckVerdict verdict_from_json(const json& j);
CallRecord call_record_from_json(const json& j);
PipelineTrace trace_from_json(const json& j);
PipelineResult result_from_json(const json& j);

// One line of a results file: the query that was run plus its result.
struct RunRecord {
    Query query;
    PipelineResult result;
};

std::string encode_run_record(const RunRecord& r);  // single line, no '\n'
RunRecord decode_run_record(const std::string& line);

std::vector<RunRecord> read_results_file(const std::string& path);
void append_result_line(std::ostream& out, const RunRecord& r);

// Trace-only audit files: a header line followed by one line per call and
// one per warning.
void write_trace_file(const std::string& path, const PipelineTrace& t);
PipelineTrace read_trace_file(const std::string& path);

// Canonical dump used everywhere a deterministic byte encoding is needed.
std::string canonical_dump(const json& j);

// Fingerprint of a config (canonical JSON bytes, FNV-1a 64, hex).
std::string config_hash(const PipelineConfig& c);

}  // namespace cove
