#include "cove/serde.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <fstream>
#include <sstream>

namespace cove {

json to_json(const DecodingParams& p) {
    return json{{"temperature", p.temperature},
                {"max_tokens", p.max_tokens},
                {"stop_sequences", p.stop_sequences}};
}

DecodingParams decoding_from_json(const json& j) {
    DecodingParams p;
    p.temperature = j.at("temperature").get<double>();
    p.max_tokens = j.at("max_tokens").get<int>();
    p.stop_sequences = j.at("stop_sequences").get<std::vector<std::string>>();
    return p;
}

json to_json(const PipelineConfig& c) {
    return json{{"variant", to_string(c.variant)},
                {"planner_strategy", to_string(c.planner_strategy)},
                {"max_questions", c.max_questions},
                {"decoding", to_json(c.decoding)},
                {"parallelism", c.parallelism},
                {"seed", c.seed},
                {"failure_policy", to_string(c.failure_policy)}};
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    c.variant = variant_from_string(j.at("variant").get<std::string>());
    c.planner_strategy =
        strategy_from_string(j.at("planner_strategy").get<std::string>());
    c.max_questions = j.at("max_questions").get<int>();
    c.decoding = decoding_from_json(j.at("decoding"));
    c.parallelism = j.at("parallelism").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("failure_policy")) {
        c.failure_policy =
            failure_policy_from_string(j.at("failure_policy").get<std::string>());
    }
    return c;
}

json to_json(const Query& q) {
    return json{{"id", q.id},
                {"task_kind", to_string(q.task_kind)},
                {"text", q.text}};
}

Query query_from_json(const json& j) {
    Query q;
    q.id = j.at("id").get<std::string>();
    q.task_kind = task_kind_from_string(j.at("task_kind").get<std::string>());
    q.text = j.at("text").get<std::string>();
    return q;
}

json to_json(const PlannedVerification& p) {
    return json{{"source_fact", p.source_fact},
                {"question", p.question},
                {"passage_index", p.passage_index}};
}

PlannedVerification planned_from_json(const json& j) {
    PlannedVerification p;
    p.source_fact = j.at("source_fact").get<std::string>();
    p.question = j.at("question").get<std::string>();
    p.passage_index = j.value("passage_index", 0);
    return p;
}

json to_json(const VerificationPlan& p) {
    json items = json::array();
    for (const auto& it : p.items) items.push_back(to_json(it));
    return json{{"items", items}, {"truncated", p.truncated}};
}

VerificationPlan plan_from_json(const json& j) {
    VerificationPlan p;
    for (const auto& it : j.at("items")) p.items.push_back(planned_from_json(it));
    p.truncated = j.at("truncated").get<bool>();
    return p;
}

json to_json(const VerificationQA& qa) {
    return json{{"planned", to_json(qa.planned)}, {"answer", qa.answer}};
}

VerificationQA qa_from_json(const json& j) {
    VerificationQA qa;
    qa.planned = planned_from_json(j.at("planned"));
    qa.answer = j.at("answer").get<std::string>();
    return qa;
}

json to_json(const CrossCheckVerdict& v) {
    json j{{"status", to_string(v.status)}};
    if (v.consistent_part) j["consistent_part"] = *v.consistent_part;
    return j;
}

CrossCheckVerdict verdict_from_json(const json& j) {
    CrossCheckVerdict v;
    v.status = verdict_status_from_string(j.at("status").get<std::string>());
    if (j.contains("consistent_part")) {
        v.consistent_part = j.at("consistent_part").get<std::string>();
    }
    return v;
}

json to_json(const CallRecord& r) {
    return json{{"seq", r.seq},
                {"step", to_string(r.step)},
                {"prompt", r.prompt},
                {"completion", r.completion},
                {"backend_id", r.backend_id},
                {"wall_ms", r.wall_ms}};
}

CallRecord call_record_from_json(const json& j) {
    CallRecord r;
    r.seq = j.at("seq").get<std::uint64_t>();
    r.step = step_from_string(j.at("step").get<std::string>());
    r.prompt = j.at("prompt").get<std::string>();
    r.completion = j.at("completion").get<std::string>();
    r.backend_id = j.at("backend_id").get<std::string>();
    r.wall_ms = j.at("wall_ms").get<std::uint64_t>();
    return r;
}

json to_json(const PipelineTrace& t) {
    json calls = json::array();
    for (const auto& c : t.calls()) calls.push_back(to_json(c));
    return json{{"query_id", t.query_id()},
                {"config", to_json(t.config())},
                {"calls", calls},
                {"warnings", t.warnings()}};
}

PipelineTrace trace_from_json(const json& j) {
    PipelineTrace t(j.at("query_id").get<std::string>(),
                    config_from_json(j.at("config")));
    for (const auto& c : j.at("calls")) t.append_record(call_record_from_json(c));
    for (const auto& w : j.at("warnings")) t.warn(w.get<std::string>());
    return t;
}

json to_json(const PipelineResult& r) {
    json qa = json::array();
    for (const auto& item : r.qa) qa.push_back(to_json(item));
    json j{{"baseline_response", r.baseline_response},
           {"plan", to_json(r.plan)},
           {"qa", qa},
           {"final_response", r.final_response},
           {"trace", to_json(r.trace)}};
    if (r.verdicts) {
        json verdicts = json::array();
        for (const auto& v : *r.verdicts) verdicts.push_back(to_json(v));
        j["verdicts"] = verdicts;
    }
    return j;
}

PipelineResult result_from_json(const json& j) {
    PipelineResult r;
    r.baseline_response = j.at("baseline_response").get<std::string>();
    r.plan = plan_from_json(j.at("plan"));
    for (const auto& item : j.at("qa")) r.qa.push_back(qa_from_json(item));
    if (j.contains("verdicts")) {
        std::vector<CrossCheckVerdict> verdicts;
        for (const auto& v : j.at("verdicts")) {
            verdicts.push_back(verdict_from_json(v));
        }
        r.verdicts = std::move(verdicts);
    }
    r.final_response = j.at("final_response").get<std::string>();
    r.trace = trace_from_json(j.at("trace"));
    return r;
}

std::string canonical_dump(const json& j) { return j.dump(); }

std::string config_hash(const PipelineConfig& c) {
    return hex64(fnv1a64(canonical_dump(to_json(c))));
}

std::string encode_run_record(const RunRecord& r) {
    json j{{"query", to_json(r.query)}, {"result", to_json(r.result)}};
    return canonical_dump(j);
}

RunRecord decode_run_record(const std::string& line) {
    json j = json::parse(line);
    RunRecord r;
    r.query = query_from_json(j.at("query"));
    r.result = result_from_json(j.at("result"));
    return r;
}

std::vector<RunRecord> read_results_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open results file: " + path);
    std::vector<RunRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            out.push_back(decode_run_record(line));
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad result record: ") + e.what(),
                             lineno);
        }
    }
    return out;
}

void append_result_line(std::ostream& out, const RunRecord& r) {
    out << encode_run_record(r) << '\n';
}

void write_trace_file(const std::string& path, const PipelineTrace& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write trace file: " + path);
    json header{{"type", "trace"},
                {"query_id", t.query_id()},
                {"config", to_json(t.config())}};
    out << canonical_dump(header) << '\n';
    for (const auto& c : t.calls()) {
        json rec = to_json(c);
        rec["type"] = "call";
        out << canonical_dump(rec) << '\n';
    }
    for (const auto& w : t.warnings()) {
        out << canonical_dump(json{{"type", "warning"}, {"message", w}}) << '\n';
    }
}

PipelineTrace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open trace file: " + path);
    std::string line;
    std::size_t lineno = 0;
    PipelineTrace trace;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad trace record: ") + e.what(),
                             lineno);
        }
        const std::string type = j.value("type", "");
        if (type == "trace") {
            trace = PipelineTrace(j.at("query_id").get<std::string>(),
                                  config_from_json(j.at("config")));
            saw_header = true;
        } else if (type == "call") {
            if (!saw_header) throw ParseError("call before trace header", lineno);
            trace.append_record(call_record_from_json(j));
        } else if (type == "warning") {
            if (!saw_header) {
                throw ParseError("warning before trace header", lineno);
            }
            trace.warn(j.at("message").get<std::string>());
        } else {
            throw ParseError("unknown trace record type: '" + type + "'",
                             lineno);
        }
    }
    if (!saw_header) throw ParseError("missing trace header", 0);
    return trace;
}

}  // namespace cove
