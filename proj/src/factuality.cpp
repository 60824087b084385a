#include "cove/factuality.hpp"

#include "cove/errors.hpp"
#include "cove/metrics.hpp"
#include "cove/prompt_render.hpp"
#include "cove/text_util.hpp"

namespace cove {

std::vector<std::string> extract_facts(const std::string& response,
                                       Backend& backend, const DemoBank& bank,
                                       PipelineTrace* trace,
                                       const DecodingParams& decoding) {
    if (trim(response).empty()) {
        throw EmptyResponseError("cannot extract facts from empty response");
    }
    std::string prompt = render_fact_extract(response, bank);
    Completion c = backend.complete({prompt, decoding});
    if (trace != nullptr) {
        trace->append(Step::Execute, prompt, c.text, backend.id(), c.wall_ms);
    }

    std::vector<std::string> facts;
    for (const auto& raw_line : split_lines(c.text)) {
        std::string line = trim(raw_line);
        if (line.empty()) continue;
        // drop enumeration markers, keep the statement
        std::size_t i = 0;
        while (i < line.size() &&
               std::isdigit(static_cast<unsigned char>(line[i])) != 0) {
            ++i;
        }
        if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) {
            line = trim(line.substr(i + 1));
        } else if (!line.empty() && (line[0] == '-' || line[0] == '*')) {
            line = trim(line.substr(1));
        }
        if (!line.empty()) facts.push_back(std::move(line));
    }
    return facts;
}

bool judge_fact(const std::string& fact,
                const std::vector<std::string>& gold_facts, JudgeMode mode,
                Backend* judge, PipelineTrace* trace,
                std::vector<std::string>* warnings,
                const DecodingParams& decoding) {
    if (mode == JudgeMode::ExactNormalized) {
        if (gold_facts.empty()) {
            throw EmptyGoldError("exact judging needs non-empty gold facts");
        }
        std::string n = normalize_entity(fact);
        for (const auto& g : gold_facts) {
            if (normalize_entity(g) == n) return true;
        }
        return false;
    }

    if (judge == nullptr) {
        throw InvalidConfigError("backend judging needs a judge backend");
    }
    std::string prompt =
        "Is the following statement factually correct? Answer yes or no.\n"
        "Statement: " +
        trim(fact) + "\nAnswer:";
    Completion c = judge->complete({prompt, decoding});
    if (trace != nullptr) {
        trace->append(Step::Execute, prompt, c.text, judge->id(), c.wall_ms);
    }
    std::string reply = trim(lower_ascii(c.text));
    if (starts_with_ci(reply, "yes")) return true;
    if (starts_with_ci(reply, "no")) return false;
    if (warnings != nullptr) {
        warnings->push_back("unparseable judge reply for '" + fact +
                            "'; counting as unsupported");
    }
    return false;
}

}  // namespace cove
