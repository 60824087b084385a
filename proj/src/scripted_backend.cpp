#include "cove/scripted_backend.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <regex>
#include <thread>

namespace cove {

std::string_view to_string(MatchKind k) {
    switch (k) {
        case MatchKind::ExactPrompt: return "exact";
        case MatchKind::ContainsSubstring: return "contains";
        case MatchKind::RegexPattern: return "regex";
    }
    return "contains";
}

MatchKind match_kind_from_string(std::string_view s) {
    if (s == "exact") return MatchKind::ExactPrompt;
    if (s == "contains") return MatchKind::ContainsSubstring;
    if (s == "regex") return MatchKind::RegexPattern;
    throw ParseError("unknown matcher: '" + std::string(s) + "'", 0);
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptedRule> rules,
                                 std::string id)
    : rules_(std::move(rules)), id_(std::move(id)) {}

void ScriptedBackend::add_rule(ScriptedRule rule) {
    rules_.push_back(std::move(rule));
}

const ScriptedRule* ScriptedBackend::match(const std::string& prompt) const {
    const ScriptedRule* best = nullptr;
    for (const auto& rule : rules_) {
        bool hit = false;
        switch (rule.matcher) {
            case MatchKind::ExactPrompt:
                hit = prompt == rule.pattern;
                break;
            case MatchKind::ContainsSubstring:
                hit = prompt.find(rule.pattern) != std::string::npos;
                break;
            case MatchKind::RegexPattern:
                hit = std::regex_search(prompt, std::regex(rule.pattern));
                break;
        }
        // Strictly-greater keeps the first declared rule on priority ties.
        if (hit && (best == nullptr || rule.priority > best->priority)) {
            best = &rule;
        }
    }
    return best;
}

Completion ScriptedBackend::complete(const CompletionRequest& request) {
    if (request.prompt.empty()) throw BackendError("empty prompt");
    calls_.fetch_add(1);
    int now = in_flight_.fetch_add(1) + 1;
    int seen = max_in_flight_.load();
    while (now > seen && !max_in_flight_.compare_exchange_weak(seen, now)) {
    }

    std::uint64_t delay = delay_ms_;
    if (jitter_max_ms_ > 0) {
        delay += (fnv1a64(request.prompt) ^ jitter_seed_) % (jitter_max_ms_ + 1);
    }
    if (delay > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }

    const ScriptedRule* rule = match(request.prompt);
    in_flight_.fetch_sub(1);
    if (rule == nullptr) {
        throw NoRuleMatchedError("no scripted rule matches prompt: " +
                                 collapse_ws(request.prompt).substr(0, 120));
    }
    return Completion{rule->completion, delay};
}

void ScriptedBackend::reset_instrumentation() {
    max_in_flight_.store(0);
    calls_.store(0);
}

std::vector<ScriptedRule> load_rules_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open rules file: " + path);
    std::vector<ScriptedRule> rules;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || trim(line).front() == '#') continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad rule: ") + e.what(), lineno);
        }
        ScriptedRule rule;
        rule.matcher = match_kind_from_string(j.value("matcher", "contains"));
        rule.pattern = j.at("pattern").get<std::string>();
        rule.completion = j.at("completion").get<std::string>();
        rule.priority = j.value("priority", 0);
        rules.push_back(std::move(rule));
    }
    return rules;
}

void write_rules_file(const std::string& path,
                      const std::vector<ScriptedRule>& rules) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write rules file: " + path);
    for (const auto& r : rules) {
        nlohmann::json j{{"matcher", to_string(r.matcher)},
                         {"pattern", r.pattern},
                         {"completion", r.completion},
                         {"priority", r.priority}};
        out << j.dump() << '\n';
    }
}

}  // namespace cove
