#pragma once

// Deterministic stand-in completion provider: maps prompt patterns to
// canned outputs so end-to-end runs can be asserted exactly.

#include "cove/backend.hpp"

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

namespace cove {

enum class MatchKind { ExactPrompt, ContainsSubstring, RegexPattern };

std::string_view to_string(MatchKind k);
MatchKind match_kind_from_string(std::string_view s);

struct ScriptedRule {
    MatchKind matcher = MatchKind::ContainsSubstring;
    std::string pattern;
    std::string completion;
    int priority = 0;  // highest wins; ties broken by declaration order
};

class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::vector<ScriptedRule> rules = {},
                             std::string id = "mock");

    void add_rule(ScriptedRule rule);

    // Fixed per-call sleep; the reported wall_ms equals the slept amount.
    void set_delay_ms(std::uint64_t ms) { delay_ms_ = ms; }
    // Adds a per-prompt pseudo-random delay in [0, max_ms], derived from
    // hash(prompt) and the seed so a given (seed, prompt) always sleeps the
    // same amount regardless of scheduling.
    void set_delay_jitter(std::uint64_t max_ms, std::uint64_t seed) {
        jitter_max_ms_ = max_ms;
        jitter_seed_ = seed;
    }

    std::string id() const override { return id_; }
    Completion complete(const CompletionRequest& request) override;

    // Concurrency instrumentation.
    int max_in_flight() const { return max_in_flight_.load(); }
    std::uint64_t call_count() const { return calls_.load(); }
    void reset_instrumentation();

private:
    const ScriptedRule* match(const std::string& prompt) const;

    std::vector<ScriptedRule> rules_;
    std::string id_;
    std::uint64_t delay_ms_ = 0;
    std::uint64_t jitter_max_ms_ = 0;
    std::uint64_t jitter_seed_ = 0;
    std::atomic<int> in_flight_{0};
    std::atomic<int> max_in_flight_{0};
    std::atomic<std::uint64_t> calls_{0};
};

// Rule files: one JSON object per line with keys matcher/pattern/
// completion/priority (see docs/formats.md).
std::vector<ScriptedRule> load_rules_file(const std::string& path);
void write_rules_file(const std::string& path,
                      const std::vector<ScriptedRule>& rules);

}  // namespace cove
