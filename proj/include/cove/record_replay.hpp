#pragma once

// Record/replay wrappers: capture every (prompt, completion) pair that
// crosses a backend, then serve them back later with zero live calls.

#include "cove/backend.hpp"
#include "cove/types.hpp"

#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace cove {

struct SessionEntry {
    std::uint64_t seq = 0;
    std::string prompt;
    std::string completion;
    std::string backend_id;
    std::uint64_t wall_ms = 0;
};

// Forwards to the wrapped backend and appends one entry per call.
// Appends are serialized; the wrapped backend may be called concurrently.
class RecordingBackend : public Backend {
public:
    explicit RecordingBackend(Backend& inner);

    std::string id() const override;
    Completion complete(const CompletionRequest& request) override;

    std::vector<SessionEntry> session() const;
    void save(const std::string& path) const;

private:
    Backend& inner_;
    mutable std::mutex mu_;
    std::vector<SessionEntry> session_;
    std::uint64_t next_seq_ = 0;
};

// Serves recorded completions keyed by exact prompt; repeated prompts are
// consumed in recording order. Unknown prompts raise ReplayMismatchError —
// a replay never falls through to a live backend.
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const std::vector<SessionEntry>& session);
    // Builds the session from a recorded pipeline trace.
    explicit ReplayBackend(const PipelineTrace& trace);

    std::string id() const override { return "replay"; }
    Completion complete(const CompletionRequest& request) override;

    std::size_t remaining() const;

private:
    void index(const std::vector<SessionEntry>& session);

    mutable std::mutex mu_;
    std::unordered_map<std::string, std::deque<SessionEntry>> by_prompt_;
    std::size_t remaining_ = 0;
};

std::vector<SessionEntry> load_session_file(const std::string& path);
void write_session_file(const std::string& path,
                        const std::vector<SessionEntry>& session);

}  // namespace cove
