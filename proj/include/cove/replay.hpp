#pragma once

// Re-executes a recorded run against its recorded completions and checks
// that every regenerated prompt is byte-identical to the recording.

#include "cove/backend.hpp"
#include "cove/demo_bank.hpp"
#include "cove/record_replay.hpp"
#include "cove/serde.hpp"

#include <mutex>
#include <string>
#include <vector>

namespace cove {

// Serves a recorded session strictly in sequence order, flagging prompt
// mismatches instead of failing, so a diverged run can still finish and be
// diffed. Calls past the end of the recording go to the fallback when one
// is set (never during a healthy replay) or raise ReplayMismatchError.
class StrictReplayBackend : public Backend {
public:
    explicit StrictReplayBackend(std::vector<SessionEntry> session,
                                 Backend* fallback = nullptr);

    std::string id() const override { return "replay"; }
    Completion complete(const CompletionRequest& request) override;

    std::vector<std::string> divergences() const;
    std::size_t served() const;
    std::size_t fallback_calls() const;

private:
    mutable std::mutex mu_;
    std::vector<SessionEntry> session_;
    std::size_t next_ = 0;
    std::vector<std::string> divergences_;
    Backend* fallback_;
    std::size_t fallback_calls_ = 0;
};

struct ReplayReport {
    bool ok = false;
    std::vector<std::string> divergences;
};

// Replays one recorded run. `forbidden_live`, when given, is wired as the
// overflow fallback; a healthy replay must never touch it, which tests
// assert with a panicking stub.
ReplayReport replay_record(const RunRecord& record, const BankSet& banks,
                           Backend* forbidden_live = nullptr);

}  // namespace cove
