#include "cove/replay.hpp"

#include "cove/errors.hpp"
#include "cove/pipeline.hpp"

namespace cove {

StrictReplayBackend::StrictReplayBackend(std::vector<SessionEntry> session,
                                         Backend* fallback)
    : session_(std::move(session)), fallback_(fallback) {}

Completion StrictReplayBackend::complete(const CompletionRequest& request) {
    std::lock_guard lock(mu_);
    if (next_ >= session_.size()) {
        if (fallback_ != nullptr) {
            ++fallback_calls_;
            return fallback_->complete(request);
        }
        throw ReplayMismatchError("recording exhausted at call " +
                                  std::to_string(next_));
    }
    const SessionEntry& entry = session_[next_++];
    if (entry.prompt != request.prompt) {
        divergences_.push_back("prompt divergence at seq " +
                               std::to_string(entry.seq));
    }
    return Completion{entry.completion, entry.wall_ms};
}

std::vector<std::string> StrictReplayBackend::divergences() const {
    std::lock_guard lock(mu_);
    return divergences_;
}

std::size_t StrictReplayBackend::served() const {
    std::lock_guard lock(mu_);
    return next_;
}

std::size_t StrictReplayBackend::fallback_calls() const {
    std::lock_guard lock(mu_);
    return fallback_calls_;
}

ReplayReport replay_record(const RunRecord& record, const BankSet& banks,
                           Backend* forbidden_live) {
    ReplayReport report;

    std::vector<SessionEntry> session;
    for (const auto& call : record.result.trace.calls()) {
        SessionEntry e;
        e.seq = call.seq;
        e.prompt = call.prompt;
        e.completion = call.completion;
        e.backend_id = call.backend_id;
        e.wall_ms = call.wall_ms;
        session.push_back(std::move(e));
    }
    std::size_t recorded_calls = session.size();

    // Sequential re-execution arrives in recorded append order; the
    // recorded parallelism is irrelevant to prompt bytes.
    PipelineConfig config = record.result.trace.config();
    config.parallelism = 1;

    StrictReplayBackend backend(std::move(session), forbidden_live);
    try {
        run(record.query, config, backend, banks);
    } catch (const std::exception& e) {
        report.divergences.push_back(std::string("replay aborted: ") + e.what());
    }

    for (auto& d : backend.divergences()) report.divergences.push_back(d);
    if (backend.served() != recorded_calls) {
        report.divergences.push_back(
            "call count mismatch: recorded " + std::to_string(recorded_calls) +
            ", replay used " + std::to_string(backend.served()));
    }
    if (backend.fallback_calls() != 0) {
        report.divergences.push_back("replay touched the live fallback " +
                                     std::to_string(backend.fallback_calls()) +
                                     " times");
    }
    report.ok = report.divergences.empty();
    return report;
}

}  // namespace cove
