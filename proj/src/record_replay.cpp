#include "cove/record_replay.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <json.hpp>

#include <fstream>

namespace cove {

RecordingBackend::RecordingBackend(Backend& inner) : inner_(inner) {}

std::string RecordingBackend::id() const { return inner_.id(); }

Completion RecordingBackend::complete(const CompletionRequest& request) {
    Completion c = inner_.complete(request);
    std::lock_guard lock(mu_);
    SessionEntry e;
    e.seq = next_seq_++;
    e.prompt = request.prompt;
    e.completion = c.text;
    e.backend_id = inner_.id();
    e.wall_ms = c.wall_ms;
    session_.push_back(std::move(e));
    return c;
}

std::vector<SessionEntry> RecordingBackend::session() const {
    std::lock_guard lock(mu_);
    return session_;
}

void RecordingBackend::save(const std::string& path) const {
    write_session_file(path, session());
}

ReplayBackend::ReplayBackend(const std::vector<SessionEntry>& session) {
    index(session);
}

ReplayBackend::ReplayBackend(const PipelineTrace& trace) {
    std::vector<SessionEntry> session;
    for (const auto& call : trace.calls()) {
        SessionEntry e;
        e.seq = call.seq;
        e.prompt = call.prompt;
        e.completion = call.completion;
        e.backend_id = call.backend_id;
        e.wall_ms = call.wall_ms;
        session.push_back(std::move(e));
    }
    index(session);
}

void ReplayBackend::index(const std::vector<SessionEntry>& session) {
    for (const auto& e : session) {
        by_prompt_[e.prompt].push_back(e);
        ++remaining_;
    }
}

Completion ReplayBackend::complete(const CompletionRequest& request) {
    std::lock_guard lock(mu_);
    auto it = by_prompt_.find(request.prompt);
    if (it == by_prompt_.end() || it->second.empty()) {
        throw ReplayMismatchError(
            "prompt not in recorded session: " +
            collapse_ws(request.prompt).substr(0, 120));
    }
    SessionEntry e = it->second.front();
    it->second.pop_front();
    --remaining_;
    return Completion{e.completion, e.wall_ms};
}

std::size_t ReplayBackend::remaining() const {
    std::lock_guard lock(mu_);
    return remaining_;
}

std::vector<SessionEntry> load_session_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open session file: " + path);
    std::vector<SessionEntry> session;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad session entry: ") + e.what(),
                             lineno);
        }
        SessionEntry e;
        e.seq = j.at("seq").get<std::uint64_t>();
        e.prompt = j.at("prompt").get<std::string>();
        e.completion = j.at("completion").get<std::string>();
        e.backend_id = j.at("backend_id").get<std::string>();
        e.wall_ms = j.at("wall_ms").get<std::uint64_t>();
        session.push_back(std::move(e));
    }
    return session;
}

void write_session_file(const std::string& path,
                        const std::vector<SessionEntry>& session) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write session file: " + path);
    for (const auto& e : session) {
        nlohmann::json j{{"seq", e.seq},
                         {"prompt", e.prompt},
                         {"completion", e.completion},
                         {"backend_id", e.backend_id},
                         {"wall_ms", e.wall_ms}};
        out << j.dump() << '\n';
    }
}

}  // namespace cove
