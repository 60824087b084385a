#include "cove/demo_bank.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace cove {

namespace {

constexpr std::string_view kDraftOpen = "[draft]";
constexpr std::string_view kDraftClose = "[/draft]";

// Removes [draft]/[/draft] markers; reports whether any were present.
std::string strip_draft_markers(const std::string& text, bool* had_markers) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t open = text.find(kDraftOpen, pos);
        if (open == std::string::npos) {
            out.append(text, pos, text.size() - pos);
            break;
        }
        *had_markers = true;
        out.append(text, pos, open - pos);
        pos = open + kDraftOpen.size();
        std::size_t close = text.find(kDraftClose, pos);
        if (close == std::string::npos) {
            throw BankFormatError("unterminated [draft] marker");
        }
        out.append(text, pos, close - pos);
        pos = close + kDraftClose.size();
    }
    return out;
}

struct RawRecord {
    std::string context;
    std::string response;
};

}  // namespace

std::string_view to_string(PromptStep s) {
    switch (s) {
        case PromptStep::BaselineGen: return "baseline";
        case PromptStep::Plan: return "plan";
        case PromptStep::JointPlanExecute: return "joint";
        case PromptStep::Execute: return "execute";
        case PromptStep::CrossCheck: return "cross_check";
        case PromptStep::FinalGen: return "final";
        case PromptStep::FactExtract: return "fact_extract";
    }
    return "baseline";
}

PromptStep prompt_step_from_string(std::string_view s) {
    if (s == "baseline") return PromptStep::BaselineGen;
    if (s == "plan") return PromptStep::Plan;
    if (s == "joint") return PromptStep::JointPlanExecute;
    if (s == "execute") return PromptStep::Execute;
    if (s == "cross_check") return PromptStep::CrossCheck;
    if (s == "final") return PromptStep::FinalGen;
    if (s == "fact_extract") return PromptStep::FactExtract;
    throw BankFormatError("unknown bank step: '" + std::string(s) + "'");
}

DemoBank parse_bank(const std::string& content, const std::string& origin) {
    DemoBank bank;
    bool saw_task = false;
    bool saw_step = false;

    std::vector<RawRecord> records;
    RawRecord current;
    std::string* field = nullptr;  // points at the field being accumulated
    bool in_record = false;

    auto flush_record = [&] {
        if (!in_record) return;
        if (trim(current.context).empty() || trim(current.response).empty()) {
            throw BankFormatError(origin + ": record needs non-empty " +
                                  "@context and @response");
        }
        records.push_back(current);
        current = RawRecord{};
        field = nullptr;
    };

    for (const auto& line : split_lines(content)) {
        std::string t = trim(line);
        if (!in_record) {
            if (t.empty() || t.front() == '#') continue;
            if (t.rfind("@task:", 0) == 0) {
                bank.task_kind = task_kind_from_string(trim(t.substr(6)));
                saw_task = true;
                continue;
            }
            if (t.rfind("@step:", 0) == 0) {
                bank.step = prompt_step_from_string(trim(t.substr(6)));
                saw_step = true;
                continue;
            }
            if (t.rfind("@strategy:", 0) == 0) {
                bank.strategy = strategy_from_string(trim(t.substr(10)));
                continue;
            }
            if (t == "---") {
                in_record = true;
                continue;
            }
            throw BankFormatError(origin + ": unexpected header line: " + t);
        }
        if (t == "---") {
            flush_record();
            continue;
        }
        if (t.rfind("@context:", 0) == 0) {
            current.context = trim(line.substr(line.find(':') + 1));
            field = &current.context;
            continue;
        }
        if (t.rfind("@response:", 0) == 0) {
            current.response = trim(line.substr(line.find(':') + 1));
            field = &current.response;
            continue;
        }
        if (field == nullptr) {
            throw BankFormatError(origin + ": content before @context/@response");
        }
        if (!field->empty()) field->push_back('\n');
        field->append(line);
    }
    flush_record();

    if (!saw_task || !saw_step) {
        throw BankFormatError(origin + ": missing @task or @step header");
    }
    if (records.empty()) {
        throw BankFormatError(origin + ": bank needs at least 1 demonstration");
    }

    bool had_draft = false;
    for (const auto& rec : records) {
        Demonstration d;
        d.context = strip_draft_markers(rec.context, &had_draft);
        d.response = strip_draft_markers(rec.response, &had_draft);
        bank.demonstrations.push_back(std::move(d));
    }
    if (bank.step == PromptStep::Execute && had_draft) {
        throw BankFormatError(origin +
                              ": execute bank contains draft-marked material");
    }
    return bank;
}

DemoBank load_bank_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open bank file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_bank(buf.str(), path);
}

void BankSet::add(DemoBank bank) {
    Key key{bank.task_kind, bank.step, bank.strategy};
    if (banks_.count(key) != 0) {
        throw BankFormatError("duplicate bank for (" +
                              std::string(to_string(bank.task_kind)) + ", " +
                              std::string(to_string(bank.step)) + ")");
    }
    banks_.emplace(std::move(key), std::move(bank));
}

BankSet BankSet::load_dir(const std::string& dir) {
    BankSet set;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".bank") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) set.add(load_bank_file(f.string()));
    if (set.size() == 0) throw Error("no .bank files in " + dir);
    return set;
}

const DemoBank& BankSet::get(TaskKind task, PromptStep step) const {
    auto it = banks_.find(Key{task, step, std::nullopt});
    if (it == banks_.end()) {
        throw MissingBankError("no bank for (" +
                               std::string(to_string(task)) + ", " +
                               std::string(to_string(step)) + ")");
    }
    return it->second;
}

const DemoBank& BankSet::get_plan(TaskKind task, PromptStep step,
                                  PlannerStrategy strategy,
                                  bool* fell_back) const {
    if (fell_back != nullptr) *fell_back = false;
    auto it = banks_.find(Key{task, step, strategy});
    if (it != banks_.end()) return it->second;
    it = banks_.find(Key{task, step, PlannerStrategy::OpenGenerated});
    if (it != banks_.end()) {
        if (fell_back != nullptr) {
            *fell_back = strategy != PlannerStrategy::OpenGenerated;
        }
        return it->second;
    }
    throw MissingBankError("no bank for (" + std::string(to_string(task)) +
                           ", " + std::string(to_string(step)) + ", " +
                           std::string(to_string(strategy)) + ")");
}

bool BankSet::has(TaskKind task, PromptStep step,
                  std::optional<PlannerStrategy> strategy) const {
    return banks_.count(Key{task, step, strategy}) != 0;
}

}  // namespace cove
