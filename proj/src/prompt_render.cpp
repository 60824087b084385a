#include "cove/prompt_render.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <sstream>

namespace cove {

namespace {

void require_bank(const DemoBank& bank, TaskKind task, PromptStep step) {
    if (bank.step != step) {
        throw MissingBankError("bank step is " +
                               std::string(to_string(bank.step)) +
                               ", expected " + std::string(to_string(step)));
    }
    if (bank.task_kind != task) {
        throw MissingBankError("bank task is " +
                               std::string(to_string(bank.task_kind)) +
                               ", expected " + std::string(to_string(task)));
    }
}

std::string qa_block(const std::string& question, const std::string& answer) {
    return "Q: " + question + "\nA: " + answer;
}

// Demos in the Context/Response frame, then the final frame ending at
// "Response:".
std::string context_frame(const DemoBank& bank, const std::string& final_context) {
    std::ostringstream out;
    for (const auto& d : bank.demonstrations) {
        out << "Context: " << d.context << "\nResponse:\n"
            << d.response << "\n\n";
    }
    out << "Context: " << final_context << "\nResponse:";
    return out.str();
}

}  // namespace

std::string_view frame_cue(PromptStep step) {
    switch (step) {
        case PromptStep::BaselineGen:
        case PromptStep::Execute:
            return "Q: ";
        case PromptStep::Plan:
        case PromptStep::JointPlanExecute:
        case PromptStep::CrossCheck:
        case PromptStep::FinalGen:
        case PromptStep::FactExtract:
            return "Context: ";
    }
    return "Q: ";
}

std::string render_baseline(const Query& query, const DemoBank& bank) {
    if (trim(query.text).empty()) throw EmptyQuestionError("query text empty");
    if (bank.demonstrations.empty()) {
        return render_zero_shot(query, /*chain_of_thought=*/false);
    }
    require_bank(bank, query.task_kind, PromptStep::BaselineGen);
    std::ostringstream out;
    for (const auto& d : bank.demonstrations) {
        out << "Q: " << d.context << "\nA: " << d.response << "\n\n";
    }
    out << "Q: " << query.text << "\nA:";
    return out.str();
}

std::string render_zero_shot(const Query& query, bool chain_of_thought) {
    if (trim(query.text).empty()) throw EmptyQuestionError("query text empty");
    std::string prompt = query.text;
    if (chain_of_thought) {
        prompt += "\n";
        prompt += kCotSuffix;
    }
    if (query.task_kind == TaskKind::ListQA) {
        prompt += "\n";
        prompt += kListOnlySuffix;
    }
    return prompt;
}

std::string render_plan(const Query& query, const std::string& draft_or_passage,
                        PlannerStrategy strategy, const DemoBank& bank) {
    if (strategy == PlannerStrategy::RuleTemplated) {
        return std::string(kRulePlanSentinel);
    }
    if (trim(draft_or_passage).empty()) {
        throw EmptyDraftError("plan prompt needs a non-empty draft");
    }
    require_bank(bank, query.task_kind, PromptStep::Plan);
    std::string final_context =
        "Q: " + query.text + "\nA: " + trim(draft_or_passage);
    return context_frame(bank, final_context);
}

std::string render_joint(const Query& query, const std::string& draft,
                         const DemoBank& bank) {
    if (trim(draft).empty()) {
        throw EmptyDraftError("joint prompt needs a non-empty draft");
    }
    require_bank(bank, query.task_kind, PromptStep::JointPlanExecute);
    std::string final_context = "Q: " + query.text + "\nA: " + trim(draft);
    return context_frame(bank, final_context);
}

std::string render_execute(const std::string& question, const DemoBank& bank) {
    if (trim(question).empty()) {
        throw EmptyQuestionError("execute prompt needs a non-empty question");
    }
    require_bank(bank, bank.task_kind, PromptStep::Execute);
    std::ostringstream out;
    for (const auto& d : bank.demonstrations) {
        out << "Q: " << d.context << "\nA: " << d.response << "\n\n";
    }
    out << "Q: " << question << "\nA:";
    return out.str();
}

std::string render_execute_2step(const std::vector<std::string>& questions,
                                 const DemoBank& bank) {
    if (questions.empty()) {
        throw EmptyPlanError("two-step execute needs at least one question");
    }
    require_bank(bank, bank.task_kind, PromptStep::Execute);
    std::ostringstream out;
    for (const auto& d : bank.demonstrations) {
        out << "Q: " << d.context << "\nA: " << d.response << "\n\n";
    }
    // All questions ride in one frame; answers come back as a numbered list.
    out << "Q: Answer each of the following questions.\n";
    for (std::size_t i = 0; i < questions.size(); ++i) {
        if (trim(questions[i]).empty()) {
            throw EmptyQuestionError("two-step execute question " +
                                     std::to_string(i) + " is empty");
        }
        out << i + 1 << ". " << questions[i] << "\n";
    }
    out << "A:";
    return out.str();
}

std::string render_crosscheck(const std::string& original_fact,
                              const VerificationQA& qa, const DemoBank& bank) {
    if (trim(original_fact).empty()) {
        throw IncompleteQAError("cross-check needs the original fact");
    }
    if (trim(qa.planned.question).empty() || trim(qa.answer).empty()) {
        throw IncompleteQAError("cross-check needs a complete Q and A");
    }
    require_bank(bank, bank.task_kind, PromptStep::CrossCheck);
    std::string final_context = original_fact + "\nFrom another source,\n" +
                                qa_block(qa.planned.question, qa.answer);
    return context_frame(bank, final_context);
}

std::string render_final(
    const Query& query, const std::string& baseline_passage,
    const std::vector<VerificationQA>& qa,
    const std::optional<std::vector<CrossCheckVerdict>>& verdicts,
    const DemoBank& bank) {
    require_bank(bank, query.task_kind, PromptStep::FinalGen);
    if (verdicts && verdicts->size() != qa.size()) {
        throw IncompleteQAError("verdict list does not align with QA list");
    }

    std::string context;
    if (verdicts) {
        // Keep only material the cross-check endorsed; inconsistent facts
        // are dropped entirely.
        std::vector<std::string> kept;
        for (std::size_t i = 0; i < qa.size(); ++i) {
            const auto& v = (*verdicts)[i];
            if (v.status == VerdictStatus::Inconsistent) continue;
            std::string part =
                v.consistent_part ? trim(*v.consistent_part) : std::string();
            if (part.empty()) part = trim(qa[i].planned.source_fact);
            if (!part.empty()) kept.push_back(std::move(part));
        }
        for (std::size_t i = 0; i < kept.size(); ++i) {
            if (i > 0) context += " ";
            context += kept[i];
        }
    } else {
        context = trim(baseline_passage);
    }

    std::string final_context = context;
    if (!qa.empty()) {
        final_context += "\nFrom another source,";
        for (const auto& item : qa) {
            final_context += "\n" + qa_block(item.planned.question, item.answer);
        }
    }
    return context_frame(bank, final_context);
}

std::string render_fact_extract(const std::string& response,
                                const DemoBank& bank) {
    if (trim(response).empty()) {
        throw EmptyResponseError("fact extraction needs a non-empty response");
    }
    require_bank(bank, bank.task_kind, PromptStep::FactExtract);
    return context_frame(bank, trim(response));
}

}  // namespace cove
