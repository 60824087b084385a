#include "cove/pipeline.hpp"

#include "cove/errors.hpp"
#include "cove/parsers.hpp"
#include "cove/passage.hpp"
#include "cove/prompt_render.hpp"
#include "cove/text_util.hpp"

#include <limits>
#include <unordered_set>

namespace cove {

namespace {

struct RunContext {
    const Query& query;
    const PipelineConfig& config;
    Backend& backend;
    const BankSet& banks;
    PipelineTrace trace;
};

Completion call_step(RunContext& ctx, Step step, const std::string& prompt) {
    CompletionRequest request{prompt, ctx.config.decoding};
    Completion completion;
    try {
        completion = ctx.backend.complete(request);
    } catch (const std::exception& e) {
        throw PipelineStepError(std::string(to_string(step)), e.what());
    }
    ctx.trace.append(step, prompt, completion.text, ctx.backend.id(),
                     completion.wall_ms);
    return completion;
}

void drain_warnings(RunContext& ctx, std::vector<std::string>& warnings) {
    for (auto& w : warnings) ctx.trace.warn(std::move(w));
    warnings.clear();
}

// Cross-passage dedup plus the max_questions bound, applied after the
// per-passage parses are concatenated.
void finalize_items(std::vector<PlannedVerification>& items, bool& truncated,
                    int max_questions, RunContext& ctx) {
    std::unordered_set<std::string> seen;
    std::vector<PlannedVerification> unique;
    for (auto& item : items) {
        if (item.question.empty()) continue;
        if (seen.insert(item.question).second) unique.push_back(std::move(item));
    }
    items = std::move(unique);
    if (items.size() > static_cast<std::size_t>(max_questions)) {
        items.resize(static_cast<std::size_t>(max_questions));
        truncated = true;
        ctx.trace.warn("verification plan truncated to " +
                       std::to_string(max_questions) + " questions");
    }
}

// Builds the plan. For the joint variant the same completion also carries
// the answers, returned through joint_qa.
VerificationPlan plan_verifications(RunContext& ctx,
                                    const std::vector<std::string>& passages,
                                    const std::string& baseline,
                                    std::vector<VerificationQA>* joint_qa) {
    const PipelineConfig& config = ctx.config;
    VerificationPlan plan;
    std::vector<std::string> warnings;

    if (config.planner_strategy == PlannerStrategy::RuleTemplated) {
        auto entities = parse_list_answer(baseline);
        plan = build_rule_plan(entities, ctx.query, config.max_questions);
        return plan;
    }

    if (config.variant == Variant::Joint) {
        bool fell_back = false;
        const DemoBank& bank =
            ctx.banks.get_plan(ctx.query.task_kind, PromptStep::JointPlanExecute,
                               config.planner_strategy, &fell_back);
        if (fell_back) {
            ctx.trace.warn("no joint bank for strategy " +
                           std::string(to_string(config.planner_strategy)) +
                           "; using the open-question bank");
        }
        std::vector<VerificationQA> qa;
        for (std::size_t i = 0; i < passages.size(); ++i) {
            std::string prompt = render_joint(ctx.query, passages[i], bank);
            Completion c = call_step(ctx, Step::Execute, prompt);
            auto parsed = parse_joint(c.text, std::numeric_limits<int>::max(),
                                      &warnings);
            drain_warnings(ctx, warnings);
            for (auto& item : parsed) {
                item.planned.passage_index = static_cast<int>(i);
                qa.push_back(std::move(item));
            }
        }
        // Dedup/truncate the combined QA, then derive the plan from it.
        std::unordered_set<std::string> seen;
        std::vector<VerificationQA> unique;
        for (auto& item : qa) {
            if (seen.insert(item.planned.question).second) {
                unique.push_back(std::move(item));
            }
        }
        if (unique.size() > static_cast<std::size_t>(config.max_questions)) {
            unique.resize(static_cast<std::size_t>(config.max_questions));
            plan.truncated = true;
            ctx.trace.warn("verification plan truncated to " +
                           std::to_string(config.max_questions) + " questions");
        }
        for (const auto& item : unique) plan.items.push_back(item.planned);
        *joint_qa = std::move(unique);
        return plan;
    }

    bool fell_back = false;
    const DemoBank& bank =
        ctx.banks.get_plan(ctx.query.task_kind, PromptStep::Plan,
                           config.planner_strategy, &fell_back);
    if (fell_back) {
        ctx.trace.warn("no plan bank for strategy " +
                       std::string(to_string(config.planner_strategy)) +
                       "; using the open-question bank");
    }
    for (std::size_t i = 0; i < passages.size(); ++i) {
        std::string prompt =
            render_plan(ctx.query, passages[i], config.planner_strategy, bank);
        Completion c = call_step(ctx, Step::Plan, prompt);
        auto sub = parse_plan(c.text, config.planner_strategy,
                              std::numeric_limits<int>::max(), &warnings);
        drain_warnings(ctx, warnings);
        for (auto& item : sub.items) {
            item.passage_index = static_cast<int>(i);
            plan.items.push_back(std::move(item));
        }
    }
    finalize_items(plan.items, plan.truncated, config.max_questions, ctx);
    return plan;
}

std::vector<VerificationQA> execute_verifications(RunContext& ctx,
                                                  const VerificationPlan& plan) {
    std::vector<VerificationQA> qa;
    if (plan.items.empty()) return qa;

    const DemoBank& bank =
        ctx.banks.get(ctx.query.task_kind, PromptStep::Execute);

    if (ctx.config.variant == Variant::TwoStep ||
        (ctx.config.variant == Variant::Joint &&
         ctx.config.planner_strategy == PlannerStrategy::RuleTemplated)) {
        // One combined prompt answers the whole plan.
        std::vector<std::string> questions;
        for (const auto& item : plan.items) questions.push_back(item.question);
        std::string prompt = render_execute_2step(questions, bank);
        Completion c = call_step(ctx, Step::Execute, prompt);
        auto answers = parse_numbered_answers(c.text, questions.size());
        for (std::size_t i = 0; i < plan.items.size(); ++i) {
            if (answers[i].empty()) {
                ctx.trace.warn("no answer for question " + std::to_string(i + 1) +
                               " in combined execution");
            }
            qa.push_back({plan.items[i], answers[i]});
        }
        return qa;
    }

    // Factored: independent prompts, bounded fan-out, input order kept.
    std::vector<CompletionRequest> requests;
    requests.reserve(plan.items.size());
    for (const auto& item : plan.items) {
        requests.push_back(
            {render_execute(item.question, bank), ctx.config.decoding});
    }
    auto outcomes = complete_batch(ctx.backend, requests, ctx.config.parallelism);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].ok()) {
            if (ctx.config.failure_policy == FailurePolicy::Abort) {
                throw PipelineStepError(std::string(to_string(Step::Execute)),
                                        outcomes[i].error);
            }
            ctx.trace.warn("skipped question '" + plan.items[i].question +
                           "': " + outcomes[i].error);
            continue;
        }
        ctx.trace.append(Step::Execute, requests[i].prompt,
                         outcomes[i].completion->text, ctx.backend.id(),
                         outcomes[i].completion->wall_ms);
        qa.push_back({plan.items[i], outcomes[i].completion->text});
    }
    return qa;
}

std::vector<CrossCheckVerdict> cross_check(RunContext& ctx,
                                           const std::vector<VerificationQA>& qa) {
    std::vector<CrossCheckVerdict> verdicts(qa.size(), make_consistent(""));
    const DemoBank& bank =
        ctx.banks.get(ctx.query.task_kind, PromptStep::CrossCheck);

    // One cross-check per verification that carries a source fact and an
    // answer to compare it with.
    std::vector<std::size_t> targets;
    std::vector<CompletionRequest> requests;
    for (std::size_t i = 0; i < qa.size(); ++i) {
        if (trim(qa[i].planned.source_fact).empty()) continue;
        if (trim(qa[i].answer).empty()) {
            ctx.trace.warn("no verification answer for fact '" +
                           qa[i].planned.source_fact +
                           "'; treating as inconsistent");
            verdicts[i] = make_inconsistent();
            continue;
        }
        targets.push_back(i);
        requests.push_back({render_crosscheck(qa[i].planned.source_fact, qa[i],
                                              bank),
                            ctx.config.decoding});
    }

    auto outcomes = complete_batch(ctx.backend, requests, ctx.config.parallelism);
    std::vector<std::string> warnings;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        std::size_t i = targets[t];
        if (!outcomes[t].ok()) {
            if (ctx.config.failure_policy == FailurePolicy::Abort) {
                throw PipelineStepError(std::string(to_string(Step::CrossCheck)),
                                        outcomes[t].error);
            }
            ctx.trace.warn("cross-check failed for fact '" +
                           qa[i].planned.source_fact +
                           "'; treating as inconsistent: " + outcomes[t].error);
            verdicts[i] = make_inconsistent();
            continue;
        }
        ctx.trace.append(Step::CrossCheck, requests[t].prompt,
                         outcomes[t].completion->text, ctx.backend.id(),
                         outcomes[t].completion->wall_ms);
        verdicts[i] = parse_crosscheck(outcomes[t].completion->text, &warnings);
        drain_warnings(ctx, warnings);
    }
    return verdicts;
}

std::string generate_final(RunContext& ctx,
                           const std::vector<std::string>& passages,
                           const std::vector<VerificationQA>& qa,
                           const std::optional<std::vector<CrossCheckVerdict>>&
                               verdicts) {
    const DemoBank& bank =
        ctx.banks.get(ctx.query.task_kind, PromptStep::FinalGen);

    std::vector<std::string> revised;
    for (std::size_t p = 0; p < passages.size(); ++p) {
        std::vector<VerificationQA> sub_qa;
        std::optional<std::vector<CrossCheckVerdict>> sub_verdicts;
        if (verdicts) sub_verdicts.emplace();
        for (std::size_t i = 0; i < qa.size(); ++i) {
            if (qa[i].planned.passage_index != static_cast<int>(p)) continue;
            sub_qa.push_back(qa[i]);
            if (verdicts) sub_verdicts->push_back((*verdicts)[i]);
        }
        std::string prompt =
            render_final(ctx.query, passages[p], sub_qa, sub_verdicts, bank);
        Completion c = call_step(ctx, Step::FinalGen, prompt);
        revised.push_back(trim(c.text));
    }

    std::string final_response;
    for (std::size_t i = 0; i < revised.size(); ++i) {
        if (i > 0) final_response += " ";
        final_response += revised[i];
    }
    return final_response;
}

}  // namespace

PipelineResult run(const Query& query, const PipelineConfig& config,
                   Backend& backend, const BankSet& banks) {
    if (trim(query.text).empty()) {
        throw InvalidConfigError("query text is empty");
    }
    auto config_warnings = validate_config(config);

    RunContext ctx{query, config, backend, banks,
                   PipelineTrace(query.id, config)};
    for (auto& w : config_warnings) ctx.trace.warn(std::move(w));

    // Step 1: draft.
    std::string baseline_prompt;
    if (config.variant == Variant::ZeroShot ||
        config.variant == Variant::ZeroShotCoT) {
        baseline_prompt =
            render_zero_shot(query, config.variant == Variant::ZeroShotCoT);
    } else {
        baseline_prompt = render_baseline(
            query, banks.get(query.task_kind, PromptStep::BaselineGen));
    }
    Completion draft = call_step(ctx, Step::BaselineGen, baseline_prompt);
    if (trim(draft.text).empty()) {
        throw EmptyBaselineError("baseline draft is whitespace-only");
    }

    PipelineResult result;
    result.baseline_response = draft.text;

    if (is_degenerate_variant(config.variant)) {
        result.final_response = draft.text;
        result.trace = std::move(ctx.trace);
        return result;
    }

    auto passages = split_passages(draft.text, query.task_kind);

    // Step 2 (and 3, for joint): plan the verification questions.
    std::vector<VerificationQA> joint_qa;
    result.plan = plan_verifications(ctx, passages, draft.text, &joint_qa);
    if (result.plan.items.empty()) {
        ctx.trace.warn(
            "empty verification plan; revising from the baseline alone");
    }

    // Step 3: answer them.
    if (config.variant == Variant::Joint &&
        config.planner_strategy != PlannerStrategy::RuleTemplated) {
        result.qa = std::move(joint_qa);
    } else {
        result.qa = execute_verifications(ctx, result.plan);
    }

    // Step 3b: explicit cross-check (factor+revise only).
    if (config.variant == Variant::FactorRevise) {
        result.verdicts = cross_check(ctx, result.qa);
    }

    // Step 4: revise.
    result.final_response =
        generate_final(ctx, passages, result.qa, result.verdicts);
    result.trace = std::move(ctx.trace);
    return result;
}

}  // namespace cove
