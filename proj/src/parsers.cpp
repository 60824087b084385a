#include "cove/parsers.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace cove {

namespace {

void warn_into(std::vector<std::string>* warnings, std::string message) {
    if (warnings != nullptr) warnings->push_back(std::move(message));
}

// "1. ", "2) ", "- ", "* " prefixes. The marker must be followed by
// whitespace so decimals ("3.14") and negatives ("-5") survive.
std::string strip_enumeration(std::string s) {
    std::string t = trim(s);
    std::size_t i = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i > 0 && i + 1 < t.size() && (t[i] == '.' || t[i] == ')') &&
        std::isspace(static_cast<unsigned char>(t[i + 1])) != 0) {
        return trim(t.substr(i + 1));
    }
    if (t.size() >= 2 && (t[0] == '-' || t[0] == '*') &&
        std::isspace(static_cast<unsigned char>(t[1])) != 0) {
        return trim(t.substr(1));
    }
    return t;
}

const std::unordered_set<std::string>& question_openers() {
    static const std::unordered_set<std::string> words = {
        "who",   "what", "when", "where", "why",  "how",   "which",
        "whose", "whom", "is",   "are",   "was",  "were",  "did",
        "does",  "do",   "can",  "could", "will", "would", "has",
        "have",  "had",  "should", "name"};
    return words;
}

std::string first_word_lower(const std::string& s) {
    std::size_t end = 0;
    while (end < s.size() &&
           std::isalpha(static_cast<unsigned char>(s[end])) != 0) {
        ++end;
    }
    return lower_ascii(s.substr(0, end));
}

// First comma whose suffix opens with a question word; facts keep their
// internal commas this way.
std::size_t find_question_comma(const std::string& line) {
    std::size_t pos = line.find(',');
    while (pos != std::string::npos) {
        std::string suffix = trim(line.substr(pos + 1));
        if (question_openers().count(first_word_lower(suffix)) != 0) return pos;
        pos = line.find(',', pos + 1);
    }
    return std::string::npos;
}

std::string strip_quotes(std::string s) {
    std::string t = trim(s);
    while (t.size() >= 2 &&
           ((t.front() == '"' && t.back() == '"') ||
            (t.front() == '\'' && t.back() == '\''))) {
        t = trim(t.substr(1, t.size() - 2));
    }
    return t;
}

// Splits a line holding several '?'-terminated questions; commas and
// spaces between questions are separators, commas inside one survive.
std::vector<std::string> split_question_run(const std::string& line) {
    std::vector<std::string> questions;
    std::string current;
    for (char c : line) {
        current.push_back(c);
        if (c == '?') {
            std::string q = trim(current);
            while (!q.empty() && (q.front() == ',' || q.front() == ' ')) {
                q = trim(q.substr(1));
            }
            if (!q.empty()) questions.push_back(q);
            current.clear();
        }
    }
    return questions;  // residue after the last '?' is dropped by callers
}

void finalize_plan(VerificationPlan& plan, int max_questions,
                   std::vector<std::string>* warnings) {
    std::unordered_set<std::string> seen;
    std::vector<PlannedVerification> unique;
    for (auto& item : plan.items) {
        if (seen.insert(item.question).second) unique.push_back(std::move(item));
    }
    plan.items = std::move(unique);
    if (plan.items.size() > static_cast<std::size_t>(max_questions)) {
        plan.items.resize(static_cast<std::size_t>(max_questions));
        plan.truncated = true;
        warn_into(warnings, "verification plan truncated to " +
                                std::to_string(max_questions) + " questions");
    }
}

}  // namespace

VerificationPlan parse_plan(const std::string& completion,
                            PlannerStrategy strategy, int max_questions,
                            std::vector<std::string>* warnings) {
    (void)strategy;  // both generated strategies share the surface form
    VerificationPlan plan;
    for (const auto& raw_line : split_lines(completion)) {
        std::string line = strip_enumeration(trim(raw_line));
        if (line.empty()) continue;

        std::size_t question_marks =
            static_cast<std::size_t>(std::count(line.begin(), line.end(), '?'));
        if (question_marks > 1) {
            // Flat comma-separated list of questions.
            for (auto& q : split_question_run(line)) {
                plan.items.push_back({"", std::move(q), 0});
            }
            if (line.back() != '?') {
                warn_into(warnings, "dropped trailing plan fragment: " +
                                        line.substr(line.rfind('?') + 1));
            }
            continue;
        }
        if (question_marks == 1 && line.back() != '?') {
            warn_into(warnings, "dropped trailing plan fragment after '?'");
            line = trim(line.substr(0, line.find('?') + 1));
        }
        // One record per line: "fact, question" or a bare question.
        if (question_openers().count(first_word_lower(line)) != 0) {
            plan.items.push_back({"", line, 0});
            continue;
        }
        std::size_t comma = find_question_comma(line);
        if (comma == std::string::npos && line.find(',') != std::string::npos) {
            comma = line.find(',');
        }
        if (comma != std::string::npos) {
            std::string fact = trim(line.substr(0, comma));
            std::string question = trim(line.substr(comma + 1));
            if (question.empty()) {
                warn_into(warnings, "plan line missing question: " + line);
                continue;
            }
            plan.items.push_back({std::move(fact), std::move(question), 0});
        } else if (!line.empty() && line.back() == '?') {
            plan.items.push_back({"", line, 0});
        } else {
            warn_into(warnings, "unparseable plan line: " + line);
        }
    }
    if (plan.items.empty() && !trim(completion).empty()) {
        warn_into(warnings, "planner completion yielded no questions");
    }
    finalize_plan(plan, max_questions, warnings);
    return plan;
}

std::string serialize_plan(const VerificationPlan& plan) {
    std::string out;
    for (const auto& item : plan.items) {
        if (!out.empty()) out += "\n";
        if (item.source_fact.empty()) {
            out += item.question;
        } else {
            out += item.source_fact + ", " + item.question;
        }
    }
    return out;
}

std::vector<VerificationQA> parse_joint(const std::string& completion,
                                        int max_questions,
                                        std::vector<std::string>* warnings) {
    std::vector<VerificationQA> qa;
    std::string* open_field = nullptr;
    for (const auto& raw_line : split_lines(completion)) {
        std::string line = trim(raw_line);
        if (line.empty()) {
            open_field = nullptr;
            continue;
        }
        if (starts_with_ci(line, "Q:")) {
            VerificationQA item;
            item.planned.question = trim(line.substr(2));
            qa.push_back(std::move(item));
            open_field = &qa.back().planned.question;
            continue;
        }
        if (starts_with_ci(line, "A:")) {
            if (qa.empty()) {
                warn_into(warnings, "joint answer before any question");
                continue;
            }
            qa.back().answer = trim(line.substr(2));
            open_field = &qa.back().answer;
            continue;
        }
        if (open_field != nullptr) {
            // continuation of a multi-line question or answer
            if (!open_field->empty()) open_field->push_back('\n');
            open_field->append(line);
        }
    }
    if (qa.empty() && !trim(completion).empty()) {
        warn_into(warnings, "joint completion yielded no QA pairs");
    }

    std::unordered_set<std::string> seen;
    std::vector<VerificationQA> unique;
    for (auto& item : qa) {
        if (item.planned.question.empty()) continue;
        if (seen.insert(item.planned.question).second) {
            unique.push_back(std::move(item));
        }
    }
    if (unique.size() > static_cast<std::size_t>(max_questions)) {
        unique.resize(static_cast<std::size_t>(max_questions));
        warn_into(warnings, "joint plan truncated to " +
                                std::to_string(max_questions) + " questions");
    }
    return unique;
}

CrossCheckVerdict parse_crosscheck(const std::string& completion,
                                   std::vector<std::string>* warnings) {
    std::string t = trim(completion);
    if (starts_with_ci(t, "Response:")) t = trim(t.substr(9));

    auto take_rest = [&t](std::size_t label_len) {
        std::string rest = t.substr(label_len);
        std::size_t i = 0;
        while (i < rest.size() && (rest[i] == '.' || rest[i] == ':' ||
                                   rest[i] == ',' || rest[i] == ' ')) {
            ++i;
        }
        return trim(rest.substr(i));
    };

    if (starts_with_ci(t, "PARTIALLY CONSISTENT")) {
        return make_partially_consistent(take_rest(20));
    }
    if (starts_with_ci(t, "INCONSISTENT")) {
        return make_inconsistent();
    }
    if (starts_with_ci(t, "CONSISTENT")) {
        return make_consistent(take_rest(10));
    }
    warn_into(warnings,
              "unrecognized cross-check verdict, treating as inconsistent: " +
                  collapse_ws(t).substr(0, 80));
    return make_inconsistent();
}

std::vector<std::string> parse_list_answer(const std::string& completion) {
    std::vector<std::string> entities;
    for (const auto& line : split_lines(completion)) {
        for (const auto& fragment : split_on(line, ',')) {
            std::string entity = strip_quotes(strip_enumeration(fragment));
            if (!entity.empty()) entities.push_back(std::move(entity));
        }
    }
    return entities;
}

std::vector<std::string> parse_numbered_answers(const std::string& completion,
                                                std::size_t expected) {
    std::vector<std::string> answers;
    for (const auto& raw_line : split_lines(completion)) {
        std::string line = trim(raw_line);
        if (line.empty()) continue;
        if (starts_with_ci(line, "A:")) line = trim(line.substr(2));
        line = strip_enumeration(line);
        if (line.empty()) continue;
        answers.push_back(line);
        if (answers.size() == expected) break;
    }
    answers.resize(expected);  // missing answers stay empty
    return answers;
}

VerificationPlan build_rule_plan(const std::vector<std::string>& entities,
                                 const Query& query, int max_questions) {
    if (query.task_kind != TaskKind::ListQA) {
        throw NotApplicableError(
            "rule-templated plans are defined for list tasks only");
    }
    std::string question_text = trim(query.text);
    while (!question_text.empty() && question_text.back() == '?') {
        question_text.pop_back();
    }
    VerificationPlan plan;
    for (const auto& entity : entities) {
        std::string e = trim(entity);
        if (e.empty()) continue;
        // the "fact" under test is the candidate entity itself, held in
        // the question; source_fact stays empty by contract
        plan.items.push_back(
            {"", "Does " + e + " answer the question " + question_text + "?",
             0});
    }
    finalize_plan(plan, max_questions, nullptr);
    return plan;
}

}  // namespace cove
