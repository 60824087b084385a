#pragma once

#include <stdexcept>
#include <string>

namespace cove {

// Base for all library errors. Leaf types exist where callers need to
// branch on the failure kind.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration rejected outright (warnings are returned, not thrown).
class InvalidConfigError : public Error {
public:
    using Error::Error;
};

// --- backend ---

class BackendError : public Error {
public:
    using Error::Error;
};

// Transport failure that persisted through the retry budget.
class BackendUnavailableError : public BackendError {
public:
    using BackendError::BackendError;
};

// Scripted mock saw a prompt no rule matches.
class NoRuleMatchedError : public BackendError {
public:
    using BackendError::BackendError;
};

// Backend rejected the prompt as over its context limit.
class TokenLimitExceededError : public BackendError {
public:
    using BackendError::BackendError;
};

// Replay saw a prompt that is not in the recorded session.
class ReplayMismatchError : public BackendError {
public:
    using BackendError::BackendError;
};

// --- prompts ---

// No demonstration bank for the requested (task, step, strategy).
class MissingBankError : public Error {
public:
    using Error::Error;
};

// Bank file failed structural validation.
class BankFormatError : public Error {
public:
    using Error::Error;
};

// Rendering preconditions.
class EmptyDraftError : public Error {
public:
    using Error::Error;
};
class EmptyQuestionError : public Error {
public:
    using Error::Error;
};
class EmptyPlanError : public Error {
public:
    using Error::Error;
};
class IncompleteQAError : public Error {
public:
    using Error::Error;
};

// --- pipeline ---

// Baseline draft came back whitespace-only.
class EmptyBaselineError : public Error {
public:
    using Error::Error;
};

// Operation not defined for the task kind (rule-templated plans on
// non-list tasks).
class NotApplicableError : public Error {
public:
    using Error::Error;
};

// Backend failure wrapped with the pipeline stage that issued the call.
class PipelineStepError : public Error {
public:
    PipelineStepError(const std::string& step, const std::string& what)
        : Error("[" + step + "] " + what), step_(step) {}
    const std::string& step() const { return step_; }

private:
    std::string step_;
};

// --- eval ---

class EmptyGoldError : public Error {
public:
    using Error::Error;
};
class NoFactsError : public Error {
public:
    using Error::Error;
};
class EmptyResponseError : public Error {
public:
    using Error::Error;
};

// --- datasets ---

class EmptySlotError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

class SchemaMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace cove
