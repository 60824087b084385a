#pragma once

// Uniform text-completion interface. Implementations must be shareable
// across concurrent pipeline stages; complete() is reentrant.

#include "cove/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cove {

struct CompletionRequest {
    std::string prompt;  // non-empty
    DecodingParams decoding;
};

// A completion plus the wall time the backend attributes to it. Mocks
// report their configured delay so traces stay byte-identical across runs;
// live backends report measured time.
struct Completion {
    std::string text;
    std::uint64_t wall_ms = 0;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string id() const = 0;
    virtual Completion complete(const CompletionRequest& request) = 0;
};

// Per-item outcome of a batch; failed requests carry the error message
// instead of aborting the whole batch.
struct BatchOutcome {
    std::optional<Completion> completion;
    std::string error;

    bool ok() const { return completion.has_value(); }
};

// Runs the requests with at most `parallelism` in flight at once.
// outcome[i] always corresponds to requests[i] regardless of completion
// order; requests are issued in input order.
std::vector<BatchOutcome> complete_batch(
    Backend& backend, std::span<const CompletionRequest> requests,
    int parallelism);

}  // namespace cove
