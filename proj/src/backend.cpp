#include "cove/backend.hpp"

#include "cove/errors.hpp"

#include <atomic>
#include <thread>

namespace cove {

std::vector<BatchOutcome> complete_batch(
    Backend& backend, std::span<const CompletionRequest> requests,
    int parallelism) {
    if (parallelism < 1) throw InvalidConfigError("parallelism must be >= 1");

    std::vector<BatchOutcome> outcomes(requests.size());
    if (requests.empty()) return outcomes;

    // Workers claim indices in order, so issue order equals input order.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= requests.size()) return;
            try {
                outcomes[i].completion = backend.complete(requests[i]);
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };

    std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(parallelism),
                              requests.size());
    if (n_workers == 1) {
        worker();
        return outcomes;
    }
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return outcomes;
}

}  // namespace cove
