#pragma once

// HTTP client for chat-completion endpoints. Targets the de-facto request
// shape (model, message list, temperature, max tokens) with our flat prompt
// mapped to a single user message, so any compatible server works.

#include "cove/backend.hpp"

#include <cstdint>
#include <string>

namespace cove {

struct HttpBackendConfig {
    std::string endpoint;  // e.g. http://localhost:8000/v1/chat/completions
    std::string model = "default";
    std::string auth_token;      // from env only; never written to files
    int timeout_seconds = 60;
    int max_attempts = 3;        // total tries, not retries
    std::uint64_t backoff_base_ms = 500;  // doubled per retry
};

// Reads endpoint/model/timeout from a JSON config file (if given) and
// applies environment overrides; the auth token comes from COVE_AUTH_TOKEN.
HttpBackendConfig http_config_from_file(const std::string& path);
void apply_env_overrides(HttpBackendConfig& config);

class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    std::string id() const override;
    Completion complete(const CompletionRequest& request) override;

    const HttpBackendConfig& config() const { return config_; }

private:
    HttpBackendConfig config_;
    std::string base_;  // scheme://host[:port]
    std::string path_;  // /v1/chat/completions
};

// Splits an URL into (scheme://host[:port], path). Exposed for tests.
void split_url(const std::string& url, std::string& base, std::string& path);

}  // namespace cove
