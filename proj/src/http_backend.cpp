#include "cove/http_backend.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace cove {

namespace {
using nlohmann::json;

bool looks_like_token_limit(const std::string& body) {
    std::string low = lower_ascii(body);
    return low.find("context_length") != std::string::npos ||
           low.find("context length") != std::string::npos ||
           low.find("maximum context") != std::string::npos ||
           low.find("too many tokens") != std::string::npos;
}
}  // namespace

HttpBackendConfig http_config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open backend config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("bad backend config " + path + ": " + e.what());
    }
    HttpBackendConfig c;
    c.endpoint = j.value("endpoint", c.endpoint);
    c.model = j.value("model", c.model);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.max_attempts = j.value("max_attempts", c.max_attempts);
    c.backoff_base_ms = j.value("backoff_base_ms", c.backoff_base_ms);
    if (j.contains("auth_token")) {
        throw Error("auth_token must come from the environment, not a file");
    }
    return c;
}

void apply_env_overrides(HttpBackendConfig& config) {
    if (const char* v = std::getenv("COVE_ENDPOINT")) config.endpoint = v;
    if (const char* v = std::getenv("COVE_MODEL")) config.model = v;
    if (const char* v = std::getenv("COVE_AUTH_TOKEN")) config.auth_token = v;
}

void split_url(const std::string& url, std::string& base, std::string& path) {
    std::size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
        throw InvalidConfigError("endpoint URL needs a scheme: " + url);
    }
    std::size_t slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) {
        base = url;
        path = "/";
    } else {
        base = url.substr(0, slash);
        path = url.substr(slash);
    }
}

HttpBackend::HttpBackend(HttpBackendConfig config)
    : config_(std::move(config)) {
    if (config_.endpoint.empty()) {
        throw InvalidConfigError("endpoint URL is required");
    }
    if (config_.max_attempts < 1) {
        throw InvalidConfigError("max_attempts must be >= 1");
    }
    split_url(config_.endpoint, base_, path_);
}

std::string HttpBackend::id() const {
    return "http:" + config_.model + "@" + base_;
}

Completion HttpBackend::complete(const CompletionRequest& request) {
    if (request.prompt.empty()) throw BackendError("empty prompt");

    json body{{"model", config_.model},
              {"messages",
               json::array({json{{"role", "user"}, {"content", request.prompt}}})},
              {"temperature", request.decoding.temperature},
              {"max_tokens", request.decoding.max_tokens}};
    if (!request.decoding.stop_sequences.empty()) {
        body["stop"] = request.decoding.stop_sequences;
    }

    httplib::Headers headers;
    if (!config_.auth_token.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.auth_token);
    }

    auto start = std::chrono::steady_clock::now();
    std::string last_error;
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(
                config_.backoff_base_ms << (attempt - 1)));
        }
        httplib::Client client(base_);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        auto res = client.Post(path_, headers, body.dump(), "application/json");

        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;  // retry
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;  // retry
        }
        if (res->status >= 400) {
            if (looks_like_token_limit(res->body)) {
                throw TokenLimitExceededError("backend rejected prompt: " +
                                              res->body.substr(0, 200));
            }
            throw BackendError("HTTP " + std::to_string(res->status) + ": " +
                               res->body.substr(0, 200));
        }

        json reply;
        try {
            reply = json::parse(res->body);
        } catch (const json::exception& e) {
            throw BackendError(std::string("malformed completion response: ") +
                               e.what());
        }
        std::string text;
        try {
            const json& choice = reply.at("choices").at(0);
            if (choice.contains("message")) {
                text = choice.at("message").at("content").get<std::string>();
            } else {
                text = choice.at("text").get<std::string>();
            }
        } catch (const json::exception&) {
            throw BackendError("completion response missing choices content");
        }
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        return Completion{std::move(text),
                          static_cast<std::uint64_t>(elapsed)};
    }
    throw BackendUnavailableError("backend unavailable after " +
                                  std::to_string(config_.max_attempts) +
                                  " attempts: " + last_error);
}

}  // namespace cove
