#pragma once

// HTTP adapter for chat-completions endpoints: bearer auth from the
// environment, exponential backoff on 429/5xx, and usage-field token counts
// with a flagged estimate as the fallback.

#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "codesim/llm_client.hpp"

namespace codesim {

namespace detail {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;  // /v1/chat/completions
};

inline SplitUrl split_url(const std::string& url) {
    const std::size_t scheme = url.find("://");
    if (scheme == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + url);
    const std::size_t path = url.find('/', scheme + 3);
    if (path == std::string::npos) return {url, "/"};
    return {url.substr(0, path), url.substr(path)};
}

}  // namespace detail

class HttpChatProvider : public Provider {
  public:
    std::string name() const override { return "http-chat"; }

    CompletionRecord complete(const ModelConfig& config, const Request& request) override {
        if (config.endpoint.empty()) throw ConfigError("http provider needs an endpoint URL");
        std::string token;
        if (!config.auth_env.empty()) {
            const char* env = std::getenv(config.auth_env.c_str());
            if (!env || !*env)
                throw AuthError("environment variable " + config.auth_env + " is not set");
            token = env;
        }

        const detail::SplitUrl url = detail::split_url(config.endpoint);
        httplib::Client http(url.base);
        const auto timeout = std::chrono::milliseconds(config.timeout_ms);
        http.set_connection_timeout(timeout);
        http.set_read_timeout(timeout);
        http.set_write_timeout(timeout);

        httplib::Headers headers;
        if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);

        nlohmann::json body;
        body["model"] = request.model_name;
        nlohmann::json messages = nlohmann::json::array();
        if (request.system_text)
            messages.push_back({{"role", "system"}, {"content", *request.system_text}});
        messages.push_back({{"role", "user"}, {"content", request.user_text}});
        body["messages"] = std::move(messages);
        body["temperature"] = request.temperature;
        body["top_p"] = request.top_p;
        body["max_tokens"] = request.max_output_tokens;
        const std::string payload = body.dump();

        const int attempts = std::max(1, config.retry.max_attempts);
        double backoff_ms = config.retry.initial_backoff_ms;
        int last_status = 0;
        bool timed_out = false;
        for (int attempt = 0; attempt < attempts; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(
                    std::chrono::milliseconds(static_cast<long>(backoff_ms)));
                backoff_ms *= config.retry.backoff_multiplier;
            }
            const auto started = std::chrono::steady_clock::now();
            httplib::Result res = http.Post(url.path, headers, payload, "application/json");
            const auto elapsed = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
            if (!res) {
                timed_out = true;  // connection failures and timeouts are retryable
                continue;
            }
            last_status = res->status;
            timed_out = false;
            if (res->status == 429 || res->status >= 500) continue;
            if (res->status == 401 || res->status == 403)
                throw AuthError("endpoint rejected credentials (HTTP " +
                                std::to_string(res->status) + ")");
            if (res->status >= 400) {
                if (res->body.find("context_length_exceeded") != std::string::npos ||
                    res->body.find("maximum context length") != std::string::npos)
                    throw ContextOverflow("prompt exceeds the model context window");
                throw ClientError("HTTP " + std::to_string(res->status) + ": " + res->body);
            }
            return parse_response(request, res->body, elapsed);
        }
        if (timed_out) throw Timeout("endpoint unreachable after retries: " + config.endpoint);
        if (last_status == 429) throw RateLimited("rate limited after retries");
        throw ClientError("endpoint failed after retries (HTTP " + std::to_string(last_status) +
                          ")");
    }

  private:
    static CompletionRecord parse_response(const Request& request, const std::string& body,
                                           double latency_ms) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception&) {
            throw MalformedResponse("response body is not JSON");
        }
        CompletionRecord rec;
        rec.request_hash = request_hash(request);
        rec.model_name = request.model_name;
        rec.prompt_text = request.user_text;
        try {
            rec.response_text =
                j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw MalformedResponse("response lacks choices[0].message.content");
        }
        if (j.contains("usage") && j["usage"].contains("prompt_tokens") &&
            j["usage"].contains("completion_tokens")) {
            rec.prompt_tokens = j["usage"]["prompt_tokens"].get<std::int64_t>();
            rec.output_tokens = j["usage"]["completion_tokens"].get<std::int64_t>();
        } else {
            rec.prompt_tokens = estimate_tokens(rec.prompt_text);
            rec.output_tokens = estimate_tokens(rec.response_text);
            rec.tokens_estimated = true;
        }
        rec.latency_ms = latency_ms;
        rec.provenance = "live";
        rec.timestamp = static_cast<std::int64_t>(std::time(nullptr));
        return rec;
    }
};

}  // namespace codesim
