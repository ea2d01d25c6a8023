#pragma once

// Chat-completion access: a provider interface with an HTTP adapter for
// de-facto chat-completions endpoints, deterministic mock providers for
// hermetic experiments, and an append-only record/replay completion cache.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "codesim/errors.hpp"
#include "codesim/hashing.hpp"
#include "codesim/prompts.hpp"
#include "codesim/rng.hpp"
#include "codesim/value.hpp"

namespace codesim {

struct RetryPolicy {
    int max_attempts = 3;
    int initial_backoff_ms = 500;
    double backoff_multiplier = 2.0;
};

struct ModelConfig {
    std::string provider_id;  // "http-chat" or "mock:<kind>"
    std::string model_name;
    double temperature = 0.0;
    double top_p = 1.0;
    int max_output_tokens = 2048;
    std::string endpoint;  // full URL, e.g. https://api.example.com/v1/chat/completions
    std::string auth_env;  // environment variable holding the bearer token
    int timeout_ms = 120000;
    RetryPolicy retry;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["provider_id"] = provider_id;
        j["model_name"] = model_name;
        j["temperature"] = temperature;
        j["top_p"] = top_p;
        j["max_output_tokens"] = max_output_tokens;
        j["endpoint"] = endpoint;
        j["auth_env"] = auth_env;
        j["timeout_ms"] = timeout_ms;
        j["retry"] = {{"max_attempts", retry.max_attempts},
                      {"initial_backoff_ms", retry.initial_backoff_ms},
                      {"backoff_multiplier", retry.backoff_multiplier}};
        return j;
    }

    static ModelConfig from_json(const nlohmann::json& j) {
        ModelConfig c;
        c.provider_id = j.value("provider_id", std::string("http-chat"));
        c.model_name = j.at("model_name").get<std::string>();
        c.temperature = j.value("temperature", 0.0);
        c.top_p = j.value("top_p", 1.0);
        c.max_output_tokens = j.value("max_output_tokens", 2048);
        c.endpoint = j.value("endpoint", std::string());
        c.auth_env = j.value("auth_env", std::string());
        c.timeout_ms = j.value("timeout_ms", 120000);
        if (j.contains("retry")) {
            const auto& r = j.at("retry");
            c.retry.max_attempts = r.value("max_attempts", 3);
            c.retry.initial_backoff_ms = r.value("initial_backoff_ms", 500);
            c.retry.backoff_multiplier = r.value("backoff_multiplier", 2.0);
        }
        if (c.temperature < 0.0) throw ConfigError("temperature must be non-negative");
        return c;
    }
};

// One logical completion request. sample_index separates otherwise identical
// self-consistency votes so each vote is cached (and replayed) independently.
struct Request {
    std::string model_name;
    double temperature = 0.0;
    double top_p = 1.0;
    int max_output_tokens = 2048;
    std::optional<std::string> system_text;
    std::string user_text;
    int sample_index = 0;
    std::string instance_id;  // metadata for mock providers; not part of the hash identity
};

namespace detail {

inline std::string format_param(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace detail

// Content hash identifying a request: model, sampling parameters, the full
// prompt, and the vote index. Stable across runs and platforms.
inline std::string request_hash(const Request& r) {
    HashWriter w;
    w.add("request");
    w.add(r.model_name);
    w.add(detail::format_param(r.temperature));
    w.add(detail::format_param(r.top_p));
    w.add_i64(r.max_output_tokens);
    w.add(r.system_text ? *r.system_text : std::string());
    w.add(r.system_text ? "with_system" : "no_system");
    w.add(r.user_text);
    w.add_i64(r.sample_index);
    return hex64(w.value());
}

struct CompletionRecord {
    std::string request_hash;
    std::string model_name;
    std::string prompt_text;
    std::string response_text;
    std::int64_t prompt_tokens = 0;
    std::int64_t output_tokens = 0;
    bool tokens_estimated = false;
    double latency_ms = 0.0;
    std::string provenance;  // "live" | "cache" | "mock"
    std::int64_t timestamp = 0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["request_hash"] = request_hash;
        j["model_name"] = model_name;
        j["prompt_text"] = prompt_text;
        j["response_text"] = response_text;
        j["prompt_tokens"] = prompt_tokens;
        j["output_tokens"] = output_tokens;
        j["tokens_estimated"] = tokens_estimated;
        j["latency_ms"] = latency_ms;
        j["provenance"] = provenance;
        j["timestamp"] = timestamp;
        return j;
    }

    static CompletionRecord from_json(const nlohmann::json& j) {
        CompletionRecord r;
        r.request_hash = j.at("request_hash").get<std::string>();
        r.model_name = j.at("model_name").get<std::string>();
        r.prompt_text = j.at("prompt_text").get<std::string>();
        r.response_text = j.at("response_text").get<std::string>();
        r.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
        r.output_tokens = j.at("output_tokens").get<std::int64_t>();
        r.tokens_estimated = j.value("tokens_estimated", false);
        r.latency_ms = j.at("latency_ms").get<double>();
        r.provenance = j.at("provenance").get<std::string>();
        r.timestamp = j.at("timestamp").get<std::int64_t>();
        return r;
    }
};

// Crude token estimate used when a provider reports no usage numbers:
// whitespace-delimited words.
inline std::int64_t estimate_tokens(std::string_view text) {
    std::int64_t count = 0;
    bool in_word = false;
    for (char c : text) {
        const bool ws = c == ' ' || c == '\n' || c == '\t' || c == '\r';
        if (!ws && !in_word) ++count;
        in_word = !ws;
    }
    return count;
}

class Provider {
  public:
    virtual ~Provider() = default;
    virtual std::string name() const = 0;
    virtual CompletionRecord complete(const ModelConfig& config, const Request& request) = 0;
};

// --- Mock providers ----------------------------------------------------------

// Looks up the expected answer for the instance a request was built from.
using GroundTruthResolver = std::function<std::optional<Value>(const std::string& instance_id)>;

namespace detail {

inline CompletionRecord finish_mock_record(const Request& request, std::string response,
                                           const std::string& hash) {
    CompletionRecord rec;
    rec.request_hash = hash;
    rec.model_name = request.model_name;
    rec.prompt_text = request.user_text;
    rec.response_text = std::move(response);
    rec.prompt_tokens = estimate_tokens(rec.prompt_text);
    rec.output_tokens = estimate_tokens(rec.response_text);
    rec.tokens_estimated = true;
    rec.latency_ms = 0.0;
    rec.provenance = "mock";
    rec.timestamp = 0;  // fixed epoch keeps mock transcripts byte-stable
    return rec;
}

inline Value resolve_truth(const GroundTruthResolver& resolver, const Request& request) {
    if (!resolver) throw ConfigError("mock provider needs a ground-truth resolver");
    auto truth = resolver(request.instance_id);
    if (!truth) throw ConfigError("mock provider has no answer for instance " + request.instance_id);
    return *truth;
}

}  // namespace detail

// Always answers correctly, inside result tags.
class OracleMock : public Provider {
  public:
    explicit OracleMock(GroundTruthResolver resolver) : resolver_(std::move(resolver)) {}
    std::string name() const override { return "mock:oracle"; }
    CompletionRecord complete(const ModelConfig&, const Request& request) override {
        const Value truth = detail::resolve_truth(resolver_, request);
        return detail::finish_mock_record(
            request, "<result>" + truth.render() + "</result>", request_hash(request));
    }

  private:
    GroundTruthResolver resolver_;
};

// Perturbs each numeric independently with probability p by an offset in
// [1, 5]; booleans flip with probability p. Deterministic per request hash.
class CorruptMock : public Provider {
  public:
    CorruptMock(double p, GroundTruthResolver resolver) : p_(p), resolver_(std::move(resolver)) {
        if (p < 0.0 || p > 1.0) throw ConfigError("corruption probability must be in [0, 1]");
    }
    std::string name() const override { return "mock:corrupt(" + detail::format_param(p_) + ")"; }
    CompletionRecord complete(const ModelConfig&, const Request& request) override {
        const Value truth = detail::resolve_truth(resolver_, request);
        const std::string hash = request_hash(request);
        HashWriter w;
        w.add("mock-corrupt").add(hash);
        Rng rng(w.value());
        Value reply = truth;
        if (truth.is_int()) {
            if (rng.chance(p_)) reply = Value::integer(truth.as_int() + rng.uniform(1, 5));
        } else if (truth.is_list()) {
            std::vector<BigInt> xs = truth.as_list();
            for (auto& x : xs)
                if (rng.chance(p_)) x += rng.uniform(1, 5);
            reply = Value::list(std::move(xs));
        } else {
            if (rng.chance(p_)) reply = Value::boolean(!truth.as_bool());
        }
        return detail::finish_mock_record(request, "<result>" + reply.render() + "</result>",
                                          hash);
    }

  private:
    double p_;
    GroundTruthResolver resolver_;
};

// Answers list tasks with the right elements but drops one occurrence of the
// most-repeated element, the failure mode seen when a model reports a heavily
// duplicated value one time too few. Scalar tasks are answered truthfully.
class LazyMock : public Provider {
  public:
    explicit LazyMock(GroundTruthResolver resolver) : resolver_(std::move(resolver)) {}
    std::string name() const override { return "mock:lazy"; }
    CompletionRecord complete(const ModelConfig&, const Request& request) override {
        Value truth = detail::resolve_truth(resolver_, request);
        if (truth.is_list()) {
            std::vector<BigInt> xs = truth.as_list();
            // Longest run of equal adjacent elements, earliest on ties.
            std::size_t best_len = 1, best_at = 0, run = 1;
            for (std::size_t i = 1; i < xs.size(); ++i) {
                run = xs[i] == xs[i - 1] ? run + 1 : 1;
                if (run > best_len) {
                    best_len = run;
                    best_at = i;
                }
            }
            if (best_len > 1) xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(best_at));
            truth = Value::list(std::move(xs));
        }
        return detail::finish_mock_record(request, "<result>" + truth.render() + "</result>",
                                          request_hash(request));
    }

  private:
    GroundTruthResolver resolver_;
};

// Correct answer buried in prose with no tags, exercising the extraction
// fallback.
class SilentMock : public Provider {
  public:
    explicit SilentMock(GroundTruthResolver resolver) : resolver_(std::move(resolver)) {}
    std::string name() const override { return "mock:silent"; }
    CompletionRecord complete(const ModelConfig&, const Request& request) override {
        const Value truth = detail::resolve_truth(resolver_, request);
        std::string prose =
            "Stepping through the computation carefully, every update lands as written, "
            "so the final answer comes out to " +
            truth.render() + ".";
        return detail::finish_mock_record(request, std::move(prose), request_hash(request));
    }

  private:
    GroundTruthResolver resolver_;
};

// Builds a mock provider from its name: "oracle", "corrupt(p)", "lazy", or
// "silent" (optionally prefixed with "mock:").
inline std::unique_ptr<Provider> mock_provider(const std::string& kind,
                                               GroundTruthResolver resolver) {
    std::string name = kind;
    if (name.rfind("mock:", 0) == 0) name = name.substr(5);
    if (name == "oracle") return std::make_unique<OracleMock>(std::move(resolver));
    if (name == "lazy") return std::make_unique<LazyMock>(std::move(resolver));
    if (name == "silent") return std::make_unique<SilentMock>(std::move(resolver));
    if (name.rfind("corrupt(", 0) == 0 && name.back() == ')') {
        const std::string inner = name.substr(8, name.size() - 9);
        std::size_t used = 0;
        double p = 0.0;
        try {
            p = std::stod(inner, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad corruption probability: " + inner);
        }
        if (used != inner.size()) throw ConfigError("bad corruption probability: " + inner);
        return std::make_unique<CorruptMock>(p, std::move(resolver));
    }
    throw ConfigError("unknown mock provider: " + kind);
}

// --- Completion cache ---------------------------------------------------------

enum class CacheMode { Live, Record, Replay };

inline std::string cache_mode_name(CacheMode m) {
    switch (m) {
    case CacheMode::Live: return "live";
    case CacheMode::Record: return "record";
    case CacheMode::Replay: return "replay";
    }
    return "record";
}

inline CacheMode cache_mode_from_name(const std::string& name) {
    if (name == "live") return CacheMode::Live;
    if (name == "record") return CacheMode::Record;
    if (name == "replay") return CacheMode::Replay;
    throw ConfigError("unknown cache mode: " + name);
}

// Append-only JSONL store keyed by request hash. The first record stored for
// a hash wins; concurrent readers share the in-memory index under a mutex.
class CompletionCache {
  public:
    explicit CompletionCache(std::filesystem::path path) : path_(std::move(path)) {
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            CompletionRecord rec = CompletionRecord::from_json(nlohmann::json::parse(line));
            index_.emplace(rec.request_hash, std::move(rec));
        }
    }

    const std::filesystem::path& path() const { return path_; }

    std::optional<CompletionRecord> lookup(const std::string& hash) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = index_.find(hash);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    // Appends the record unless its hash is already present.
    void store(const CompletionRecord& rec) {
        std::lock_guard<std::mutex> lock(mu_);
        if (index_.count(rec.request_hash)) return;
        std::ofstream out(path_, std::ios::app);
        if (!out) throw ConfigError("cannot open cache file: " + path_.string());
        out << rec.to_json().dump() << "\n";
        index_.emplace(rec.request_hash, rec);
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return index_.size();
    }

  private:
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, CompletionRecord> index_;
};

// --- Client facade ------------------------------------------------------------

inline Request make_request(const ModelConfig& config, const PromptBundle& bundle) {
    Request r;
    r.model_name = config.model_name;
    // Self-consistency bundles carry their own sampling hint; everything else
    // runs at the configured (default zero) temperature.
    r.temperature = bundle.temperature != 0.0 ? bundle.temperature : config.temperature;
    r.top_p = config.top_p;
    r.max_output_tokens = config.max_output_tokens;
    r.system_text = bundle.system_text;
    r.user_text = bundle.user_text;
    r.sample_index = bundle.vote_index;
    r.instance_id = bundle.instance_id;
    return r;
}

// Routes completions through the cache according to the mode: Replay never
// touches the provider, Record consults the cache first, Live always calls
// out (still populating the cache when one is attached).
class Client {
  public:
    Client(std::shared_ptr<Provider> provider, std::shared_ptr<CompletionCache> cache,
           CacheMode mode)
        : provider_(std::move(provider)), cache_(std::move(cache)), mode_(mode) {
        if (mode_ == CacheMode::Replay && !cache_)
            throw ConfigError("replay mode requires a cache");
    }

    CacheMode mode() const { return mode_; }

    CompletionRecord complete(const ModelConfig& config, const PromptBundle& bundle) {
        const Request request = make_request(config, bundle);
        const std::string hash = request_hash(request);
        if (mode_ != CacheMode::Live && cache_) {
            if (auto hit = cache_->lookup(hash)) {
                hit->provenance = "cache";
                return *hit;
            }
            if (mode_ == CacheMode::Replay)
                throw CacheMiss("no cached completion for request " + hash);
        }
        if (!provider_) throw ConfigError("no provider configured for live completion");
        CompletionRecord rec = provider_->complete(config, request);
        if (cache_) cache_->store(rec);
        return rec;
    }

  private:
    std::shared_ptr<Provider> provider_;
    std::shared_ptr<CompletionCache> cache_;
    CacheMode mode_;
};

}  // namespace codesim
