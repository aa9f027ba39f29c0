#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gateway/prompts.hpp"

namespace kpforge::gateway {

using json = nlohmann::json;

enum class Role { system, user, assistant };

struct Message {
    Role role = Role::user;
    std::string content;
};

struct ChatRequest {
    std::string template_name;  // catalog template behind this request
    std::vector<Message> messages;
    double temperature = 0.0;
    double top_p = 1.0;
    int n_samples = 1;
    int max_tokens = 2048;
    std::optional<long long> seed_hint;

    void validate() const;  // throws std::invalid_argument
    json to_json() const;
};

// Exact-match key over (template, rendered prompt, temperature, top_p,
// n_samples, sample index). sample_index -1 keys the whole request; per-index
// keys seed the mock's per-sample content.
struct CacheKey {
    std::string digest;

    static CacheKey for_request(const ChatRequest& req);
    static CacheKey for_sample(const ChatRequest& req, int sample_index);
    static CacheKey for_embed(const std::vector<std::string>& texts, int dim);
};

// Backend interface: live HTTP, deterministic mock, or scripted (tests).
class Provider {
public:
    virtual ~Provider() = default;
    virtual std::vector<std::string> chat(const ChatRequest& req) = 0;
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

enum class ProviderMode { live, mock, replay };

ProviderMode provider_mode_from_string(const std::string& s);
std::string to_string(ProviderMode m);

struct GatewayConfig {
    ProviderMode mode = ProviderMode::mock;
    std::string cache_path;       // required for replay; enables record elsewhere
    long long max_calls = 1'000'000'000;
    int embed_dim = 16;           // mock embedding dimension
    int retries = 3;
    int backoff_initial_ms = 1000;
    int max_in_flight = 8;
    std::string base_url;         // live provider, overridden by env
    std::string api_key_env = "KPFORGE_API_KEY";
    std::string base_url_env = "KPFORGE_BASE_URL";
    std::string model = "gpt-4";
};

// Append-only JSON Lines response cache keyed by request digest. Loaded into
// memory at startup; writes are serialized.
class ResponseCache {
public:
    void load(const std::filesystem::path& path);  // missing file = empty cache
    void attach(const std::filesystem::path& path);
    std::optional<std::vector<std::string>> lookup(const std::string& digest) const;
    void store(const std::string& digest, const json& request, const std::vector<std::string>& responses);
    size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::vector<std::string>> entries_;
    std::filesystem::path path_;
};

// Uniform access to chat-completion and embedding backends with budget
// accounting, bounded retries and record/replay.
class Gateway {
public:
    explicit Gateway(GatewayConfig config);
    Gateway(GatewayConfig config, std::unique_ptr<Provider> provider);

    // Returns exactly req.n_samples completions.
    std::vector<std::string> chat(const ChatRequest& req);

    // One vector per input text, all sharing one dimension d >= 2.
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts);

    long long calls_made() const;
    void preload_call_count(long long already_made);  // resume support
    const GatewayConfig& config() const { return config_; }

    // injectable sleep so retry tests do not stall
    void set_sleep_fn(std::function<void(int)> fn) { sleep_ms_ = std::move(fn); }

private:
    void charge_one_call();
    std::vector<std::string> chat_with_retries(const ChatRequest& req);

    GatewayConfig config_;
    std::unique_ptr<Provider> provider_;
    ResponseCache cache_;
    bool cache_enabled_ = false;
    mutable std::mutex mu_;
    long long calls_made_ = 0;
    std::function<void(int)> sleep_ms_;
};

// Deterministic mock: template-aware canned completions parameterized by the
// sample CacheKey, and hash-seeded unit embedding vectors.
std::unique_ptr<Provider> make_mock_provider(int embed_dim);

// OpenAI-compatible chat/embeddings client over HTTPS.
std::unique_ptr<Provider> make_http_provider(const GatewayConfig& config);

// Fixed response script for tests: each chat() pops the next entry.
class ScriptedProvider : public Provider {
public:
    explicit ScriptedProvider(std::vector<std::vector<std::string>> chat_script,
                              std::vector<std::vector<std::vector<double>>> embed_script = {});
    std::vector<std::string> chat(const ChatRequest& req) override;
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

private:
    std::vector<std::vector<std::string>> chat_script_;
    std::vector<std::vector<std::vector<double>>> embed_script_;
    size_t chat_at_ = 0;
    size_t embed_at_ = 0;
    std::mutex mu_;
};

}  // namespace kpforge::gateway
