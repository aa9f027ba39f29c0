#include "gateway/gateway.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include "util/errors.hpp"
#include "util/hash.hpp"
#include "util/jsonl.hpp"

namespace kpforge::gateway {

namespace {

const char* role_name(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        default: return "assistant";
    }
}

std::string canonical_payload(const ChatRequest& req, int sample_index) {
    json j;
    j["template"] = req.template_name;
    json msgs = json::array();
    for (const auto& m : req.messages) msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
    j["messages"] = std::move(msgs);
    j["temperature"] = req.temperature;
    j["top_p"] = req.top_p;
    j["n_samples"] = req.n_samples;
    j["sample_index"] = sample_index;
    if (req.seed_hint) j["seed_hint"] = *req.seed_hint;
    return j.dump();
}

}  // namespace

void ChatRequest::validate() const {
    if (messages.empty()) throw std::invalid_argument("chat request has no messages");
    if (messages.front().role == Role::assistant)
        throw std::invalid_argument("first message role must be system or user");
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
    if (!(top_p > 0.0 && top_p <= 1.0)) throw std::invalid_argument("top_p must be in (0, 1]");
    if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
}

json ChatRequest::to_json() const {
    json j = json::parse(canonical_payload(*this, -1));
    j.erase("sample_index");
    return j;
}

CacheKey CacheKey::for_request(const ChatRequest& req) {
    return CacheKey{hash::digest_hex(canonical_payload(req, -1))};
}

CacheKey CacheKey::for_sample(const ChatRequest& req, int sample_index) {
    return CacheKey{hash::digest_hex(canonical_payload(req, sample_index))};
}

CacheKey CacheKey::for_embed(const std::vector<std::string>& texts, int dim) {
    json j;
    j["op"] = "embed";
    j["dim"] = dim;
    j["texts"] = texts;
    return CacheKey{hash::digest_hex(j.dump())};
}

ProviderMode provider_mode_from_string(const std::string& s) {
    if (s == "live") return ProviderMode::live;
    if (s == "mock") return ProviderMode::mock;
    if (s == "replay") return ProviderMode::replay;
    throw ConfigInvalid("unknown provider mode: " + s);
}

std::string to_string(ProviderMode m) {
    switch (m) {
        case ProviderMode::live: return "live";
        case ProviderMode::mock: return "mock";
        default: return "replay";
    }
}

void ResponseCache::load(const std::filesystem::path& path) {
    std::lock_guard lock(mu_);
    path_ = path;
    entries_.clear();
    if (!std::filesystem::exists(path)) return;
    jsonl::for_each_line(path, [&](const json& j, size_t lineno) {
        if (!j.contains("digest") || !j.contains("responses"))
            throw ManifestCorrupt(path.string() + ":" + std::to_string(lineno) + ": bad cache line");
        entries_[j.at("digest").get<std::string>()] = j.at("responses").get<std::vector<std::string>>();
    });
}

void ResponseCache::attach(const std::filesystem::path& path) {
    std::lock_guard lock(mu_);
    path_ = path;
}

std::optional<std::vector<std::string>> ResponseCache::lookup(const std::string& digest) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(digest);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResponseCache::store(const std::string& digest, const json& request,
                          const std::vector<std::string>& responses) {
    std::lock_guard lock(mu_);
    if (entries_.count(digest)) return;
    entries_[digest] = responses;
    if (path_.empty()) return;
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    json line;
    line["digest"] = digest;
    line["request"] = request;
    line["responses"] = responses;
    line["created_at"] = static_cast<long long>(
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
            .count());
    std::ofstream out(path_, std::ios::app);
    if (!out) throw ProviderError("cannot append to cache file " + path_.string());
    out << line.dump() << "\n";
}

size_t ResponseCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

Gateway::Gateway(GatewayConfig config) : Gateway(std::move(config), nullptr) {}

Gateway::Gateway(GatewayConfig config, std::unique_ptr<Provider> provider)
    : config_(std::move(config)), provider_(std::move(provider)) {
    sleep_ms_ = [](int ms) { std::this_thread::sleep_for(std::chrono::milliseconds(ms)); };
    if (!provider_) {
        switch (config_.mode) {
            case ProviderMode::mock: provider_ = make_mock_provider(config_.embed_dim); break;
            case ProviderMode::live: provider_ = make_http_provider(config_); break;
            case ProviderMode::replay: break;  // cache only
        }
    }
    if (config_.mode == ProviderMode::replay) {
        if (config_.cache_path.empty()) throw ConfigInvalid("replay mode requires a cache_path");
        cache_.load(config_.cache_path);
        cache_enabled_ = true;
    } else if (!config_.cache_path.empty()) {
        cache_.load(config_.cache_path);  // resume partial recordings
        cache_.attach(config_.cache_path);
        cache_enabled_ = true;
    }
}

void Gateway::charge_one_call() {
    std::lock_guard lock(mu_);
    if (calls_made_ + 1 > config_.max_calls)
        throw BudgetExceeded("provider call ceiling of " + std::to_string(config_.max_calls) + " reached");
    ++calls_made_;
}

long long Gateway::calls_made() const {
    std::lock_guard lock(mu_);
    return calls_made_;
}

void Gateway::preload_call_count(long long already_made) {
    std::lock_guard lock(mu_);
    calls_made_ = already_made;
}

std::vector<std::string> Gateway::chat_with_retries(const ChatRequest& req) {
    int attempts = std::max(1, config_.retries);
    int backoff = config_.backoff_initial_ms;
    for (int attempt = 1;; ++attempt) {
        try {
            return provider_->chat(req);
        } catch (const ProviderTransportError&) {
            // only transport failures retry; malformed content propagates
            if (attempt >= attempts) throw;
            sleep_ms_(backoff);
            backoff *= 2;
        }
    }
}

std::vector<std::string> Gateway::chat(const ChatRequest& req) {
    req.validate();
    const CacheKey key = CacheKey::for_request(req);

    if (cache_enabled_) {
        if (auto hit = cache_.lookup(key.digest)) return *hit;
    }
    if (config_.mode == ProviderMode::replay)
        throw CacheMiss("request " + key.digest + " absent from replay cache");

    charge_one_call();
    std::vector<std::string> responses = chat_with_retries(req);
    if (static_cast<int>(responses.size()) != req.n_samples)
        throw ProviderError("provider returned " + std::to_string(responses.size()) + " completions, expected " +
                            std::to_string(req.n_samples));
    if (cache_enabled_) cache_.store(key.digest, req.to_json(), responses);
    return responses;
}

std::vector<std::vector<double>> Gateway::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw std::invalid_argument("embed: texts must be non-empty");
    for (const auto& t : texts)
        if (t.find_first_not_of(" \t\r\n") == std::string::npos)
            throw std::invalid_argument("embed: blank text");

    const CacheKey key = CacheKey::for_embed(texts, config_.embed_dim);
    auto decode = [](const std::vector<std::string>& blobs) {
        std::vector<std::vector<double>> vecs;
        vecs.reserve(blobs.size());
        for (const auto& blob : blobs) vecs.push_back(json::parse(blob).get<std::vector<double>>());
        return vecs;
    };

    if (cache_enabled_) {
        if (auto hit = cache_.lookup(key.digest)) return decode(*hit);
    }
    if (config_.mode == ProviderMode::replay)
        throw CacheMiss("embedding " + key.digest + " absent from replay cache");

    charge_one_call();
    std::vector<std::vector<double>> vecs = provider_->embed(texts);
    if (vecs.size() != texts.size()) throw ProviderError("embedding count mismatch");
    size_t dim = vecs.empty() ? 0 : vecs.front().size();
    if (dim < 2) throw DimensionMismatch("embedding dimension must be >= 2");
    for (const auto& v : vecs)
        if (v.size() != dim) throw DimensionMismatch("provider returned ragged embedding vectors");

    if (cache_enabled_) {
        std::vector<std::string> blobs;
        blobs.reserve(vecs.size());
        for (const auto& v : vecs) blobs.push_back(json(v).dump());
        json request;
        request["op"] = "embed";
        request["texts"] = texts;
        cache_.store(key.digest, request, blobs);
    }
    return vecs;
}

ScriptedProvider::ScriptedProvider(std::vector<std::vector<std::string>> chat_script,
                                   std::vector<std::vector<std::vector<double>>> embed_script)
    : chat_script_(std::move(chat_script)), embed_script_(std::move(embed_script)) {}

std::vector<std::string> ScriptedProvider::chat(const ChatRequest& req) {
    std::lock_guard lock(mu_);
    if (chat_at_ >= chat_script_.size()) throw ProviderError("scripted provider: chat script exhausted");
    auto out = chat_script_[chat_at_++];
    if (static_cast<int>(out.size()) == 1 && req.n_samples > 1)
        out.resize(static_cast<size_t>(req.n_samples), out.front());
    return out;
}

std::vector<std::vector<double>> ScriptedProvider::embed(const std::vector<std::string>& texts) {
    std::lock_guard lock(mu_);
    if (embed_at_ >= embed_script_.size()) throw ProviderError("scripted provider: embed script exhausted");
    auto out = embed_script_[embed_at_++];
    if (out.size() != texts.size()) throw ProviderError("scripted provider: embed arity mismatch");
    return out;
}

}  // namespace kpforge::gateway
