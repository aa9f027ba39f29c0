#include <cstdlib>

#include <httplib.h>

#include "gateway/gateway.hpp"
#include "util/errors.hpp"

namespace kpforge::gateway {

namespace {

const char* role_name(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        default: return "assistant";
    }
}

// OpenAI-compatible chat-completions/embeddings client. Connection failures
// and 5xx responses surface as transport errors (retryable); everything else
// is terminal.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(const GatewayConfig& config) : config_(config) {
        if (const char* env = std::getenv(config.base_url_env.c_str())) base_url_ = env;
        else base_url_ = config.base_url;
        if (base_url_.empty())
            throw ConfigInvalid("live provider needs base_url or $" + config.base_url_env);
        if (const char* key = std::getenv(config.api_key_env.c_str())) api_key_ = key;
        if (api_key_.empty()) throw ConfigInvalid("live provider needs $" + config.api_key_env);
    }

    std::vector<std::string> chat(const ChatRequest& req) override {
        json body;
        body["model"] = config_.model;
        json msgs = json::array();
        for (const auto& m : req.messages) msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
        body["messages"] = std::move(msgs);
        body["temperature"] = req.temperature;
        body["top_p"] = req.top_p;
        body["n"] = req.n_samples;
        body["max_tokens"] = req.max_tokens;
        if (req.seed_hint) body["seed"] = *req.seed_hint;

        json resp = post("/v1/chat/completions", body);
        std::vector<std::string> out;
        if (!resp.contains("choices") || !resp["choices"].is_array())
            throw ProviderError("chat response lacks choices array");
        out.resize(resp["choices"].size());
        for (const auto& choice : resp["choices"]) {
            size_t idx = choice.value("index", out.size() ? out.size() - 1 : 0);
            if (idx >= out.size()) throw ProviderError("chat response choice index out of range");
            out[idx] = choice.at("message").at("content").get<std::string>();
        }
        return out;
    }

    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
        json body;
        body["model"] = "text-embedding-ada-002";
        body["input"] = texts;
        json resp = post("/v1/embeddings", body);
        if (!resp.contains("data") || !resp["data"].is_array())
            throw ProviderError("embedding response lacks data array");
        std::vector<std::vector<double>> out(resp["data"].size());
        for (const auto& row : resp["data"]) {
            size_t idx = row.value("index", size_t{0});
            if (idx >= out.size()) throw ProviderError("embedding index out of range");
            out[idx] = row.at("embedding").get<std::vector<double>>();
        }
        return out;
    }

private:
    json post(const std::string& path, const json& body) {
        httplib::Client client(base_url_);
        client.set_read_timeout(120, 0);
        client.set_connection_timeout(15, 0);
        httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
        auto result = client.Post(path, headers, body.dump(), "application/json");
        if (!result)
            throw ProviderTransportError("POST " + path + ": " + httplib::to_string(result.error()));
        if (result->status >= 500)
            throw ProviderTransportError("POST " + path + ": HTTP " + std::to_string(result->status));
        if (result->status != 200)
            throw ProviderError("POST " + path + ": HTTP " + std::to_string(result->status) + " " +
                                result->body.substr(0, 300));
        json parsed = json::parse(result->body, nullptr, false);
        if (parsed.is_discarded()) throw ProviderError("provider returned invalid JSON");
        return parsed;
    }

    GatewayConfig config_;
    std::string base_url_;
    std::string api_key_;
};

}  // namespace

std::unique_ptr<Provider> make_http_provider(const GatewayConfig& config) {
    return std::make_unique<HttpProvider>(config);
}

}  // namespace kpforge::gateway
