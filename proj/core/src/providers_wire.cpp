#include <cstdlib>
#include <random>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ragkit/error.hpp"
#include "ragkit/providers.hpp"

namespace ragkit::providers {

namespace {

using nlohmann::json;

struct Endpoint {
    std::string base;    // scheme://host:port
    std::string prefix;  // path prefix, possibly empty
};

Endpoint parse_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorKind::argument, "endpoint_url must include a scheme: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    std::string prefix = url.substr(path_start);
    if (prefix == "/") prefix.clear();
    return {url.substr(0, path_start), prefix};
}

bool debug_http() {
    const char* flag = std::getenv("RAGKIT_DEBUG_HTTP");
    return flag != nullptr && *flag != '\0' && std::string_view(flag) != "0";
}

// Shared transport: bounded in-flight requests, retries with exponential
// backoff and jitter, bearer auth from the configured env var.
class HttpSession {
public:
    explicit HttpSession(ProviderConfig config)
        : config_(std::move(config)),
          endpoint_(parse_endpoint(config_.endpoint_url)),
          client_(endpoint_.base),
          slots_(std::max(1, config_.max_in_flight)),
          jitter_rng_(0x9e3779b97f4a7c15ull) {
        client_.set_connection_timeout(config_.timeout);
        client_.set_read_timeout(config_.timeout);
        client_.set_write_timeout(config_.timeout);
        if (!config_.api_key_env_var.empty()) {
            if (const char* key = std::getenv(config_.api_key_env_var.c_str())) {
                client_.set_default_headers({{"Authorization", std::string("Bearer ") + key}});
            }
        }
    }

    json post(const std::string& path, const json& body) {
        slots_.acquire();
        struct Release {
            std::counting_semaphore<>& s;
            ~Release() { s.release(); }
        } release{slots_};

        const std::string payload = body.dump();
        const std::string full_path = endpoint_.prefix + path;
        if (debug_http()) {
            fprintf(stderr, "[http] POST %s%s body=%s\n", endpoint_.base.c_str(),
                    full_path.c_str(), payload.c_str());
        }

        std::string last_failure;
        const int attempts = config_.max_retries + 1;
        for (int attempt = 0; attempt < attempts; ++attempt) {
            if (attempt > 0) backoff(attempt);
            auto res = client_.Post(full_path, payload, "application/json");
            if (!res) {
                last_failure = "transport: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status < 200 || res->status >= 300) {
                last_failure = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (debug_http()) {
                fprintf(stderr, "[http] %d %s\n", res->status, res->body.c_str());
            }
            try {
                return json::parse(res->body);
            } catch (const json::exception& e) {
                throw Error(ErrorKind::protocol,
                            "response from " + full_path + " is not JSON: " + e.what());
            }
        }
        throw Error(ErrorKind::provider, "POST " + full_path + " failed after " +
                                             std::to_string(attempts) +
                                             " attempts (" + last_failure + ")");
    }

    const ProviderConfig& config() const { return config_; }

private:
    void backoff(int attempt) {
        auto base = config_.backoff_base.count();
        std::int64_t jitter = 0;
        {
            std::lock_guard lock(rng_mutex_);
            if (base > 0) jitter = static_cast<std::int64_t>(jitter_rng_() % base);
        }
        auto delay = base * (1ll << (attempt - 1)) + jitter;
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }

    ProviderConfig config_;
    Endpoint endpoint_;
    httplib::Client client_;
    std::counting_semaphore<> slots_;
    std::mt19937_64 jitter_rng_;
    std::mutex rng_mutex_;
};

}  // namespace

struct WireChatProvider::Impl {
    explicit Impl(ProviderConfig config) : session(std::move(config)) {}
    HttpSession session;
};

WireChatProvider::WireChatProvider(ProviderConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

WireChatProvider::~WireChatProvider() = default;

std::string WireChatProvider::chat(const ChatRequest& req) {
    if (req.user_prompt.empty() || req.system_prompt.empty()) {
        throw Error(ErrorKind::argument, "chat prompts must be non-empty");
    }
    json body = {
        {"model", impl_->session.config().model_name},
        {"messages",
         json::array({{{"role", "system"}, {"content", req.system_prompt}},
                      {{"role", "user"}, {"content", req.user_prompt}}})},
        {"temperature", req.temperature},
        {"max_tokens", req.max_output_tokens},
    };
    json res = impl_->session.post("/chat/completions", body);
    if (!res.contains("choices") || !res["choices"].is_array() || res["choices"].empty()) {
        throw Error(ErrorKind::protocol, "chat response carries no choices");
    }
    const json& msg = res["choices"][0];
    if (!msg.contains("message") || !msg["message"].contains("content")) {
        throw Error(ErrorKind::protocol, "chat choice carries no message content");
    }
    return msg["message"]["content"].get<std::string>();
}

struct WireEmbeddingProvider::Impl {
    Impl(ProviderConfig config, std::size_t expected_dim)
        : session(std::move(config)), dim(expected_dim) {}
    HttpSession session;
    std::size_t dim;  // 0 until discovered from the first response
    std::string model_id;
};

WireEmbeddingProvider::WireEmbeddingProvider(ProviderConfig config, std::size_t expected_dim)
    : impl_(std::make_unique<Impl>(std::move(config), expected_dim)) {
    impl_->model_id = impl_->session.config().model_name;
}

WireEmbeddingProvider::~WireEmbeddingProvider() = default;

std::size_t WireEmbeddingProvider::dim() const { return impl_->dim; }

std::string WireEmbeddingProvider::model_id() const { return impl_->model_id; }

std::vector<EmbeddingVector> WireEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    if (texts.empty()) {
        throw Error(ErrorKind::argument, "embed requires at least one text");
    }
    for (const std::string& t : texts) {
        if (t.find_first_not_of(" \t\r\n") == std::string::npos) {
            throw Error(ErrorKind::argument, "cannot embed blank text");
        }
    }
    json body = {
        {"model", impl_->session.config().model_name},
        {"input", texts},
    };
    json res = impl_->session.post("/embeddings", body);
    if (!res.contains("data") || !res["data"].is_array() ||
        res["data"].size() != texts.size()) {
        throw Error(ErrorKind::protocol,
                    "embeddings response must carry one data row per input");
    }
    if (res.contains("model") && res["model"].is_string()) {
        impl_->model_id = res["model"].get<std::string>();
    }
    std::vector<EmbeddingVector> out(texts.size());
    for (const json& row : res["data"]) {
        if (!row.contains("embedding") || !row["embedding"].is_array()) {
            throw Error(ErrorKind::protocol, "embeddings data row lacks an embedding");
        }
        std::size_t index = row.value("index", out.size());
        if (index >= out.size()) {
            throw Error(ErrorKind::protocol, "embeddings data row index out of range");
        }
        EmbeddingVector v;
        v.values = row["embedding"].get<std::vector<double>>();
        v.dim = v.values.size();
        v.model_id = impl_->model_id;
        if (impl_->dim == 0) impl_->dim = v.dim;
        if (v.dim != impl_->dim) {
            throw Error(ErrorKind::protocol,
                        "embedding dimension mismatch across batch: " +
                            std::to_string(v.dim) + " vs " + std::to_string(impl_->dim));
        }
        out[index] = std::move(v);
    }
    return out;
}

}  // namespace ragkit::providers
