#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace ragkit::providers {

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_id;
    std::size_t dim = 0;  // always equals values.size()
};

struct ChatRequest {
    std::string system_prompt;
    std::string user_prompt;
    double temperature = 0.0;
    int max_output_tokens = 1024;
};

struct ProviderConfig {
    std::string endpoint_url;
    std::string api_key_env_var;
    std::string model_name;
    std::chrono::milliseconds timeout{30000};
    int max_retries = 2;
    std::chrono::milliseconds backoff_base{100};
    int max_in_flight = 4;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string chat(const ChatRequest& req) = 0;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
    virtual std::size_t dim() const = 0;
    virtual std::string model_id() const = 0;

    EmbeddingVector embed_one(const std::string& text);
};

/// dot(a, b) / (|a|·|b|). Throws Error(argument) on dimension mismatch or a
/// zero vector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// Deterministic local embedder: whitespace tokens are hashed into a
/// dim-sized signed-count vector which is then L2-normalized. Same text,
/// same vector, on every platform.
class HashEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit HashEmbeddingProvider(std::size_t dim = 64);

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    std::size_t dim() const override { return dim_; }
    std::string model_id() const override { return model_id_; }

private:
    std::size_t dim_;
    std::string model_id_;
};

/// Replays canned responses keyed by a digest of the prompt pair. Unknown
/// prompts raise Error(fixture) carrying the digest, so test fixtures must
/// be exhaustive.
class ScriptedChatProvider final : public ChatProvider {
public:
    explicit ScriptedChatProvider(std::map<std::string, std::string> responses);
    static ScriptedChatProvider from_file(const std::filesystem::path& path);

    std::string chat(const ChatRequest& req) override;

    /// Digest of (system_prompt, user_prompt) after trimming outer
    /// whitespace of each part.
    static std::string key_for(const std::string& system_prompt,
                               const std::string& user_prompt);
    static std::string key_for(const ChatRequest& req);

    static void save_fixture(const std::map<std::string, std::string>& responses,
                             const std::filesystem::path& path);

    std::size_t size() const { return responses_.size(); }

private:
    std::map<std::string, std::string> responses_;
};

/// Wraps another provider and records every (digest, response) pair that
/// flows through it; used to produce scripted fixtures from a live pass.
class RecordingChatProvider final : public ChatProvider {
public:
    RecordingChatProvider(ChatProvider& inner, std::map<std::string, std::string>& sink)
        : inner_(inner), sink_(sink) {}

    std::string chat(const ChatRequest& req) override;

private:
    ChatProvider& inner_;
    std::map<std::string, std::string>& sink_;
    std::mutex mutex_;
};

/// JSON-over-HTTP chat client (POST {endpoint}/chat/completions). Retries
/// transport failures with exponential backoff and jitter.
class WireChatProvider final : public ChatProvider {
public:
    explicit WireChatProvider(ProviderConfig config);
    ~WireChatProvider() override;

    std::string chat(const ChatRequest& req) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// JSON-over-HTTP embeddings client (POST {endpoint}/embeddings).
class WireEmbeddingProvider final : public EmbeddingProvider {
public:
    WireEmbeddingProvider(ProviderConfig config, std::size_t expected_dim);
    ~WireEmbeddingProvider() override;

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    std::size_t dim() const override;
    std::string model_id() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ragkit::providers
