#include "ragkit/providers.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ragkit/digest.hpp"
#include "ragkit/error.hpp"

namespace ragkit {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::load: return "load";
        case ErrorKind::validation: return "validation";
        case ErrorKind::argument: return "argument";
        case ErrorKind::provider: return "provider";
        case ErrorKind::protocol: return "protocol";
        case ErrorKind::fixture: return "fixture";
        case ErrorKind::format: return "format";
        case ErrorKind::extraction: return "extraction";
        case ErrorKind::metric: return "metric";
        case ErrorKind::schema: return "schema";
        case ErrorKind::state: return "state";
    }
    return "unknown";
}

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace ragkit

namespace ragkit::providers {

namespace {

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool is_blank(const std::string& s) { return trimmed(s).empty(); }

}  // namespace

EmbeddingVector EmbeddingProvider::embed_one(const std::string& text) {
    auto out = embed({text});
    return std::move(out.front());
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim != b.dim) {
        throw Error(ErrorKind::argument,
                    "cosine dimension mismatch: " + std::to_string(a.dim) + " vs " +
                        std::to_string(b.dim));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw Error(ErrorKind::argument, "cosine similarity of a zero vector is undefined");
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) throw Error(ErrorKind::argument, "embedding dim must be positive");
    model_id_ = "hash-" + std::to_string(dim_);
}

std::vector<EmbeddingVector> HashEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    if (texts.empty()) {
        throw Error(ErrorKind::argument, "embed requires at least one text");
    }
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        if (is_blank(text)) {
            throw Error(ErrorKind::argument, "cannot embed blank text");
        }
        std::vector<double> v(dim_, 0.0);
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            std::size_t j = i;
            while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
            if (j > i) {
                std::uint64_t h = fnv1a64(std::string_view(text).substr(i, j - i));
                double sign = (h >> 32) & 1u ? 1.0 : -1.0;
                v[h % dim_] += sign;
            }
            i = j;
        }
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        if (norm_sq == 0.0) {
            // tokens cancelled each other out; keep the vector usable
            v[fnv1a64(text) % dim_] = 1.0;
            norm_sq = 1.0;
        }
        double norm = std::sqrt(norm_sq);
        for (double& x : v) x /= norm;
        out.push_back(EmbeddingVector{std::move(v), model_id_, dim_});
    }
    return out;
}

ScriptedChatProvider::ScriptedChatProvider(std::map<std::string, std::string> responses)
    : responses_(std::move(responses)) {}

ScriptedChatProvider ScriptedChatProvider::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::load, "cannot open chat fixture " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::format,
                    "chat fixture " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.contains("responses") || !doc["responses"].is_object()) {
        throw Error(ErrorKind::format,
                    "chat fixture " + path.string() + " lacks a 'responses' object");
    }
    std::map<std::string, std::string> responses;
    for (const auto& [key, value] : doc["responses"].items()) {
        responses[key] = value.get<std::string>();
    }
    return ScriptedChatProvider(std::move(responses));
}

void ScriptedChatProvider::save_fixture(const std::map<std::string, std::string>& responses,
                                        const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["responses"] = responses;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::load, "cannot write chat fixture " + path.string());
    }
    out << doc.dump(1) << '\n';
}

std::string ScriptedChatProvider::key_for(const std::string& system_prompt,
                                          const std::string& user_prompt) {
    std::string joined(trimmed(system_prompt));
    joined += '\x1f';
    joined += trimmed(user_prompt);
    return to_hex(fnv1a64(joined));
}

std::string ScriptedChatProvider::key_for(const ChatRequest& req) {
    return key_for(req.system_prompt, req.user_prompt);
}

std::string ScriptedChatProvider::chat(const ChatRequest& req) {
    if (is_blank(req.system_prompt) || is_blank(req.user_prompt)) {
        throw Error(ErrorKind::argument, "chat prompts must be non-empty");
    }
    std::string key = key_for(req);
    auto it = responses_.find(key);
    if (it == responses_.end()) {
        throw Error(ErrorKind::fixture, "no scripted response for prompt digest " + key);
    }
    return it->second;
}

std::string RecordingChatProvider::chat(const ChatRequest& req) {
    std::string response = inner_.chat(req);
    std::lock_guard lock(mutex_);
    sink_[ScriptedChatProvider::key_for(req)] = response;
    return response;
}

}  // namespace ragkit::providers
