#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "forumqa/provider/client.hpp"

namespace forumqa::provider {

enum class FixtureMode { record, replay };

/// JSONL fixture file of {"hash","request","response"} entries.
///
/// Replay mode requires the file and answers only from it. Record mode loads
/// whatever the file already holds, serves those hashes from it, and appends
/// one entry per new request under a single writer lock.
class FixtureStore {
public:
    FixtureStore(std::filesystem::path path, FixtureMode mode);

    std::optional<nlohmann::json> lookup(const std::string& hash) const;
    void append(const std::string& hash, const nlohmann::json& request, const nlohmann::json& response);

    FixtureMode mode() const noexcept { return mode_; }
    const std::filesystem::path& path() const noexcept { return path_; }
    std::size_t size() const;

private:
    std::filesystem::path path_;
    FixtureMode mode_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, nlohmann::json> entries_;
};

/// Request identity used as the fixture key: model, messages, tools,
/// tool choice, logprob flag and seed, with string whitespace collapsed and
/// object keys sorted.
nlohmann::json canonical_request(const CompletionRequest& request);
std::string request_hash(const CompletionRequest& request);
std::string embedding_hash(const std::string& model, const std::string& text);

std::string sha256_hex(std::string_view data);

class FixtureChat : public ChatBackend {
public:
    /// `live` may be null in replay mode.
    FixtureChat(std::shared_ptr<FixtureStore> store, std::shared_ptr<ChatBackend> live);
    CompletionResponse complete(const CompletionRequest& request) override;

private:
    std::shared_ptr<FixtureStore> store_;
    std::shared_ptr<ChatBackend> live_;
};

/// Embedding fixtures are keyed per text so batching does not matter.
class FixtureEmbedder : public EmbeddingBackend {
public:
    FixtureEmbedder(std::shared_ptr<FixtureStore> store, std::shared_ptr<EmbeddingBackend> live);
    std::vector<Embedding> embed(const std::string& model, const std::vector<std::string>& texts) override;

private:
    std::shared_ptr<FixtureStore> store_;
    std::shared_ptr<EmbeddingBackend> live_;
};

} // namespace forumqa::provider
