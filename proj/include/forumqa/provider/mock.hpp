#pragma once

#include <deque>
#include <exception>
#include <functional>
#include <mutex>
#include <variant>

#include "forumqa/provider/client.hpp"

namespace forumqa::provider {

/**
 * Scripted chat backend for tests.
 *
 * Usage:
 *   auto mock = std::make_shared<ScriptedChat>();
 *   mock->push(tool_call_response("qa_retrieval", {{"query", "q"}}));
 *   mock->push_text("hello");
 *
 * Queued responses are consumed in order; once the queue is empty the
 * handler (if any) answers. Every request is logged.
 */
class ScriptedChat : public ChatBackend {
public:
    using Handler = std::function<CompletionResponse(const CompletionRequest&)>;

    ScriptedChat() = default;
    explicit ScriptedChat(Handler handler) : handler_(std::move(handler)) {}

    void push(CompletionResponse response);
    void push_text(std::string text);
    void push_error(std::exception_ptr error);

    CompletionResponse complete(const CompletionRequest& request) override;

    std::vector<CompletionRequest> requests() const;
    std::size_t call_count() const;
    std::size_t pending() const;

private:
    mutable std::mutex mu_;
    std::deque<std::variant<CompletionResponse, std::exception_ptr>> queue_;
    Handler handler_;
    std::vector<CompletionRequest> log_;
};

CompletionResponse text_response(std::string text);
CompletionResponse tool_call_response(std::string name, nlohmann::json arguments, std::string id = "call_1");
CompletionResponse logprob_response(std::vector<TokenLogprob> top);

/// Deterministic bag-of-words embedder using signed feature hashing.
/// With `drop_structural_tokens`, tokens containing digits and structural
/// words (question, homework, section, ...) are ignored, so documents that
/// share a topic but differ only in numbering embed identically.
class HashingEmbedder : public EmbeddingBackend {
public:
    explicit HashingEmbedder(std::size_t dim = 64, bool drop_structural_tokens = false)
        : dim_(dim), drop_structural_(drop_structural_tokens) {}

    std::vector<Embedding> embed(const std::string& model, const std::vector<std::string>& texts) override;

    Embedding embed_one(std::string_view text) const;

private:
    std::size_t dim_;
    bool drop_structural_;
};

/// Counts calls that reach the wrapped backend.
class CountingChat : public ChatBackend {
public:
    explicit CountingChat(std::shared_ptr<ChatBackend> inner) : inner_(std::move(inner)) {}
    CompletionResponse complete(const CompletionRequest& request) override {
        ++count_;
        return inner_->complete(request);
    }
    std::size_t count() const noexcept { return count_.load(); }

private:
    std::shared_ptr<ChatBackend> inner_;
    std::atomic<std::size_t> count_{0};
};

class CountingEmbedder : public EmbeddingBackend {
public:
    explicit CountingEmbedder(std::shared_ptr<EmbeddingBackend> inner) : inner_(std::move(inner)) {}
    std::vector<Embedding> embed(const std::string& model, const std::vector<std::string>& texts) override {
        ++count_;
        return inner_->embed(model, texts);
    }
    std::size_t count() const noexcept { return count_.load(); }

private:
    std::shared_ptr<EmbeddingBackend> inner_;
    std::atomic<std::size_t> count_{0};
};

/// Lower-case alphanumeric tokens, as used by the hashing embedder and BM25.
std::vector<std::string> tokenize(std::string_view text);

} // namespace forumqa::provider
