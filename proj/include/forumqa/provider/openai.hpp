#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <string>

#include "forumqa/provider/client.hpp"

namespace forumqa::provider {

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Minimal HTTP seam so the OpenAI wire format can be tested without a network.
class Transport {
public:
    virtual ~Transport() = default;
    /// POSTs a JSON body to `path` (relative to the base URL). Throws
    /// TransportError when no response was received.
    virtual HttpResponse post_json(const std::string& path, const std::string& body) = 0;
};

/// cpp-httplib transport. `base_url` like "https://api.openai.com/v1".
class HttpTransport : public Transport {
public:
    HttpTransport(std::string base_url, std::string api_key,
                  std::chrono::seconds timeout = std::chrono::seconds(120));
    HttpResponse post_json(const std::string& path, const std::string& body) override;

private:
    std::string origin_;
    std::string prefix_;
    std::string api_key_;
    std::chrono::seconds timeout_;
};

/// Counts requests that reach the wrapped transport.
class CountingTransport : public Transport {
public:
    explicit CountingTransport(std::shared_ptr<Transport> inner) : inner_(std::move(inner)) {}
    HttpResponse post_json(const std::string& path, const std::string& body) override {
        ++count_;
        return inner_->post_json(path, body);
    }
    std::size_t count() const noexcept { return count_.load(); }

private:
    std::shared_ptr<Transport> inner_;
    std::atomic<std::size_t> count_{0};
};

/// Chat completions over the OpenAI-compatible HTTP API.
class OpenAIChat : public ChatBackend {
public:
    explicit OpenAIChat(std::shared_ptr<Transport> transport) : transport_(std::move(transport)) {}
    CompletionResponse complete(const CompletionRequest& request) override;

    static nlohmann::json encode(const CompletionRequest& request);
    static CompletionResponse decode(const nlohmann::json& body);

private:
    std::shared_ptr<Transport> transport_;
};

class OpenAIEmbedder : public EmbeddingBackend {
public:
    explicit OpenAIEmbedder(std::shared_ptr<Transport> transport) : transport_(std::move(transport)) {}
    std::vector<Embedding> embed(const std::string& model, const std::vector<std::string>& texts) override;

private:
    std::shared_ptr<Transport> transport_;
};

/// Maps an HTTP status to the matching error; no-op for 2xx.
void raise_for_status(const HttpResponse& response);

} // namespace forumqa::provider
