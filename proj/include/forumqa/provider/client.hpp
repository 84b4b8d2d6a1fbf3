#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "forumqa/provider/types.hpp"

namespace forumqa::provider {

/// A chat-completion model. Implementations may throw TransportError or
/// RateLimitError for retryable failures.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual std::vector<Embedding> embed(const std::string& model, const std::vector<std::string>& texts) = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
using Clock = std::function<std::chrono::steady_clock::time_point()>;

Sleeper real_sleeper();

/// Admission control shared by every request through one client. Spaces
/// requests evenly at `requests_per_minute`; zero disables limiting.
class RateLimiter {
public:
    explicit RateLimiter(double requests_per_minute, Clock clock = {}, Sleeper sleep = {});

    void acquire();
    double requests_per_minute() const noexcept { return rpm_; }

private:
    double rpm_;
    Clock clock_;
    Sleeper sleep_;
    std::mutex mu_;
    std::chrono::steady_clock::time_point next_slot_{};
};

struct RetryPolicy {
    /// Attempts for transport and rate-limit failures, with exponential backoff.
    int transport_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    /// Extra attempts after a tool-choice contract violation.
    int contract_retries = 2;
};

struct ClientOptions {
    RetryPolicy retry;
    double requests_per_minute = 0.0;
    Sleeper sleep;
    Clock clock;
};

/// Validates requests, enforces the tool-choice contract on responses and
/// applies retry and rate-limit policy around a backend. Thread-safe if the
/// backend is.
class ChatClient {
public:
    explicit ChatClient(std::shared_ptr<ChatBackend> backend, ClientOptions options = {});

    CompletionResponse complete(const CompletionRequest& request);

    CompletionResponse chat_complete(const std::string& model, std::vector<ChatMessage> messages,
                                     std::vector<ToolSchema> tools, ToolChoice tool_choice,
                                     bool want_logprobs, std::int64_t seed);

    /// Backend invocations so far, including retries.
    std::size_t backend_calls() const noexcept { return calls_.load(); }

private:
    CompletionResponse call_backend(const CompletionRequest& request);

    std::shared_ptr<ChatBackend> backend_;
    ClientOptions options_;
    RateLimiter limiter_;
    std::atomic<std::size_t> calls_{0};
};

/// Throws ValidationError when the request breaks a precondition.
void validate_request(const CompletionRequest& request);

/// Empty when the response honours the request's tool choice, else a reason.
std::string contract_problem(const CompletionRequest& request, const CompletionResponse& response);

class EmbeddingClient {
public:
    EmbeddingClient(std::shared_ptr<EmbeddingBackend> backend, std::string model, ClientOptions options = {});

    /// One vector per input, all of one dimension with finite entries.
    std::vector<Embedding> embed(const std::vector<std::string>& texts);

    const std::string& model() const noexcept { return model_; }

private:
    std::shared_ptr<EmbeddingBackend> backend_;
    std::string model_;
    ClientOptions options_;
    RateLimiter limiter_;
};

// ---------------------------------------------------------------------------
// Generative relevance score

struct YesProbability {
    double p = 0.0;
    /// True when no yes token was reported and the floor was used.
    bool floored = false;
};

inline constexpr double kYesFloor = 1e-6;

/// Sums exp(logprob) over the case variants of "yes" among the reported
/// first-token alternatives. Missing yes token gives the floor.
YesProbability yes_probability_from_logprobs(std::span<const TokenLogprob> top, double floor = kYesFloor);

/// Asks `model` whether `document` is relevant to `question` and reads the
/// probability of a yes answer off the first-token log-probabilities.
class RelevanceScorer {
public:
    RelevanceScorer(std::shared_ptr<ChatClient> chat, std::string model, std::int64_t seed = 0,
                    double floor = kYesFloor);

    YesProbability yes_probability(const std::string& question, const std::string& document) const;

    static CompletionRequest make_request(const std::string& model, const std::string& question,
                                          const std::string& document, std::int64_t seed);

private:
    std::shared_ptr<ChatClient> chat_;
    std::string model_;
    std::int64_t seed_;
    double floor_;
};

} // namespace forumqa::provider
