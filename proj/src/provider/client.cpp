#include "forumqa/provider/client.hpp"

#include <cmath>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "forumqa/error.hpp"
#include "forumqa/prompts.hpp"

namespace forumqa::provider {

Sleeper real_sleeper() {
    return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

// ---------------------------------------------------------------------------
// RateLimiter

RateLimiter::RateLimiter(double requests_per_minute, Clock clock, Sleeper sleep)
    : rpm_(requests_per_minute),
      clock_(clock ? std::move(clock) : Clock([] { return std::chrono::steady_clock::now(); })),
      sleep_(sleep ? std::move(sleep) : real_sleeper()) {}

void RateLimiter::acquire() {
    if (rpm_ <= 0.0) return;
    const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(60.0 / rpm_));
    std::chrono::steady_clock::duration wait{};
    {
        std::lock_guard lock(mu_);
        const auto now = clock_();
        const auto slot = std::max(now, next_slot_);
        next_slot_ = slot + interval;
        wait = slot - now;
    }
    // Slot is reserved; sleep without holding the lock.
    if (wait > std::chrono::steady_clock::duration::zero()) {
        sleep_(std::chrono::ceil<std::chrono::milliseconds>(wait));
    }
}

// ---------------------------------------------------------------------------
// Request validation and contract

void validate_request(const CompletionRequest& request) {
    if (request.messages.empty()) throw ValidationError("chat request has no messages");
    for (const auto& m : request.messages) {
        if (m.role == Role::tool && !m.tool_call_id) {
            throw ValidationError("tool message without tool_call_id");
        }
    }
    std::set<std::string> names;
    for (const auto& t : request.tools) {
        if (!names.insert(t.name).second) throw ValidationError("duplicate tool name \"" + t.name + "\"");
    }
    if (request.tool_choice.mode != ToolChoice::Mode::none && request.tools.empty()) {
        throw ValidationError("tool_choice requires tools");
    }
    if (request.tool_choice.mode == ToolChoice::Mode::specific && !names.contains(request.tool_choice.name)) {
        throw ValidationError("tool_choice names unknown tool \"" + request.tool_choice.name + "\"");
    }
}

std::string contract_problem(const CompletionRequest& request, const CompletionResponse& response) {
    if (!response.text && response.tool_calls.empty()) return "response has neither text nor tool calls";
    const auto& choice = request.tool_choice;
    if (choice.demands_call() && response.tool_calls.empty()) return "tool call required but none returned";
    if (choice.mode == ToolChoice::Mode::none && !response.tool_calls.empty()) {
        return "tool calls returned with tool_choice=none";
    }
    if (choice.mode == ToolChoice::Mode::specific) {
        for (const auto& c : response.tool_calls) {
            if (c.name != choice.name) return "tool call \"" + c.name + "\" does not match required \"" + choice.name + "\"";
        }
    }
    if (request.want_logprobs && !response.logprobs) return "log-probabilities requested but not returned";
    return {};
}

// ---------------------------------------------------------------------------
// ChatClient

namespace {

template <typename Fn>
auto with_transport_retry(const ClientOptions& options, Fn&& fn) {
    auto backoff = options.retry.initial_backoff;
    const auto sleep = options.sleep ? options.sleep : real_sleeper();
    for (int attempt = 1;; ++attempt) {
        try {
            return fn();
        } catch (const TransportError& e) {
            if (attempt >= options.retry.transport_attempts) throw;
            spdlog::warn("provider attempt {} failed ({}); retrying in {} ms", attempt, e.what(), backoff.count());
            sleep(backoff);
            backoff *= 2;
        }
    }
}

} // namespace

ChatClient::ChatClient(std::shared_ptr<ChatBackend> backend, ClientOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      limiter_(options_.requests_per_minute, options_.clock, options_.sleep) {
    if (!backend_) throw ValidationError("chat client needs a backend");
}

CompletionResponse ChatClient::call_backend(const CompletionRequest& request) {
    return with_transport_retry(options_, [&] {
        limiter_.acquire();
        ++calls_;
        return backend_->complete(request);
    });
}

CompletionResponse ChatClient::complete(const CompletionRequest& request) {
    validate_request(request);
    for (int violations = 0;; ++violations) {
        auto response = call_backend(request);
        auto problem = contract_problem(request, response);
        if (problem.empty()) return response;
        if (violations >= options_.retry.contract_retries) {
            throw ContractViolation(problem + " (after " + std::to_string(violations) + " retries)");
        }
        spdlog::warn("contract violation: {}; retrying", problem);
    }
}

CompletionResponse ChatClient::chat_complete(const std::string& model, std::vector<ChatMessage> messages,
                                             std::vector<ToolSchema> tools, ToolChoice tool_choice,
                                             bool want_logprobs, std::int64_t seed) {
    CompletionRequest request;
    request.model = model;
    request.messages = std::move(messages);
    request.tools = std::move(tools);
    request.tool_choice = std::move(tool_choice);
    request.want_logprobs = want_logprobs;
    request.seed = seed;
    return complete(request);
}

// ---------------------------------------------------------------------------
// EmbeddingClient

EmbeddingClient::EmbeddingClient(std::shared_ptr<EmbeddingBackend> backend, std::string model, ClientOptions options)
    : backend_(std::move(backend)),
      model_(std::move(model)),
      options_(std::move(options)),
      limiter_(options_.requests_per_minute, options_.clock, options_.sleep) {
    if (!backend_) throw ValidationError("embedding client needs a backend");
}

std::vector<Embedding> EmbeddingClient::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw ValidationError("embed called with no texts");
    auto vectors = with_transport_retry(options_, [&] {
        limiter_.acquire();
        return backend_->embed(model_, texts);
    });
    if (vectors.size() != texts.size()) {
        throw ProviderError("embedding backend returned " + std::to_string(vectors.size()) + " vectors for " +
                            std::to_string(texts.size()) + " texts");
    }
    const auto dim = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != dim || dim == 0) throw ProviderError("embedding dimension mismatch within batch");
        for (double x : v) {
            if (!std::isfinite(x)) throw ProviderError("embedding has non-finite entries");
        }
    }
    return vectors;
}

// ---------------------------------------------------------------------------
// Relevance

namespace {

bool is_yes_token(std::string_view token) {
    const auto first = token.find_first_not_of(" \t\n");
    if (first == std::string_view::npos) return false;
    token = token.substr(first, token.find_last_not_of(" \t\n") - first + 1);
    return token == "yes" || token == "Yes" || token == "YES";
}

} // namespace

YesProbability yes_probability_from_logprobs(std::span<const TokenLogprob> top, double floor) {
    double total = 0.0;
    bool found = false;
    for (const auto& t : top) {
        if (is_yes_token(t.token)) {
            total += std::exp(t.logprob);
            found = true;
        }
    }
    if (!found) return {floor, true};
    return {std::clamp(std::max(total, floor), 0.0, 1.0), false};
}

RelevanceScorer::RelevanceScorer(std::shared_ptr<ChatClient> chat, std::string model, std::int64_t seed, double floor)
    : chat_(std::move(chat)), model_(std::move(model)), seed_(seed), floor_(floor) {}

CompletionRequest RelevanceScorer::make_request(const std::string& model, const std::string& question,
                                                const std::string& document, std::int64_t seed) {
    CompletionRequest request;
    request.model = model;
    request.messages = {
        ChatMessage::system(std::string(prompts::kRelevance)),
        ChatMessage::user(std::string(prompts::kQuestionLabel) + " " + question + "\n\n" +
                          std::string(prompts::kDocumentLabel) + "\n" + document + "\n\n" +
                          std::string(prompts::kRelevanceQuestion)),
    };
    request.want_logprobs = true;
    request.max_tokens = 1;
    request.seed = seed;
    return request;
}

YesProbability RelevanceScorer::yes_probability(const std::string& question, const std::string& document) const {
    auto response = chat_->complete(make_request(model_, question, document, seed_));
    auto result = yes_probability_from_logprobs(*response.logprobs, floor_);
    if (result.floored) spdlog::warn("no yes token among reported log-probabilities; using floor {}", floor_);
    return result;
}

} // namespace forumqa::provider
