#include "forumqa/provider/mock.hpp"

#include <cmath>
#include <cstdint>
#include <set>

#include "forumqa/error.hpp"

namespace forumqa::provider {

void ScriptedChat::push(CompletionResponse response) {
    std::lock_guard lock(mu_);
    queue_.emplace_back(std::move(response));
}

void ScriptedChat::push_text(std::string text) { push(text_response(std::move(text))); }

void ScriptedChat::push_error(std::exception_ptr error) {
    std::lock_guard lock(mu_);
    queue_.emplace_back(std::move(error));
}

CompletionResponse ScriptedChat::complete(const CompletionRequest& request) {
    std::unique_lock lock(mu_);
    log_.push_back(request);
    if (!queue_.empty()) {
        auto next = std::move(queue_.front());
        queue_.pop_front();
        if (auto* err = std::get_if<std::exception_ptr>(&next)) std::rethrow_exception(*err);
        return std::get<CompletionResponse>(std::move(next));
    }
    if (handler_) {
        auto handler = handler_;
        lock.unlock();
        return handler(request);
    }
    throw ProviderError("scripted chat has no response left for request " + std::to_string(log_.size()));
}

std::vector<CompletionRequest> ScriptedChat::requests() const {
    std::lock_guard lock(mu_);
    return log_;
}

std::size_t ScriptedChat::call_count() const {
    std::lock_guard lock(mu_);
    return log_.size();
}

std::size_t ScriptedChat::pending() const {
    std::lock_guard lock(mu_);
    return queue_.size();
}

CompletionResponse text_response(std::string text) {
    CompletionResponse r;
    r.text = std::move(text);
    return r;
}

CompletionResponse tool_call_response(std::string name, nlohmann::json arguments, std::string id) {
    CompletionResponse r;
    r.tool_calls.push_back({std::move(id), std::move(name), std::move(arguments)});
    return r;
}

CompletionResponse logprob_response(std::vector<TokenLogprob> top) {
    CompletionResponse r;
    r.text = top.empty() ? std::string() : top.front().token;
    r.logprobs = std::move(top);
    return r;
}

// ---------------------------------------------------------------------------

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

bool structural(const std::string& token) {
    static const std::set<std::string> words = {
        "question", "questions", "homework", "hw", "section", "chapter", "ch", "part", "q", "lab", "project",
    };
    for (char c : token) {
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
    }
    return words.contains(token);
}

} // namespace

Embedding HashingEmbedder::embed_one(std::string_view text) const {
    Embedding v(dim_, 0.0);
    for (const auto& token : tokenize(text)) {
        if (drop_structural_ && structural(token)) continue;
        const auto h = fnv1a(token);
        v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
    }
    return v;
}

std::vector<Embedding> HashingEmbedder::embed(const std::string&, const std::vector<std::string>& texts) {
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
}

} // namespace forumqa::provider
