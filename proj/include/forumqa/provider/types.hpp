#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace forumqa::provider {

enum class Role { system, user, assistant, tool };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

struct ToolCall {
    std::string id;
    std::string name;
    nlohmann::json arguments = nlohmann::json::object();

    bool operator==(const ToolCall&) const = default;
};

struct ChatMessage {
    Role role = Role::user;
    std::string content;
    /// Required for tool messages: the call this message answers.
    std::optional<std::string> tool_call_id;
    /// Assistant messages that issued tool calls carry them here.
    std::vector<ToolCall> tool_calls;

    static ChatMessage system(std::string content) { return {Role::system, std::move(content), {}, {}}; }
    static ChatMessage user(std::string content) { return {Role::user, std::move(content), {}, {}}; }
    static ChatMessage assistant(std::string content, std::vector<ToolCall> calls = {}) {
        return {Role::assistant, std::move(content), {}, std::move(calls)};
    }
    static ChatMessage tool(std::string call_id, std::string content) {
        return {Role::tool, std::move(content), std::move(call_id), {}};
    }

    bool operator==(const ChatMessage&) const = default;
};

enum class ParamType { string, integer };

struct ToolParam {
    std::string name;
    ParamType type = ParamType::string;
    std::string description;
    bool required = true;

    bool operator==(const ToolParam&) const = default;
};

struct ToolSchema {
    std::string name;
    std::string description;
    std::vector<ToolParam> parameters;

    bool operator==(const ToolSchema&) const = default;
};

struct ToolChoice {
    enum class Mode { automatic, required, none, specific };

    Mode mode = Mode::automatic;
    std::string name;

    static ToolChoice automatic() { return {Mode::automatic, {}}; }
    static ToolChoice required() { return {Mode::required, {}}; }
    static ToolChoice none() { return {Mode::none, {}}; }
    static ToolChoice specific(std::string name) { return {Mode::specific, std::move(name)}; }

    /// True when a successful response must contain at least one call.
    bool demands_call() const { return mode == Mode::required || mode == Mode::specific; }

    bool operator==(const ToolChoice&) const = default;
};

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;

    bool operator==(const TokenLogprob&) const = default;
};

struct CompletionRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    std::vector<ToolSchema> tools;
    ToolChoice tool_choice = ToolChoice::none();
    bool want_logprobs = false;
    int top_logprobs = 20;
    std::optional<int> max_tokens;
    double temperature = 0.0;
    std::int64_t seed = 0;
};

struct CompletionResponse {
    std::optional<std::string> text;
    std::vector<ToolCall> tool_calls;
    /// Top alternatives for the first generated token.
    std::optional<std::vector<TokenLogprob>> logprobs;

    bool operator==(const CompletionResponse&) const = default;
};

using Embedding = std::vector<double>;

// JSON forms used by fixtures and traces.
nlohmann::json to_json(const ChatMessage& m);
ChatMessage message_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ToolSchema& s);
ToolSchema schema_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ToolChoice& c);
ToolChoice tool_choice_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CompletionRequest& r);
nlohmann::json to_json(const CompletionResponse& r);
CompletionResponse response_from_json(const nlohmann::json& j);

/// OpenAI tool-definition shape: {"type":"function","function":{...}}.
nlohmann::json to_openai_tool(const ToolSchema& s);

/// Plain text of a response, or "" when the model only called tools.
inline std::string text_of(const CompletionResponse& r) { return r.text.value_or(""); }

} // namespace forumqa::provider
