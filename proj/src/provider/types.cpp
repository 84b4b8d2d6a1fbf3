#include "forumqa/provider/types.hpp"

#include "forumqa/error.hpp"

namespace forumqa::provider {

using nlohmann::json;

std::string_view to_string(Role role) {
    switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
    case Role::tool: return "tool";
    }
    return "unknown";
}

Role parse_role(std::string_view text) {
    for (auto r : {Role::system, Role::user, Role::assistant, Role::tool}) {
        if (to_string(r) == text) return r;
    }
    throw ValidationError("unknown message role \"" + std::string(text) + "\"");
}

namespace {

json call_to_json(const ToolCall& c) {
    return {{"id", c.id}, {"name", c.name}, {"arguments", c.arguments}};
}

ToolCall call_from_json(const json& j) {
    ToolCall c;
    c.id = j.value("id", "");
    c.name = j.at("name").get<std::string>();
    c.arguments = j.value("arguments", json::object());
    return c;
}

std::string_view to_string(ParamType t) { return t == ParamType::integer ? "integer" : "string"; }

} // namespace

json to_json(const ChatMessage& m) {
    json j{{"role", to_string(m.role)}, {"content", m.content}};
    if (m.tool_call_id) j["tool_call_id"] = *m.tool_call_id;
    if (!m.tool_calls.empty()) {
        j["tool_calls"] = json::array();
        for (const auto& c : m.tool_calls) j["tool_calls"].push_back(call_to_json(c));
    }
    return j;
}

ChatMessage message_from_json(const json& j) {
    ChatMessage m;
    m.role = parse_role(j.at("role").get<std::string>());
    m.content = j.value("content", "");
    if (auto it = j.find("tool_call_id"); it != j.end() && it->is_string()) m.tool_call_id = *it;
    if (auto it = j.find("tool_calls"); it != j.end()) {
        for (const auto& c : *it) m.tool_calls.push_back(call_from_json(c));
    }
    return m;
}

json to_json(const ToolSchema& s) {
    json params = json::array();
    for (const auto& p : s.parameters) {
        params.push_back({{"name", p.name},
                          {"type", to_string(p.type)},
                          {"description", p.description},
                          {"required", p.required}});
    }
    return {{"name", s.name}, {"description", s.description}, {"parameters", params}};
}

ToolSchema schema_from_json(const json& j) {
    ToolSchema s;
    s.name = j.at("name").get<std::string>();
    s.description = j.value("description", "");
    for (const auto& p : j.value("parameters", json::array())) {
        s.parameters.push_back({p.at("name").get<std::string>(),
                                p.value("type", "string") == "integer" ? ParamType::integer : ParamType::string,
                                p.value("description", ""), p.value("required", true)});
    }
    return s;
}

json to_openai_tool(const ToolSchema& s) {
    json properties = json::object();
    json required = json::array();
    for (const auto& p : s.parameters) {
        properties[p.name] = {{"type", to_string(p.type)}, {"description", p.description}};
        if (p.required) required.push_back(p.name);
    }
    return {{"type", "function"},
            {"function",
             {{"name", s.name},
              {"description", s.description},
              {"parameters", {{"type", "object"}, {"properties", properties}, {"required", required}}}}}};
}

json to_json(const ToolChoice& c) {
    switch (c.mode) {
    case ToolChoice::Mode::automatic: return "auto";
    case ToolChoice::Mode::required: return "required";
    case ToolChoice::Mode::none: return "none";
    case ToolChoice::Mode::specific: return {{"type", "function"}, {"function", {{"name", c.name}}}};
    }
    return "none";
}

ToolChoice tool_choice_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "auto") return ToolChoice::automatic();
        if (s == "required") return ToolChoice::required();
        if (s == "none") return ToolChoice::none();
        throw ValidationError("unknown tool_choice \"" + s + "\"");
    }
    return ToolChoice::specific(j.at("function").at("name").get<std::string>());
}

json to_json(const CompletionRequest& r) {
    json j;
    j["model"] = r.model;
    j["messages"] = json::array();
    for (const auto& m : r.messages) j["messages"].push_back(to_json(m));
    j["tools"] = json::array();
    for (const auto& t : r.tools) j["tools"].push_back(to_json(t));
    j["tool_choice"] = to_json(r.tool_choice);
    j["want_logprobs"] = r.want_logprobs;
    j["seed"] = r.seed;
    return j;
}

json to_json(const CompletionResponse& r) {
    json j;
    j["text"] = r.text ? json(*r.text) : json(nullptr);
    j["tool_calls"] = json::array();
    for (const auto& c : r.tool_calls) j["tool_calls"].push_back(call_to_json(c));
    if (r.logprobs) {
        j["logprobs"] = json::array();
        for (const auto& t : *r.logprobs) j["logprobs"].push_back({{"token", t.token}, {"logprob", t.logprob}});
    } else {
        j["logprobs"] = nullptr;
    }
    return j;
}

CompletionResponse response_from_json(const json& j) {
    CompletionResponse r;
    if (auto it = j.find("text"); it != j.end() && it->is_string()) r.text = *it;
    if (auto it = j.find("tool_calls"); it != j.end()) {
        for (const auto& c : *it) r.tool_calls.push_back(call_from_json(c));
    }
    if (auto it = j.find("logprobs"); it != j.end() && it->is_array()) {
        std::vector<TokenLogprob> lp;
        for (const auto& t : *it) lp.push_back({t.at("token").get<std::string>(), t.at("logprob").get<double>()});
        r.logprobs = std::move(lp);
    }
    return r;
}

} // namespace forumqa::provider
