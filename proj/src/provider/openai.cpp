#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "forumqa/provider/openai.hpp"

#include <algorithm>

#include "forumqa/error.hpp"

namespace forumqa::provider {

using nlohmann::json;

HttpTransport::HttpTransport(std::string base_url, std::string api_key, std::chrono::seconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) throw ValidationError("base_url needs a scheme: " + base_url);
    const auto path_start = base_url.find('/', scheme_end + 3);
    origin_ = base_url.substr(0, path_start);
    prefix_ = path_start == std::string::npos ? "" : base_url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

HttpResponse HttpTransport::post_json(const std::string& path, const std::string& body) {
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    auto result = client.Post(prefix_ + path, headers, body, "application/json");
    if (!result) throw TransportError("POST " + prefix_ + path + " failed: " + httplib::to_string(result.error()));
    return {result->status, result->body};
}

void raise_for_status(const HttpResponse& response) {
    if (response.status >= 200 && response.status < 300) return;
    const auto msg = "HTTP " + std::to_string(response.status) + ": " + response.body.substr(0, 500);
    if (response.status == 429) throw RateLimitError(msg);
    if (response.status >= 500) throw TransportError(msg);
    throw ProviderError(msg);
}

namespace {

json encode_message(const ChatMessage& m) {
    json j{{"role", to_string(m.role)}, {"content", m.content}};
    if (m.tool_call_id) j["tool_call_id"] = *m.tool_call_id;
    if (!m.tool_calls.empty()) {
        j["tool_calls"] = json::array();
        for (const auto& c : m.tool_calls) {
            j["tool_calls"].push_back(
                {{"id", c.id}, {"type", "function"}, {"function", {{"name", c.name}, {"arguments", c.arguments.dump()}}}});
        }
    }
    return j;
}

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ProviderError(std::string("unparseable provider response: ") + e.what());
    }
}

} // namespace

json OpenAIChat::encode(const CompletionRequest& request) {
    json j;
    j["model"] = request.model;
    j["messages"] = json::array();
    for (const auto& m : request.messages) j["messages"].push_back(encode_message(m));
    if (!request.tools.empty()) {
        j["tools"] = json::array();
        for (const auto& t : request.tools) j["tools"].push_back(to_openai_tool(t));
        j["tool_choice"] = to_json(request.tool_choice);
    }
    j["temperature"] = request.temperature;
    j["seed"] = request.seed;
    if (request.max_tokens) j["max_tokens"] = *request.max_tokens;
    if (request.want_logprobs) {
        j["logprobs"] = true;
        j["top_logprobs"] = request.top_logprobs;
    }
    return j;
}

CompletionResponse OpenAIChat::decode(const json& body) {
    const auto& choices = body.at("choices");
    if (!choices.is_array() || choices.empty()) throw ProviderError("provider response has no choices");
    const auto& choice = choices.front();
    const auto& message = choice.at("message");
    CompletionResponse r;
    if (auto it = message.find("content"); it != message.end() && it->is_string()) r.text = *it;
    if (auto it = message.find("tool_calls"); it != message.end() && it->is_array()) {
        for (const auto& c : *it) {
            ToolCall call;
            call.id = c.value("id", "");
            call.name = c.at("function").at("name").get<std::string>();
            const auto& args = c.at("function").at("arguments");
            try {
                call.arguments = args.is_string() ? json::parse(args.get<std::string>()) : args;
            } catch (const json::parse_error&) {
                // Keep the raw string; dispatch rejects it as malformed arguments.
                call.arguments = {{"_raw", args}};
            }
            r.tool_calls.push_back(std::move(call));
        }
    }
    if (auto lp = choice.find("logprobs"); lp != choice.end() && lp->is_object()) {
        const auto& content = lp->value("content", json::array());
        if (!content.empty()) {
            std::vector<TokenLogprob> top;
            for (const auto& t : content.front().value("top_logprobs", json::array())) {
                top.push_back({t.at("token").get<std::string>(), t.at("logprob").get<double>()});
            }
            if (top.empty()) {
                top.push_back({content.front().at("token").get<std::string>(),
                               content.front().at("logprob").get<double>()});
            }
            r.logprobs = std::move(top);
        }
    }
    return r;
}

CompletionResponse OpenAIChat::complete(const CompletionRequest& request) {
    auto response = transport_->post_json("/chat/completions", encode(request).dump());
    raise_for_status(response);
    try {
        return decode(parse_body(response.body));
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed chat completion: ") + e.what());
    }
}

std::vector<Embedding> OpenAIEmbedder::embed(const std::string& model, const std::vector<std::string>& texts) {
    const json request{{"model", model}, {"input", texts}};
    auto response = transport_->post_json("/embeddings", request.dump());
    raise_for_status(response);
    try {
        auto body = parse_body(response.body);
        auto data = body.at("data");
        std::sort(data.begin(), data.end(),
                  [](const json& a, const json& b) { return a.value("index", 0) < b.value("index", 0); });
        std::vector<Embedding> out;
        for (const auto& d : data) out.push_back(d.at("embedding").get<Embedding>());
        return out;
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed embeddings response: ") + e.what());
    }
}

} // namespace forumqa::provider
