#include "forumqa/pipelines.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "forumqa/error.hpp"
#include "forumqa/prompts.hpp"

namespace forumqa {

using nlohmann::json;
using provider::ChatMessage;
using provider::CompletionResponse;
using provider::ToolCall;
using provider::ToolChoice;

std::string_view to_string(PipelineKind kind) {
    switch (kind) {
        case PipelineKind::edison: return "edison";
        case PipelineKind::fc: return "fc";
        case PipelineKind::fc_categorize: return "fc_categorize";
        case PipelineKind::fc_forced: return "fc_forced";
        case PipelineKind::fc_iterative: return "fc_iterative";
        case PipelineKind::fc_feedback: return "fc_feedback";
        case PipelineKind::fc_multihop: return "fc_multihop";
    }
    return "?";
}

PipelineKind parse_pipeline_kind(std::string_view text) {
    for (auto k : kAllPipelines) {
        if (to_string(k) == text) return k;
    }
    throw ValidationError("unknown pipeline \"" + std::string(text) + "\"");
}

bool forces_selection(PipelineKind kind) {
    return kind != PipelineKind::fc && kind != PipelineKind::fc_categorize;
}

EdisonRules default_edison_rules() {
    return {
        {Category::assignment, {FunctionName::assignment_retrieval, FunctionName::qa_retrieval}},
        {Category::conceptual, {FunctionName::textbook_retrieval, FunctionName::qa_retrieval}},
        {Category::logistics, {FunctionName::logistics_retrieval}},
    };
}

json to_json(const EdisonRules& rules) {
    json out = json::object();
    for (const auto& [category, fns] : rules) {
        auto& list = out[std::string(to_string(category))] = json::array();
        for (auto f : fns) list.push_back(to_string(f));
    }
    return out;
}

EdisonRules edison_rules_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("edison_rules must be an object of category → function list");
    EdisonRules rules;
    for (const auto& [category, fns] : j.items()) {
        auto& set = rules[parse_category(category)];
        if (!fns.is_array()) throw ValidationError("edison_rules." + category + " must be a list");
        for (const auto& f : fns) set.insert(parse_function_name(f.get<std::string>()));
    }
    return rules;
}

void PipelineConfig::validate() const {
    if (max_rounds < 1) throw ValidationError("max_rounds must be >= 1");
    if (max_feedback_rounds < 0) throw ValidationError("max_feedback_rounds must be >= 0");
    if (fc_model.empty()) throw ValidationError("fc_model is not set");
    if (answer_model.empty()) throw ValidationError("answer_model is not set");
    if (kind == PipelineKind::edison) {
        for (auto c : {Category::conceptual, Category::assignment, Category::logistics}) {
            auto it = edison_rules.find(c);
            if (it == edison_rules.end() || it->second.empty()) {
                throw ValidationError("edison_rules has no functions for category " + std::string(to_string(c)));
            }
        }
    }
}

std::size_t round_bound(const PipelineConfig& config) {
    const auto feedback = static_cast<std::size_t>(config.max_feedback_rounds);
    switch (config.kind) {
        case PipelineKind::edison:
        case PipelineKind::fc:
        case PipelineKind::fc_categorize:
        case PipelineKind::fc_forced: return 2;
        case PipelineKind::fc_iterative: return static_cast<std::size_t>(config.max_rounds) + 1;
        case PipelineKind::fc_feedback: return 2 * (1 + feedback);
        case PipelineKind::fc_multihop: return 2 + kAllFunctions.size();
    }
    return 0;
}

std::size_t provider_call_bound(const PipelineConfig& config) {
    switch (config.kind) {
        case PipelineKind::edison: return 1;
        case PipelineKind::fc_feedback:
            // Each cycle is a tool turn, an answer turn and a review that may be re-asked once.
            return 4 * (1 + static_cast<std::size_t>(config.max_feedback_rounds));
        case PipelineKind::fc_multihop: {
            // Selection, one argument turn per function, answer. The fallback needs only 3.
            return 2 + kAllFunctions.size();
        }
        default: return round_bound(config);
    }
}

bool PipelineTrace::has_flag(std::string_view flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json round_to_json(const Round& r) {
    json messages = json::array();
    for (const auto& m : r.messages) messages.push_back(provider::to_json(m));
    json calls = json::array();
    for (const auto& c : r.calls) calls.push_back(to_json(c));
    return {{"phase", r.phase},
            {"model", r.model},
            {"tool_choice", provider::to_json(r.tool_choice)},
            {"messages", messages},
            {"response", r.response ? provider::to_json(*r.response) : json(nullptr)},
            {"calls", calls},
            {"call_errors", r.call_errors}};
}

Round round_from_json(const json& j) {
    Round r;
    r.phase = j.at("phase").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.tool_choice = provider::tool_choice_from_json(j.at("tool_choice"));
    for (const auto& m : j.at("messages")) r.messages.push_back(provider::message_from_json(m));
    if (!j.at("response").is_null()) r.response = provider::response_from_json(j.at("response"));
    for (const auto& c : j.at("calls")) r.calls.push_back(call_record_from_json(c));
    r.call_errors = j.at("call_errors").get<std::vector<std::string>>();
    return r;
}

json review_to_json(const Review& r) { return {{"scores", to_json(r.judgment)}, {"feedback", r.feedback}}; }

Review review_from_json(const json& j) {
    return {judgment_from_json(j.at("scores")), j.at("feedback").get<std::string>()};
}

} // namespace

json to_json(const PipelineTrace& t) {
    json rounds = json::array();
    for (const auto& r : t.rounds) rounds.push_back(round_to_json(r));
    json selected = json::array();
    for (auto f : t.selected_functions) selected.push_back(to_string(f));
    json feedback = json::array();
    for (const auto& r : t.judge_feedback) feedback.push_back(review_to_json(r));
    return {{"question_id", t.question_id},
            {"kind", to_string(t.kind)},
            {"fc_model", t.fc_model},
            {"answer_model", t.answer_model},
            {"seed", t.seed},
            {"rounds", rounds},
            {"selected_functions", selected},
            {"judge_feedback", feedback},
            {"final_review", t.final_review ? review_to_json(*t.final_review) : json(nullptr)},
            {"answer", t.answer},
            {"flags", t.flags},
            {"provider_calls", t.provider_calls}};
}

PipelineTrace trace_from_json(const json& j) {
    PipelineTrace t;
    t.question_id = j.at("question_id").get<std::string>();
    t.kind = parse_pipeline_kind(j.at("kind").get<std::string>());
    t.fc_model = j.at("fc_model").get<std::string>();
    t.answer_model = j.at("answer_model").get<std::string>();
    t.seed = j.at("seed").get<std::int64_t>();
    for (const auto& r : j.at("rounds")) t.rounds.push_back(round_from_json(r));
    for (const auto& f : j.at("selected_functions")) t.selected_functions.insert(parse_function_name(f.get<std::string>()));
    for (const auto& r : j.at("judge_feedback")) t.judge_feedback.push_back(review_from_json(r));
    if (!j.at("final_review").is_null()) t.final_review = review_from_json(j.at("final_review"));
    t.answer = j.at("answer").get<std::string>();
    t.flags = j.at("flags").get<std::vector<std::string>>();
    t.provider_calls = j.at("provider_calls").get<std::size_t>();
    return t;
}

std::filesystem::path trace_path(const std::filesystem::path& run_dir, const std::string& fc_model,
                                 const std::string& question_id, PipelineKind kind, std::int64_t seed) {
    std::string safe = fc_model;
    for (auto& c : safe) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
    }
    return run_dir / "traces" / safe /
           (question_id + "." + std::string(to_string(kind)) + "." + std::to_string(seed) + ".json");
}

void save_trace(const PipelineTrace& trace, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write trace " + path.string());
    out << to_json(trace).dump(2) << "\n";
}

PipelineTrace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open trace " + path.string());
    try {
        return trace_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw ValidationError("bad trace " + path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Multi-hop selection helpers

std::vector<FunctionName> parse_function_list(std::string_view reply, std::vector<std::string>* rejected) {
    std::vector<FunctionName> out;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        if (auto name = try_parse_function_name(token)) {
            if (std::find(out.begin(), out.end(), *name) == out.end()) out.push_back(*name);
        } else if (token.find("_retrieval") != std::string::npos && rejected != nullptr) {
            rejected->push_back(token);
        }
        token.clear();
    };
    for (char c : reply) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || c == '_') {
            token.push_back(static_cast<char>(std::tolower(u)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

std::string function_menu() {
    std::string menu;
    for (const auto& s : function_schemas()) menu += "- " + s.name + ": " + s.description + "\n";
    return menu;
}

// ---------------------------------------------------------------------------
// Runner

namespace {

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

class Runner {
public:
    Runner(const StudentQuestion& q, const PipelineConfig& config, const PipelineDeps& deps)
        : q_(q), config_(config), deps_(deps) {
        trace_.question_id = q.id;
        trace_.kind = config.kind;
        trace_.fc_model = config.fc_model;
        trace_.answer_model = config.answer_model;
        trace_.seed = config.seed;
    }

    PipelineTrace run() {
        switch (config_.kind) {
            case PipelineKind::edison: run_edison(); break;
            case PipelineKind::fc: run_single(ToolChoice::automatic(), false); break;
            case PipelineKind::fc_categorize: run_single(ToolChoice::automatic(), true); break;
            case PipelineKind::fc_forced: run_single(ToolChoice::required(), false); break;
            case PipelineKind::fc_iterative: run_iterative(); break;
            case PipelineKind::fc_feedback: run_feedback(); break;
            case PipelineKind::fc_multihop: run_multihop(); break;
        }
        for (const auto& r : trace_.rounds) {
            for (const auto& c : r.calls) trace_.selected_functions.insert(c.name);
        }
        return std::move(trace_);
    }

private:
    std::vector<ChatMessage> opening(bool with_category) const {
        std::string user = q_.text;
        if (with_category) user = "Category: " + std::string(to_string(*q_.category)) + "\n" + user;
        return {ChatMessage::system(std::string(prompts::kTeachingAssistant)), ChatMessage::user(std::move(user))};
    }

    Round turn(std::string phase, const std::string& model, const std::vector<ChatMessage>& messages,
               std::vector<provider::ToolSchema> tools, ToolChoice choice) {
        Round r;
        r.phase = std::move(phase);
        r.model = model;
        r.tool_choice = choice;
        r.messages = messages;
        r.response = deps_.chat->chat_complete(model, messages, std::move(tools), choice, false, config_.seed);
        ++trace_.provider_calls;
        return r;
    }

    /// Runs the round's tool calls and appends the assistant turn and one tool
    /// message per call to the conversation.
    void dispatch(Round& r, std::vector<ChatMessage>& convo, int iteration) {
        auto calls = r.response ? r.response->tool_calls : std::vector<ToolCall>{};
        for (std::size_t i = 0; i < calls.size(); ++i) {
            if (calls[i].id.empty()) calls[i].id = "call_" + std::to_string(trace_.rounds.size() + 1) + "_" + std::to_string(i + 1);
        }
        convo.push_back(ChatMessage::assistant(r.response ? r.response->text.value_or("") : "", calls));
        dispatch_calls(r, calls, convo, iteration);
    }

    void dispatch_calls(Round& r, const std::vector<ToolCall>& calls, std::vector<ChatMessage>& convo,
                        int iteration) {
        for (const auto& call : calls) {
            try {
                auto record = deps_.toolbox->dispatch(call, iteration);
                convo.push_back(ChatMessage::tool(call.id, deps_.toolbox->render(record)));
                r.calls.push_back(std::move(record));
            } catch (const ValidationError& e) {
                r.call_errors.push_back(call.name + ": " + e.what());
                flag(kFlagToolError);
                spdlog::warn("question {}: tool call rejected: {}", q_.id, r.call_errors.back());
                convo.push_back(ChatMessage::tool(call.id, json{{"error", e.what()}}.dump()));
            }
        }
    }

    std::string answer_turn(std::string phase, const std::vector<ChatMessage>& convo) {
        auto r = turn(std::move(phase), config_.answer_model, convo, {}, ToolChoice::none());
        auto text = settle(provider::text_of(*r.response));
        trace_.rounds.push_back(std::move(r));
        return text;
    }

    /// The model's answer, or the fallback when it produced none.
    std::string settle(const std::string& text) {
        if (!trimmed(text).empty()) return text;
        flag(kFlagDeclined);
        return std::string(prompts::kFallbackAnswer);
    }

    void flag(std::string_view f) {
        if (!trace_.has_flag(f)) trace_.flags.emplace_back(f);
    }

    /// A tool turn followed by an answer turn, or just the tool turn when the
    /// model answered without calling anything.
    std::string cycle(const std::string& prefix, std::vector<ChatMessage>& convo, ToolChoice choice, int iteration) {
        auto r = turn(prefix + "tools", config_.fc_model, convo, function_schemas(), choice);
        if (r.response->tool_calls.empty()) {
            auto text = settle(provider::text_of(*r.response));
            trace_.rounds.push_back(std::move(r));
            return text;
        }
        dispatch(r, convo, iteration);
        trace_.rounds.push_back(std::move(r));
        return answer_turn(prefix + "answer", convo);
    }

    void run_single(ToolChoice choice, bool with_category) {
        if (with_category && !q_.category) {
            throw ValidationError("question " + q_.id + ": fc_categorize needs the question's category");
        }
        auto convo = opening(with_category);
        trace_.answer = cycle("", convo, choice, 1);
    }

    void run_iterative() {
        auto convo = opening(false);
        for (int round = 1; round <= config_.max_rounds; ++round) {
            auto r = turn("tools", config_.fc_model, convo, function_schemas(),
                          round == 1 ? ToolChoice::required() : ToolChoice::automatic());
            if (r.response->tool_calls.empty()) {
                trace_.rounds.push_back(std::move(r));
                break;
            }
            dispatch(r, convo, round);
            trace_.rounds.push_back(std::move(r));
            if (round == config_.max_rounds) flag(kFlagRoundBound);
        }
        trace_.answer = answer_turn("answer", convo);
    }

    void run_feedback() {
        if (!deps_.judge) throw ValidationError("fc_feedback needs a judge");
        auto convo = opening(false);
        trace_.answer = cycle("", convo, ToolChoice::required(), 1);
        for (int fr = 0;; ++fr) {
            Review review;
            try {
                review = deps_.judge->review(q_.text, trace_.answer);
            } catch (const ContractViolation& e) {
                spdlog::warn("question {}: judge failed, keeping answer: {}", q_.id, e.what());
                flag(kFlagJudgeFailure);
                return;
            }
            trace_.final_review = review;
            if (!config_.feedback_threshold.needs_revision(review.judgment)) return;
            if (fr == config_.max_feedback_rounds) {
                flag(kFlagFeedbackUnresolved);
                return;
            }
            trace_.judge_feedback.push_back(review);
            convo.push_back(ChatMessage::assistant(trace_.answer));
            convo.push_back(ChatMessage::user(feedback_message(review)));
            trace_.answer = cycle("revision_", convo, ToolChoice::automatic(), fr + 2);
        }
    }

    static std::string feedback_message(const Review& review) {
        const auto& j = review.judgment;
        std::string msg = "A reviewer scored your answer: factuality " + std::to_string(j.factuality) +
                          "/5, relevance " + std::to_string(j.relevance) + "/5, style " + std::to_string(j.style) +
                          "/3.";
        if (!review.feedback.empty()) msg += "\nFeedback: " + review.feedback;
        msg += "\nRevise your answer. You may call the functions again for more course material.";
        return msg;
    }

    void run_multihop() {
        const std::vector<ChatMessage> select_messages{
            ChatMessage::system(std::string(prompts::kSelectFunctions) + "\n\nFunctions:\n" + function_menu()),
            ChatMessage::user(q_.text)};
        auto sel = turn("select", config_.fc_model, select_messages, {}, ToolChoice::none());
        const auto names = parse_function_list(provider::text_of(*sel.response), &sel.call_errors);
        trace_.rounds.push_back(std::move(sel));

        auto convo = opening(false);
        if (names.empty()) {
            spdlog::warn("question {}: no valid function selected in the first hop; forcing a call", q_.id);
            flag(kFlagMultihopFallback);
            trace_.answer = cycle("", convo, ToolChoice::required(), 1);
            return;
        }
        const auto base = opening(false);
        for (auto name : names) {
            const std::string fn(to_string(name));
            auto r = turn("arguments", config_.fc_model, base, {schema_for(name)}, ToolChoice::specific(fn));
            dispatch(r, convo, 1);
            trace_.rounds.push_back(std::move(r));
        }
        trace_.answer = answer_turn("answer", convo);
    }

    void run_edison() {
        if (!q_.category) throw ValidationError("question " + q_.id + ": edison needs the question's category");
        auto rule = config_.edison_rules.find(*q_.category);
        if (rule == config_.edison_rules.end() || rule->second.empty()) {
            throw ValidationError("edison_rules has no functions for category " +
                                  std::string(to_string(*q_.category)));
        }
        std::vector<ToolCall> calls;
        for (auto f : rule->second) {
            calls.push_back({"rule_" + std::to_string(calls.size() + 1), std::string(to_string(f)),
                             json{{"query", q_.text}}});
        }
        auto convo = opening(false);
        convo.push_back(ChatMessage::assistant("", calls));
        Round r;
        r.phase = "rules";
        dispatch_calls(r, calls, convo, 1);
        trace_.rounds.push_back(std::move(r));
        trace_.answer = answer_turn("answer", convo);
    }

    const StudentQuestion& q_;
    const PipelineConfig& config_;
    const PipelineDeps& deps_;
    PipelineTrace trace_;
};

} // namespace

PipelineTrace run_pipeline(const StudentQuestion& question, const PipelineConfig& config, const PipelineDeps& deps) {
    config.validate();
    if (!deps.chat) throw ValidationError("pipeline needs a chat client");
    if (!deps.toolbox) throw ValidationError("pipeline needs a toolbox");
    if (question.text.empty()) throw ValidationError("question " + question.id + " has no text");
    return Runner(question, config, deps).run();
}

} // namespace forumqa
