#include "forumqa/judge.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "forumqa/error.hpp"
#include "forumqa/prompts.hpp"

namespace forumqa {

using nlohmann::json;
using provider::ChatMessage;

std::vector<FewShot> parse_few_shots(std::string_view jsonl) {
    std::vector<FewShot> out;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = json::parse(line);
            FewShot shot{j.at("question").get<std::string>(), j.at("llm_answer").get<std::string>(),
                         j.at("ta_answer").get<std::string>(), judgment_from_json(j.at("scores"))};
            out.push_back(std::move(shot));
        } catch (const json::exception& e) {
            throw ValidationError("few-shot line " + std::to_string(line_no) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("few-shot line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<FewShot> load_few_shots(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open few-shot file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_few_shots(buf.str());
}

std::string serialize_few_shots(const std::vector<FewShot>& shots) {
    std::string out;
    for (const auto& s : shots) {
        out += json{{"question", s.question},
                    {"llm_answer", s.llm_answer},
                    {"ta_answer", s.ta_answer},
                    {"scores", to_json(s.scores)}}
                   .dump() +
               "\n";
    }
    return out;
}

std::vector<FewShot> synthetic_judge_set(const std::vector<StudentQuestion>& questions,
                                         const std::vector<GroundTruth>& labels, std::size_t count,
                                         std::uint64_t seed) {
    std::vector<std::pair<const StudentQuestion*, std::string>> pool;
    for (const auto& q : questions) {
        for (const auto& l : labels) {
            if (l.question_id == q.id && l.ta_answer) pool.emplace_back(&q, *l.ta_answer);
        }
    }
    if (pool.size() < 2) throw ValidationError("judge set needs at least two questions with TA answers");
    std::mt19937_64 rng(seed);
    std::vector<FewShot> out;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& [q, ta] = pool[i % pool.size()];
        FewShot shot{q->text, {}, ta, {}};
        switch (rng() % 4) {
            case 0:
                shot.llm_answer = "According to the course notes, " + ta;
                shot.scores = Judgment::make(5, 5, 3);
                break;
            case 1: {
                const auto cut = ta.find(' ', ta.size() / 2);
                shot.llm_answer = "I think the idea is that " + ta.substr(0, cut) + ", but check with a TA.";
                shot.scores = Judgment::make(3, 4, 3);
                break;
            }
            case 2: {
                const auto& other = pool[(i + 1 + rng() % (pool.size() - 1)) % pool.size()].second;
                shot.llm_answer = other == ta ? "This is covered somewhere in the course materials." : other;
                shot.scores = Judgment::make(1, 1, 2);
                break;
            }
            default:
                shot.llm_answer = std::string(prompts::kFallbackAnswer);
                shot.scores = Judgment::make(2, 1, 1);
                break;
        }
        out.push_back(std::move(shot));
    }
    return out;
}

std::string judge_triple(const std::string& question, const std::string& llm_answer, const std::string& ta_answer) {
    return std::string(prompts::kJudgeQuestionLabel) + " " + question + "\n\n" +
           std::string(prompts::kJudgeAnswerLabel) + " " + llm_answer + "\n\n" +
           std::string(prompts::kJudgeTruthLabel) + " " + ta_answer;
}

std::vector<ChatMessage> judge_messages(const std::string& question, const std::string& llm_answer,
                                        const std::string& ta_answer, const std::vector<FewShot>& few_shots,
                                        bool with_feedback) {
    std::string system(prompts::kJudgeRubric);
    if (with_feedback) system += prompts::kJudgeFeedbackAddendum;
    std::vector<ChatMessage> messages{ChatMessage::system(std::move(system))};
    for (const auto& shot : few_shots) {
        messages.push_back(ChatMessage::user(judge_triple(shot.question, shot.llm_answer, shot.ta_answer)));
        messages.push_back(ChatMessage::assistant("{\"factuality\": " + std::to_string(shot.scores.factuality) +
                                                  ", \"relevance\": " + std::to_string(shot.scores.relevance) +
                                                  ", \"style\": " + std::to_string(shot.scores.style) + "}"));
    }
    messages.push_back(ChatMessage::user(judge_triple(question, llm_answer, ta_answer)));
    return messages;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

/// Removes one ```lang ... ``` wrapper if the whole text is fenced.
std::string strip_fence(const std::string& text) {
    if (text.rfind("```", 0) != 0) return text;
    const auto nl = text.find('\n');
    if (nl == std::string::npos) return text;
    if (text.size() < nl + 1 + 3 || text.compare(text.size() - 3, 3, "```") != 0) return text;
    return trim(std::string_view(text).substr(nl + 1, text.size() - 3 - (nl + 1)));
}

} // namespace

JudgeParse parse_judgment_reply(std::string_view reply, bool with_feedback) {
    JudgeParse out;
    const auto text = strip_fence(trim(reply));

    std::set<std::string> seen;
    std::string duplicate;
    json::parser_callback_t track = [&](int depth, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::key && depth == 1) {
            const auto key = parsed.get<std::string>();
            if (!seen.insert(key).second && duplicate.empty()) duplicate = key;
        }
        return true;
    };
    json j;
    try {
        j = json::parse(text, track);
    } catch (const json::parse_error& e) {
        out.status = JudgeParse::Status::unparseable;
        out.error = std::string("not a JSON dictionary: ") + e.what();
        return out;
    }
    if (!j.is_object()) {
        out.status = JudgeParse::Status::unparseable;
        out.error = "reply is JSON but not a dictionary";
        return out;
    }
    out.status = JudgeParse::Status::invalid;
    if (!duplicate.empty()) {
        out.error = "duplicate key \"" + duplicate + "\"";
        return out;
    }
    if (with_feedback) {
        auto it = j.find("feedback");
        if (it == j.end() || !it->is_string()) {
            out.error = "missing string \"feedback\"";
            return out;
        }
        out.feedback = it->get<std::string>();
        j.erase("feedback");
    }
    try {
        out.judgment = judgment_from_json(j);
    } catch (const ValidationError& e) {
        out.error = e.what();
        out.feedback.reset();
        return out;
    }
    out.status = JudgeParse::Status::ok;
    return out;
}

Judge::Judge(std::shared_ptr<provider::ChatClient> chat, JudgeOptions options)
    : chat_(std::move(chat)), options_(std::move(options)) {
    if (!chat_) throw ValidationError("judge needs a chat client");
    if (options_.model.empty()) throw ValidationError("judge model is not set");
}

JudgeParse Judge::ask(std::vector<ChatMessage> messages, bool with_feedback) const {
    auto complete = [&] {
        return provider::text_of(chat_->chat_complete(options_.model, messages, {}, provider::ToolChoice::none(),
                                                      false, options_.seed));
    };
    auto reply = complete();
    auto parsed = parse_judgment_reply(reply, with_feedback);
    if (parsed.status == JudgeParse::Status::unparseable) {
        spdlog::warn("judge reply unparseable ({}); asking again", parsed.error);
        messages.push_back(ChatMessage::assistant(reply));
        messages.push_back(ChatMessage::user(std::string(prompts::kJudgeReask)));
        reply = complete();
        parsed = parse_judgment_reply(reply, with_feedback);
    }
    if (parsed.status != JudgeParse::Status::ok) throw ContractViolation("judge reply: " + parsed.error);
    return parsed;
}

Judgment Judge::evaluate(const std::string& question, const std::string& llm_answer,
                         const std::string& ta_answer) const {
    if (question.empty() || llm_answer.empty() || ta_answer.empty()) {
        throw ValidationError("judge needs a question, an answer and a TA answer");
    }
    return *ask(judge_messages(question, llm_answer, ta_answer, options_.few_shots), false).judgment;
}

Review Judge::review(const std::string& question, const std::string& llm_answer) const {
    if (question.empty() || llm_answer.empty()) throw ValidationError("judge needs a question and an answer");
    auto parsed = ask(judge_messages(question, llm_answer, std::string(prompts::kNoTaAnswer), options_.few_shots,
                                     true),
                      true);
    return {*parsed.judgment, parsed.feedback.value_or("")};
}

AlignmentReport align(const std::vector<Judgment>& judgments, const std::vector<Judgment>& ta_scores) {
    if (judgments.size() != ta_scores.size()) {
        throw ValidationError("alignment needs paired lists, got " + std::to_string(judgments.size()) + " and " +
                              std::to_string(ta_scores.size()));
    }
    if (judgments.empty()) throw ValidationError("alignment needs at least one pair");
    AlignmentReport report;
    report.n = judgments.size();
    auto accumulate = [&](DimensionAlignment& dim, int a, int b) {
        dim.exact_match += a == b ? 1.0 : 0.0;
        dim.mae += std::abs(a - b);
    };
    for (std::size_t i = 0; i < judgments.size(); ++i) {
        accumulate(report.factuality, judgments[i].factuality, ta_scores[i].factuality);
        accumulate(report.relevance, judgments[i].relevance, ta_scores[i].relevance);
        accumulate(report.style, judgments[i].style, ta_scores[i].style);
    }
    const auto n = static_cast<double>(report.n);
    for (auto* dim : {&report.factuality, &report.relevance, &report.style}) {
        dim->exact_match /= n;
        dim->mae /= n;
    }
    return report;
}

json to_json(const AlignmentReport& r) {
    auto dim = [](const DimensionAlignment& d) { return json{{"exact_match", d.exact_match}, {"mae", d.mae}}; };
    return {{"factuality", dim(r.factuality)}, {"relevance", dim(r.relevance)}, {"style", dim(r.style)}, {"n", r.n}};
}

json to_json(const JudgedRecord& r) {
    return {{"question_id", r.question_id}, {"pipeline", r.pipeline}, {"model", r.model},
            {"seed", r.seed},               {"scores", to_json(r.scores)}};
}

JudgedRecord judged_record_from_json(const json& j) {
    return {j.at("question_id").get<std::string>(), j.at("pipeline").get<std::string>(),
            j.at("model").get<std::string>(), j.at("seed").get<std::int64_t>(), judgment_from_json(j.at("scores"))};
}

} // namespace forumqa
