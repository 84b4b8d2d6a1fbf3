#include "forumqa/sim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>

#include <nlohmann/json.hpp>

#include "forumqa/error.hpp"
#include "forumqa/prompts.hpp"

namespace forumqa::sim {

using nlohmann::json;
using provider::ChatMessage;
using provider::CompletionRequest;
using provider::CompletionResponse;
using provider::Role;
using provider::ToolCall;

namespace {

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_number(std::string_view s) {
    if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front())) ||
        !std::isdigit(static_cast<unsigned char>(s.back()))) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; });
}

/// Lower-case words made of letters, digits and inner dots ("3.2").
std::vector<std::string> words(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        while (!cur.empty() && cur.back() == '.') cur.pop_back();
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || (c == '.' && !cur.empty())) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

/// Splits "hw3" into ("hw", "3"); returns false when there is no such split.
bool split_prefix_number(const std::string& w, std::string& prefix, std::string& number) {
    std::size_t i = 0;
    while (i < w.size() && std::isalpha(static_cast<unsigned char>(w[i]))) ++i;
    if (i == 0 || i == w.size()) return false;
    prefix = w.substr(0, i);
    number = w.substr(i);
    return is_number(number);
}

const std::set<std::string>& stop_words() {
    static const std::set<std::string> s{
        "a",     "about", "an",    "and",    "any",   "are",  "as",    "at",    "be",    "been",  "before",
        "can",   "come",  "could", "do",     "does",  "each", "for",   "from",  "has",   "have",  "how",
        "i",     "in",    "is",    "it",     "its",   "me",   "mean",  "my",    "not",   "of",    "on",
        "or",    "part",  "should", "so",    "some",  "still", "stuck", "than", "that",  "the",   "their",
        "then",  "there", "these", "think",  "this",  "to",   "understand", "up", "use",  "using", "was",
        "we",    "what",  "when",  "where",  "which", "while", "who",  "why",   "will",  "with",  "would",
        "you",   "your",  "find",  "course", "note",  "notes", "someone", "explain", "covers", "keywords",
        "does",  "did",   "am",    "by",     "if",    "into", "our",   "out",   "per",   "than",  "also"};
    return s;
}

const std::set<std::string>& structural_words() {
    static const std::set<std::string> s{"question", "questions", "homework", "hw", "section", "sec", "chapter",
                                         "ch",       "part",      "q",        "problem", "lab", "project"};
    return s;
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Deterministic randomness for a request aspect.
class Dice {
public:
    Dice(std::string_view model, std::int64_t seed, std::string_view question, std::string_view purpose)
        : rng_(fnv1a(purpose, fnv1a(question, fnv1a(model, static_cast<std::uint64_t>(seed) * 0x9E3779B97F4A7C15ULL)))) {}
    double uniform() { return static_cast<double>(rng_() >> 11) * (1.0 / 9007199254740992.0); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

private:
    std::mt19937_64 rng_;
};

double model_noise(std::string_view model) {
    const auto m = lower(model);
    if (m.find("weak") != std::string::npos) return 0.35;
    if (m.find("mini") != std::string::npos || m.find("small") != std::string::npos) return 0.15;
    return 0.05;
}

double overlap(const std::set<std::string>& have, const std::set<std::string>& want) {
    if (want.empty()) return 0.0;
    std::size_t n = 0;
    for (const auto& w : want) n += have.contains(w) ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(want.size());
}

std::string between(std::string_view text, std::string_view open, std::string_view close) {
    auto b = text.find(open);
    if (b == std::string_view::npos) return {};
    b += open.size();
    auto e = close.empty() ? std::string_view::npos : text.find(close, b);
    return std::string(text.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    return std::string(s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1));
}

std::vector<std::string> lines(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        out.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

/// Sentences of a text, split on ". " and newlines.
std::vector<std::string> sentences(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n' || (c == '.' && (i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '\n'))) {
            if (c == '.') cur.push_back(c);
            if (auto t = trim(cur); !t.empty()) out.push_back(t);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (auto t = trim(cur); !t.empty()) out.push_back(t);
    return out;
}

const ChatMessage* last_user(const CompletionRequest& r) {
    for (auto it = r.messages.rbegin(); it != r.messages.rend(); ++it) {
        if (it->role == Role::user) return &*it;
    }
    return nullptr;
}

const ChatMessage* first_user(const CompletionRequest& r) {
    for (const auto& m : r.messages) {
        if (m.role == Role::user) return &m;
    }
    return nullptr;
}

CompletionResponse text(std::string t) {
    CompletionResponse r;
    r.text = std::move(t);
    return r;
}

} // namespace

// ---------------------------------------------------------------------------
// Text analysis

std::set<std::string> structural_refs(std::string_view text) {
    std::set<std::string> refs;
    const auto ws = words(text);
    auto add = [&](const std::string& kind, const std::string& number) {
        if (kind == "hw" || kind == "homework") {
            refs.insert("hw:" + number);
        } else if (kind == "q" || kind == "question" || kind == "problem" || kind == "part") {
            refs.insert("q:" + number);
        } else if (kind == "ch" || kind == "chapter") {
            refs.insert("ch:" + number);
        } else if (kind == "section" || kind == "sec") {
            refs.insert("sec:" + number);
            if (auto dot = number.find('.'); dot != std::string::npos) refs.insert("ch:" + number.substr(0, dot));
        }
    };
    for (std::size_t i = 0; i < ws.size(); ++i) {
        std::string prefix, number;
        if (split_prefix_number(ws[i], prefix, number)) {
            add(prefix, number);
        } else if (structural_words().contains(ws[i]) && i + 1 < ws.size() && is_number(ws[i + 1])) {
            add(ws[i], ws[i + 1]);
        }
    }
    return refs;
}

std::set<std::string> content_words(std::string_view text) {
    std::set<std::string> out;
    for (const auto& w : words(text)) {
        if (w.size() < 2 || stop_words().contains(w) || structural_words().contains(w)) continue;
        if (std::any_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) continue;
        out.insert(w);
    }
    return out;
}

double relevance_score(std::string_view question, std::string_view document) {
    const auto q_refs = structural_refs(question);
    const double lexical = overlap(content_words(document), content_words(question));
    double score;
    if (q_refs.empty()) {
        score = 0.05 + 0.9 * lexical;
    } else {
        score = 0.05 + 0.8 * overlap(structural_refs(document), q_refs) + 0.15 * lexical;
    }
    return std::clamp(score, 0.01, 0.99);
}

std::vector<std::string> find_headers(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& raw : lines(text)) {
        auto line = trim(raw);
        if (!line.empty() && line.back() == ':') line.pop_back();
        const auto ws = words(line);
        if (ws.size() != 2 || !is_number(ws[1])) continue;
        if (ws[0] != "question" && ws[0] != "section" && ws[0] != "part" && ws[0] != "problem") continue;
        // Only plain "<Word> <number>" lines.
        if (line.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789. ") != std::string::npos) {
            continue;
        }
        out.push_back(line);
    }
    return out;
}

std::set<std::string> ideal_functions(std::string_view question, std::string_view category) {
    static const std::set<std::string> logistics{"late",     "policy", "office",  "hours",    "exam",   "midterm",
                                                 "final",    "grade",  "grading", "extension", "regrade", "deadline",
                                                 "due",      "room",   "slip",    "schedule", "breakdown", "submission"};
    static const std::set<std::string> textbook{"chapter", "section", "textbook", "lecture", "reading", "notes", "note"};
    static const std::set<std::string> assignment{"hw", "homework", "assignment", "lab", "project", "autograder"};
    static const std::set<std::string> qa{"before", "anyone", "again", "similar", "others"};

    std::set<std::string> out;
    const auto ws = words(question);
    const auto refs = structural_refs(question);
    auto any_in = [&](const std::set<std::string>& vocab) {
        return std::any_of(ws.begin(), ws.end(), [&](const std::string& w) { return vocab.contains(w); });
    };
    bool has_hw = false, has_ch = false;
    for (const auto& r : refs) {
        has_hw |= starts_with(r, "hw:");
        has_ch |= starts_with(r, "ch:") || starts_with(r, "sec:");
    }
    if (has_hw || any_in(assignment)) out.insert("assignment_retrieval");
    if (has_ch || any_in(textbook)) out.insert("textbook_retrieval");
    if (any_in(logistics)) out.insert("logistics_retrieval");
    if (any_in(qa)) out.insert("qa_retrieval");

    if (category == "logistics") {
        out = {"logistics_retrieval"};
    } else if (category == "assignment") {
        out.insert("assignment_retrieval");
        out.erase("logistics_retrieval");
    } else if (category == "conceptual") {
        out.erase("logistics_retrieval");
        if (!out.contains("textbook_retrieval") && !out.contains("qa_retrieval")) out.insert("textbook_retrieval");
    }
    if (out.empty()) out = {"textbook_retrieval", "qa_retrieval"};
    return out;
}

// ---------------------------------------------------------------------------
// Prompt handlers

namespace {

const std::array<std::string, 4> kFunctionNames{"qa_retrieval", "textbook_retrieval", "assignment_retrieval",
                                                "logistics_retrieval"};

CompletionResponse relevance(const CompletionRequest& r) {
    const auto* user = last_user(r);
    if (user == nullptr) throw ProviderError("relevance request without a user message");
    const auto question = between(user->content, std::string(prompts::kQuestionLabel) + " ", "\n\n");
    const auto document = between(user->content, std::string(prompts::kDocumentLabel) + "\n",
                                  "\n\n" + std::string(prompts::kRelevanceQuestion));
    const double p = relevance_score(question, document);
    CompletionResponse out = text(p >= 0.5 ? "Yes" : "No");
    std::vector<provider::TokenLogprob> top{{"Yes", std::log(p)}, {"No", std::log(1.0 - p)}};
    if (p < 0.5) std::swap(top[0], top[1]);
    out.logprobs = std::move(top);
    return out;
}

CompletionResponse summarize(const CompletionRequest& r) {
    const auto* user = last_user(r);
    if (user == nullptr) throw ProviderError("summary request without a user message");
    const auto title = between(user->content, std::string(prompts::kTitleLabel) + " ", "\n");
    const auto body = between(user->content, "\n\n", "");

    // Headers in order of first appearance, including those quoted by child summaries.
    std::vector<std::string> headers;
    const auto ws = words(body);
    static const std::map<std::string, std::string> display{
        {"question", "Question"}, {"section", "Section"}, {"part", "Part"}, {"problem", "Problem"}};
    for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
        auto it = display.find(ws[i]);
        if (it == display.end() || !is_number(ws[i + 1])) continue;
        auto h = it->second + " " + ws[i + 1];
        if (std::find(headers.begin(), headers.end(), h) == headers.end()) headers.push_back(std::move(h));
    }

    std::map<std::string, int> freq;
    for (const auto& w : ws) {
        if (w.size() > 2 && !stop_words().contains(w) && !structural_words().contains(w) &&
            !std::any_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            ++freq[w];
        }
    }
    std::vector<std::pair<std::string, int>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

    std::string out = title + ".";
    std::size_t word_count = words(out).size();
    if (!headers.empty()) {
        out += " Covers:";
        for (std::size_t i = 0; i < headers.size() && word_count < 80; ++i) {
            out += (i == 0 ? " " : ", ") + headers[i];
            word_count += 2;
        }
        out += ".";
    }
    if (!ranked.empty()) {
        out += " Keywords:";
        for (std::size_t i = 0; i < ranked.size() && i < 10 && word_count < 118; ++i, ++word_count) {
            out += (i == 0 ? " " : ", ") + ranked[i].first;
        }
        out += ".";
    }
    return text(out);
}

CompletionResponse detect_headers(const CompletionRequest& r) {
    const auto* user = last_user(r);
    if (user == nullptr) throw ProviderError("header request without a user message");
    return text(json(find_headers(between(user->content, "\n\n", ""))).dump());
}

CompletionResponse table_of_contents(const CompletionRequest& r) {
    const auto* user = last_user(r);
    if (user == nullptr) throw ProviderError("table of contents request without a user message");
    const auto question = between(user->content, std::string(prompts::kQuestionLabel) + " ", "\n\n");
    std::size_t max_select = 1;
    if (auto n = between(user->content, "Select at most ", " entries"); !n.empty()) max_select = std::stoul(n);

    std::vector<std::pair<double, std::string>> scored;
    for (const auto& line : lines(between(user->content, "Table of contents:\n", ""))) {
        if (line.empty() || line.front() != '[') continue;
        const auto close = line.find(']');
        if (close == std::string::npos) continue;
        scored.emplace_back(relevance_score(question, line.substr(close + 1)), line.substr(1, close - 1));
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    json picks = json::array();
    for (const auto& [score, id] : scored) {
        if (picks.size() == max_select || score < 0.9 * scored.front().first) break;
        picks.push_back(id);
    }
    return text(picks.dump());
}

/// Recall of `reference` content words in `text`.
double coverage(std::string_view text, std::string_view reference) {
    return overlap(content_words(text), content_words(reference));
}

CompletionResponse judge(const CompletionRequest& r) {
    const auto* user = last_user(r);
    if (user == nullptr) throw ProviderError("judge request without a user message");
    const std::string q_label = std::string(prompts::kJudgeQuestionLabel) + " ";
    const std::string a_label = "\n\n" + std::string(prompts::kJudgeAnswerLabel) + " ";
    const std::string t_label = "\n\n" + std::string(prompts::kJudgeTruthLabel) + " ";
    const auto question = between(user->content, q_label, a_label);
    const auto answer = between(user->content, a_label, t_label);
    const auto truth = between(user->content, t_label, "");
    const bool with_feedback = r.messages.front().content.find("\"feedback\"") != std::string::npos;

    const bool declined = answer.find("Sorry, I do not know") != std::string::npos;
    auto level = [](double x, int max) { return std::clamp(1 + static_cast<int>(std::lround(x * (max - 1))), 1, max); };
    int f, rel;
    if (declined) {
        f = 2;
        rel = 1;
    } else if (truth == prompts::kNoTaAnswer) {
        f = level(std::min(1.0, 0.5 + coverage(answer, question)), 5);
        rel = level(std::min(1.0, 1.4 * coverage(answer, question)), 5);
    } else {
        f = level(coverage(answer, truth), 5);
        rel = level(std::min(1.0, 1.4 * coverage(answer, question)), 5);
    }
    const auto n_words = words(answer).size();
    int style = declined ? 1 : (n_words >= 8 && n_words <= 120 ? 3 : 2);

    Dice dice(r.model, r.seed, user->content, "judge");
    const double noise = model_noise(r.model);
    if (dice.uniform() < noise) f = std::clamp(f + (dice.below(2) == 0 ? -1 : 1), 1, 5);
    if (dice.uniform() < noise) rel = std::clamp(rel + (dice.below(2) == 0 ? -1 : 1), 1, 5);

    std::string reply = "{\"factuality\": " + std::to_string(f) + ", \"relevance\": " + std::to_string(rel) +
                        ", \"style\": " + std::to_string(style);
    if (with_feedback) {
        std::string fb;
        if (f < 5) fb += "Quote the course material that answers the question directly. ";
        if (rel < 5) fb += "Address the exact part of the question the student asked about. ";
        if (style < 3) fb += "Keep the answer short and point to the relevant section. ";
        if (fb.empty()) fb = "No changes needed.";
        reply += ", \"feedback\": " + json(trim(fb)).dump();
    }
    return text(reply + "}");
}

std::string category_of(const CompletionRequest& r) {
    const auto* user = first_user(r);
    if (user == nullptr || !starts_with(user->content, "Category: ")) return {};
    return between(user->content, "Category: ", "\n");
}

std::string question_of(const CompletionRequest& r) {
    const auto* user = first_user(r);
    if (user == nullptr) return {};
    if (starts_with(user->content, "Category: ")) return between(user->content, "\n", "");
    return user->content;
}

/// Noisy copy of the ideal selection for this model and seed.
std::vector<std::string> choose_functions(const CompletionRequest& r, const std::string& question,
                                          const std::string& category, std::string_view purpose) {
    const auto ideal = ideal_functions(question, category);
    std::vector<std::string> chosen(ideal.begin(), ideal.end());
    Dice dice(r.model, r.seed, question, purpose);
    const double noise = model_noise(r.model) * (category.empty() ? 1.0 : 0.5);
    if (dice.uniform() < noise) {
        const auto wrong = kFunctionNames[dice.below(kFunctionNames.size())];
        if (chosen.size() > 1 && dice.below(2) == 0) {
            chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(dice.below(chosen.size())));
        } else {
            chosen[dice.below(chosen.size())] = wrong;
        }
    }
    if (dice.uniform() < noise / 2) chosen.push_back(kFunctionNames[dice.below(kFunctionNames.size())]);
    std::vector<std::string> unique;
    for (auto& c : chosen) {
        if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(std::move(c));
    }
    return unique;
}

std::string search_query(const std::string& question, const std::string& function) {
    if (function == "logistics_retrieval") {
        const auto cw = content_words(question);
        std::string q;
        for (const auto& w : words(question)) {
            if (cw.contains(w)) q += (q.empty() ? "" : " ") + w;
        }
        return q.empty() ? question : q;
    }
    return question;
}

ToolCall make_call(const std::string& function, const std::string& question, std::size_t ordinal) {
    json args{{"query", search_query(question, function)}};
    if (function == "qa_retrieval") args["top_k"] = 3;
    return {"call_" + std::to_string(ordinal), function, std::move(args)};
}

/// Best sentences from the tool results seen so far.
std::string compose_answer(const CompletionRequest& r, const std::string& question, bool revised) {
    struct Candidate {
        double score;
        std::string sentence;
        std::string source;
    };
    std::vector<Candidate> candidates;
    const auto q_words = content_words(question);
    const auto q_refs = structural_refs(question);
    for (const auto& m : r.messages) {
        if (m.role != Role::tool) continue;
        json payload;
        try {
            payload = json::parse(m.content);
        } catch (const json::exception&) {
            continue;
        }
        if (!payload.contains("results")) continue;
        for (const auto& item : payload["results"]) {
            std::string source = item.value("title", item.value("source", std::string()));
            if (item.contains("section")) source += ", " + item["section"].get<std::string>();
            const std::string content = item.contains("answer") ? item["answer"].get<std::string>()
                                                                : item.value("content", std::string());
            const double ref_bonus =
                q_refs.empty() ? 0.0 : overlap(structural_refs(source + " " + content), q_refs);
            for (const auto& s : sentences(content)) {
                if (words(s).size() < 4) continue;
                candidates.push_back({overlap(content_words(s), q_words) + ref_bonus, s, source});
            }
        }
    }
    if (candidates.empty()) return std::string(prompts::kFallbackAnswer);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
    if (candidates.front().score <= 0.0) return std::string(prompts::kFallbackAnswer);
    std::string answer = "According to " + candidates.front().source + ": " + candidates.front().sentence;
    if (revised && candidates.size() > 1 && candidates[1].sentence != candidates.front().sentence) {
        answer += " Also, " + candidates[1].sentence;
    }
    return answer;
}

CompletionResponse teaching_assistant(const CompletionRequest& r) {
    const auto question = question_of(r);
    const auto category = category_of(r);
    const bool revised = std::any_of(r.messages.begin(), r.messages.end(), [](const ChatMessage& m) {
        return m.role == Role::user && starts_with(m.content, "A reviewer scored");
    });

    std::set<std::string> called;
    std::size_t tool_messages = 0;
    for (const auto& m : r.messages) {
        if (m.role == Role::tool) ++tool_messages;
        for (const auto& c : m.tool_calls) called.insert(c.name);
    }

    using Mode = provider::ToolChoice::Mode;
    const auto mode = r.tool_choice.mode;
    if (mode == Mode::none || r.tools.empty()) return text(compose_answer(r, question, revised));

    std::set<std::string> offered;
    for (const auto& t : r.tools) offered.insert(t.name);
    CompletionResponse out;
    auto add = [&](const std::string& fn) {
        if (offered.contains(fn)) out.tool_calls.push_back(make_call(fn, question, tool_messages + out.tool_calls.size() + 1));
    };

    if (mode == Mode::specific) {
        add(r.tool_choice.name);
        return out;
    }

    Dice dice(r.model, r.seed, question, "round" + std::to_string(tool_messages));
    const double noise = model_noise(r.model);
    if (called.empty()) {
        // First tool turn: an unforced model sometimes answers from memory.
        if (mode == Mode::automatic && dice.uniform() < noise + 0.1) return text(compose_answer(r, question, revised));
        for (const auto& fn : choose_functions(r, question, category, "select")) add(fn);
        if (out.tool_calls.empty()) add(*offered.begin());
        return out;
    }

    // Follow-up turn: fetch what is still missing, occasionally re-query.
    for (const auto& fn : ideal_functions(question, category)) {
        if (!called.contains(fn)) add(fn);
    }
    if (out.tool_calls.empty() && dice.uniform() < noise) add(kFunctionNames[dice.below(kFunctionNames.size())]);
    if (out.tool_calls.empty() && mode == Mode::required) add(*ideal_functions(question, category).begin());
    if (out.tool_calls.empty()) return text(compose_answer(r, question, revised));
    return out;
}

CompletionResponse select_functions(const CompletionRequest& r) {
    const auto* user = last_user(r);
    if (user == nullptr) throw ProviderError("selection request without a user message");
    const auto chosen = choose_functions(r, user->content, "", "select");
    std::string reply;
    for (const auto& fn : chosen) reply += (reply.empty() ? "" : ", ") + fn;
    return text(reply);
}

} // namespace

CompletionResponse SimulatedCourseModel::complete(const CompletionRequest& request) {
    if (request.messages.empty() || request.messages.front().role != Role::system) {
        throw ProviderError("simulated model needs a system prompt");
    }
    const std::string_view system = request.messages.front().content;
    if (starts_with(system, prompts::kRelevance)) return relevance(request);
    if (starts_with(system, prompts::kSummarize)) return summarize(request);
    if (starts_with(system, prompts::kDetectHeaders)) return detect_headers(request);
    if (starts_with(system, prompts::kTableOfContents)) return table_of_contents(request);
    if (starts_with(system, prompts::kJudgeRubric)) return judge(request);
    if (starts_with(system, prompts::kSelectFunctions)) return select_functions(request);
    if (starts_with(system, prompts::kTeachingAssistant)) return teaching_assistant(request);
    throw ProviderError("simulated model does not recognise this prompt");
}

} // namespace forumqa::sim
