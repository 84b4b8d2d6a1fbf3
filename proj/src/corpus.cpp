#include "forumqa/corpus.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "forumqa/error.hpp"

namespace forumqa {

using nlohmann::json;

std::string_view to_string(SourceKind kind) {
    switch (kind) {
    case SourceKind::qa: return "qa";
    case SourceKind::textbook: return "textbook";
    case SourceKind::assignment: return "assignment";
    case SourceKind::logistics: return "logistics";
    }
    return "unknown";
}

SourceKind parse_source_kind(std::string_view text) {
    for (auto kind : kAllSourceKinds) {
        if (to_string(kind) == text) return kind;
    }
    throw ValidationError("unknown source kind \"" + std::string(text) + "\"");
}

SourceKind source_of(FunctionName name) {
    switch (name) {
    case FunctionName::qa_retrieval: return SourceKind::qa;
    case FunctionName::textbook_retrieval: return SourceKind::textbook;
    case FunctionName::assignment_retrieval: return SourceKind::assignment;
    case FunctionName::logistics_retrieval: return SourceKind::logistics;
    }
    throw ValidationError("unknown function");
}

FunctionName function_for(SourceKind kind) {
    switch (kind) {
    case SourceKind::qa: return FunctionName::qa_retrieval;
    case SourceKind::textbook: return FunctionName::textbook_retrieval;
    case SourceKind::assignment: return FunctionName::assignment_retrieval;
    case SourceKind::logistics: return FunctionName::logistics_retrieval;
    }
    throw ValidationError("unknown source kind");
}

std::string_view to_string(Category category) {
    switch (category) {
    case Category::conceptual: return "conceptual";
    case Category::assignment: return "assignment";
    case Category::logistics: return "logistics";
    }
    return "unknown";
}

Category parse_category(std::string_view text) {
    for (auto c : {Category::conceptual, Category::assignment, Category::logistics}) {
        if (to_string(c) == text) return c;
    }
    throw ValidationError("unknown category \"" + std::string(text) + "\"");
}

std::string render_qa_body(const QAPair& qa) {
    return "Question: " + qa.question + "\nAnswer: " + qa.answer;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
    by_id_.reserve(docs_.size());
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        const auto& doc = docs_[i];
        if (doc.id.empty()) throw ValidationError("document with empty id");
        if (doc.body.empty()) throw ValidationError("document \"" + doc.id + "\" has an empty body");
        if (doc.kind == SourceKind::qa) {
            if (!doc.qa || doc.qa->question.empty() || doc.qa->answer.empty()) {
                throw ValidationError("qa document \"" + doc.id + "\" is not a question/answer pair");
            }
        }
        if (!by_id_.emplace(doc.id, i).second) {
            throw ValidationError("duplicate document id \"" + doc.id + "\"");
        }
    }
}

const Document* Corpus::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const Document& Corpus::at(std::string_view id) const {
    if (const auto* doc = find(id)) return *doc;
    throw ValidationError("unknown document id \"" + std::string(id) + "\"");
}

std::vector<const Document*> Corpus::of_kind(SourceKind kind) const {
    std::vector<const Document*> out;
    for (const auto& doc : docs_) {
        if (doc.kind == kind) out.push_back(&doc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSONL helpers

namespace {

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        auto line = text.substr(pos, end - pos);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error& e) {
                throw ValidationError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
            }
            try {
                fn(j);
            } catch (const ValidationError& e) {
                throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
            } catch (const json::exception& e) {
                throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (end == text.size()) break;
        pos = end + 1;
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
    try {
        return fn(read_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

const json& required(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) throw ValidationError(std::string("missing field \"") + key + "\"");
    return *it;
}

std::string required_string(const json& j, const char* key) {
    const auto& v = required(j, key);
    if (!v.is_string()) throw ValidationError(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

QAPair parse_qa_body(const json& body, const std::string& id) {
    QAPair qa;
    if (body.is_object()) {
        if (auto it = body.find("question"); it != body.end() && it->is_string()) qa.question = *it;
        if (auto it = body.find("answer"); it != body.end() && it->is_string()) qa.answer = *it;
    } else if (body.is_string()) {
        // Rendered form: "Question: ...\nAnswer: ..."
        const auto text = body.get<std::string>();
        const auto a = text.find("\nAnswer:");
        const std::string q_prefix = "Question:";
        if (a != std::string::npos) {
            auto q = text.substr(0, a);
            if (q.rfind(q_prefix, 0) == 0) q = q.substr(q_prefix.size());
            qa.question = q;
            qa.answer = text.substr(a + 8);
            auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(" \t\r\n"));
                s.erase(s.find_last_not_of(" \t\r\n") + 1);
            };
            trim(qa.question);
            trim(qa.answer);
        }
    }
    if (qa.question.empty()) throw ValidationError("qa document \"" + id + "\": missing question");
    if (qa.answer.empty()) throw ValidationError("qa document \"" + id + "\": missing answer section");
    return qa;
}

Document document_from_json(const json& j) {
    Document doc;
    doc.id = required_string(j, "id");
    doc.kind = parse_source_kind(required_string(j, "kind"));
    if (auto it = j.find("title"); it != j.end() && it->is_string()) doc.title = *it;
    if (auto it = j.find("metadata"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) throw ValidationError("metadata must be an object");
        for (const auto& [key, value] : it->items()) {
            doc.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
    }
    const auto& body = required(j, "body");
    if (doc.kind == SourceKind::qa) {
        doc.qa = parse_qa_body(body, doc.id);
        doc.body = render_qa_body(*doc.qa);
    } else {
        if (!body.is_string()) throw ValidationError("document \"" + doc.id + "\": body must be a string");
        doc.body = body.get<std::string>();
    }
    if (doc.body.empty()) throw ValidationError("document \"" + doc.id + "\" has an empty body");
    return doc;
}

json document_to_json(const Document& doc) {
    json j;
    j["id"] = doc.id;
    j["kind"] = to_string(doc.kind);
    j["title"] = doc.title;
    if (doc.kind == SourceKind::qa && doc.qa) {
        j["body"] = {{"question", doc.qa->question}, {"answer", doc.qa->answer}};
    } else {
        j["body"] = doc.body;
    }
    j["metadata"] = doc.metadata;
    return j;
}

StudentQuestion question_from_json(const json& j) {
    StudentQuestion q;
    q.id = required_string(j, "id");
    q.text = required_string(j, "text");
    if (q.text.empty()) throw ValidationError("question \"" + q.id + "\" has empty text");
    if (auto it = j.find("category"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw ValidationError("category must be a string");
        q.category = parse_category(it->get<std::string>());
    }
    if (auto it = j.find("week"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer() || it->get<int>() < 1) {
            throw ValidationError("question \"" + q.id + "\": week must be an integer >= 1");
        }
        q.week = it->get<int>();
    }
    return q;
}

json question_to_json(const StudentQuestion& q) {
    json j;
    j["id"] = q.id;
    j["text"] = q.text;
    j["category"] = q.category ? json(to_string(*q.category)) : json(nullptr);
    j["week"] = q.week ? json(*q.week) : json(nullptr);
    return j;
}

GroundTruth label_from_json(const json& j) {
    GroundTruth g;
    g.question_id = required_string(j, "question_id");
    if (auto it = j.find("functions"); it != j.end() && !it->is_null()) {
        for (const auto& f : *it) g.functions.insert(parse_function_name(f.get<std::string>()));
    }
    if (auto it = j.find("ta_answer"); it != j.end() && it->is_string()) g.ta_answer = *it;
    if (auto it = j.find("ta_scores"); it != j.end() && !it->is_null()) {
        g.ta_scores = judgment_from_json(*it);
    }
    if (auto it = j.find("relevant_docs"); it != j.end() && !it->is_null()) {
        for (const auto& d : *it) g.relevant_docs.insert(d.get<std::string>());
    }
    return g;
}

json label_to_json(const GroundTruth& g) {
    json j;
    j["question_id"] = g.question_id;
    j["functions"] = json::array();
    for (auto f : g.functions) j["functions"].push_back(to_string(f));
    j["ta_answer"] = g.ta_answer ? json(*g.ta_answer) : json(nullptr);
    j["ta_scores"] = g.ta_scores ? to_json(*g.ta_scores) : json(nullptr);
    j["relevant_docs"] = g.relevant_docs;
    return j;
}

} // namespace

// ---------------------------------------------------------------------------
// Public loaders

Corpus parse_corpus(std::string_view jsonl) {
    std::vector<Document> docs;
    std::set<std::string> seen;
    for_each_line(jsonl, [&](const json& j) {
        auto doc = document_from_json(j);
        if (!seen.insert(doc.id).second) throw ValidationError("duplicate document id \"" + doc.id + "\"");
        docs.push_back(std::move(doc));
    });
    return Corpus(std::move(docs));
}

std::vector<StudentQuestion> parse_questions(std::string_view jsonl) {
    std::vector<StudentQuestion> out;
    std::set<std::string> seen;
    for_each_line(jsonl, [&](const json& j) {
        auto q = question_from_json(j);
        if (!seen.insert(q.id).second) throw ValidationError("duplicate question id \"" + q.id + "\"");
        out.push_back(std::move(q));
    });
    return out;
}

void validate_labels(const std::vector<GroundTruth>& labels,
                     const std::vector<StudentQuestion>& questions,
                     const Corpus* corpus) {
    std::set<std::string> ids;
    for (const auto& q : questions) ids.insert(q.id);
    for (const auto& g : labels) {
        if (!ids.contains(g.question_id)) {
            throw ValidationError("label references unknown question id \"" + g.question_id + "\"");
        }
        if (corpus) {
            for (const auto& d : g.relevant_docs) {
                if (!corpus->contains(d)) {
                    throw ValidationError("label for \"" + g.question_id +
                                          "\" references unknown document \"" + d + "\"");
                }
            }
        }
    }
}

std::vector<GroundTruth> parse_labels(std::string_view jsonl,
                                      const std::vector<StudentQuestion>& questions,
                                      const Corpus* corpus) {
    std::vector<GroundTruth> out;
    for_each_line(jsonl, [&](const json& j) { out.push_back(label_from_json(j)); });
    validate_labels(out, questions, corpus);
    return out;
}

Corpus load_corpus(const std::filesystem::path& path) {
    return with_path(path, [](const std::string& text) { return parse_corpus(text); });
}

std::vector<StudentQuestion> load_questions(const std::filesystem::path& path) {
    return with_path(path, [](const std::string& text) { return parse_questions(text); });
}

std::vector<GroundTruth> load_labels(const std::filesystem::path& path,
                                     const std::vector<StudentQuestion>& questions,
                                     const Corpus* corpus) {
    return with_path(path, [&](const std::string& text) { return parse_labels(text, questions, corpus); });
}

std::string serialize_corpus(const Corpus& corpus) {
    std::string out;
    for (const auto& doc : corpus.documents()) out += document_to_json(doc).dump() + "\n";
    return out;
}

std::string serialize_questions(const std::vector<StudentQuestion>& questions) {
    std::string out;
    for (const auto& q : questions) out += question_to_json(q).dump() + "\n";
    return out;
}

std::string serialize_labels(const std::vector<GroundTruth>& labels) {
    std::string out;
    for (const auto& g : labels) out += label_to_json(g).dump() + "\n";
    return out;
}

} // namespace forumqa
