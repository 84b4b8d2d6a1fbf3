#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forumqa/function_name.hpp"
#include "forumqa/judgment.hpp"

namespace forumqa {

enum class SourceKind { qa, textbook, assignment, logistics };

inline constexpr std::array<SourceKind, 4> kAllSourceKinds = {
    SourceKind::qa, SourceKind::textbook, SourceKind::assignment, SourceKind::logistics};

std::string_view to_string(SourceKind kind);
SourceKind parse_source_kind(std::string_view text);

/// The source each retrieval function searches.
SourceKind source_of(FunctionName name);
FunctionName function_for(SourceKind kind);

enum class Category { conceptual, assignment, logistics };

std::string_view to_string(Category category);
Category parse_category(std::string_view text);

struct QAPair {
    std::string question;
    std::string answer;

    bool operator==(const QAPair&) const = default;
};

struct Document {
    std::string id;
    SourceKind kind = SourceKind::textbook;
    std::string title;
    /// Searchable text. For qa documents this is rendered from `qa`.
    std::string body;
    std::map<std::string, std::string> metadata;
    std::optional<QAPair> qa;

    bool operator==(const Document&) const = default;
};

/// Renders the searchable body text of a Q&A pair.
std::string render_qa_body(const QAPair& qa);

/// Immutable, validated collection of documents. Safe to share across threads.
class Corpus {
public:
    Corpus() = default;
    /// Validates ids (unique, non-empty), bodies and qa structure.
    explicit Corpus(std::vector<Document> docs);

    const std::vector<Document>& documents() const noexcept { return docs_; }
    std::size_t size() const noexcept { return docs_.size(); }
    bool empty() const noexcept { return docs_.empty(); }

    const Document* find(std::string_view id) const;
    const Document& at(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != nullptr; }

    std::vector<const Document*> of_kind(SourceKind kind) const;

    bool operator==(const Corpus& other) const { return docs_ == other.docs_; }

private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

struct StudentQuestion {
    std::string id;
    /// Image content, if any, is already transcribed into the text.
    std::string text;
    std::optional<Category> category;
    std::optional<int> week;

    bool operator==(const StudentQuestion&) const = default;
};

struct GroundTruth {
    std::string question_id;
    FunctionSet functions;
    std::optional<std::string> ta_answer;
    std::optional<Judgment> ta_scores;
    std::set<std::string> relevant_docs;

    bool operator==(const GroundTruth&) const = default;
};

// JSONL readers. Errors carry the file line number.
Corpus load_corpus(const std::filesystem::path& path);
std::vector<StudentQuestion> load_questions(const std::filesystem::path& path);
/// Checks every question_id against `questions`, and relevant_docs against
/// `corpus` when one is given.
std::vector<GroundTruth> load_labels(const std::filesystem::path& path,
                                     const std::vector<StudentQuestion>& questions,
                                     const Corpus* corpus = nullptr);

Corpus parse_corpus(std::string_view jsonl);
std::vector<StudentQuestion> parse_questions(std::string_view jsonl);
std::vector<GroundTruth> parse_labels(std::string_view jsonl,
                                      const std::vector<StudentQuestion>& questions,
                                      const Corpus* corpus = nullptr);

std::string serialize_corpus(const Corpus& corpus);
std::string serialize_questions(const std::vector<StudentQuestion>& questions);
std::string serialize_labels(const std::vector<GroundTruth>& labels);

void validate_labels(const std::vector<GroundTruth>& labels,
                     const std::vector<StudentQuestion>& questions,
                     const Corpus* corpus);

struct SyntheticSpec {
    std::map<SourceKind, int> documents;
    /// Total questions, spread round-robin over the kinds that have documents.
    int questions = 0;
};

struct SyntheticData {
    Corpus corpus;
    std::vector<StudentQuestion> questions;
    std::vector<GroundTruth> labels;
};

/// Deterministic course corpus for desk-scale tests. Assignment and textbook
/// documents carry numbered headers, topics repeat across documents, and each
/// question names the document and header it is about.
SyntheticData gen_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed);

} // namespace forumqa
