#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forumqa/corpus.hpp"
#include "forumqa/judgment.hpp"
#include "forumqa/provider/client.hpp"

namespace forumqa {

/// One graded example shown to the judge before the item under review.
struct FewShot {
    std::string question;
    std::string llm_answer;
    std::string ta_answer;
    Judgment scores;

    bool operator==(const FewShot&) const = default;
};

std::vector<FewShot> parse_few_shots(std::string_view jsonl);
std::vector<FewShot> load_few_shots(const std::filesystem::path& path);
std::string serialize_few_shots(const std::vector<FewShot>& shots);

/// Labelled judge examples built from synthetic questions: each pairs a TA
/// answer with an answer that is correct, partial, off-topic or declined, and
/// TA scores matching that grade. Deterministic for a given seed.
std::vector<FewShot> synthetic_judge_set(const std::vector<StudentQuestion>& questions,
                                         const std::vector<GroundTruth>& labels, std::size_t count,
                                         std::uint64_t seed);

/// "Student question: ...\n\nLLM-written answer: ...\n\nTA-written ground-truth answer: ..."
std::string judge_triple(const std::string& question, const std::string& llm_answer, const std::string& ta_answer);

/// Rubric system prompt, few-shot user/assistant pairs, then the item.
std::vector<provider::ChatMessage> judge_messages(const std::string& question, const std::string& llm_answer,
                                                  const std::string& ta_answer, const std::vector<FewShot>& few_shots,
                                                  bool with_feedback = false);

/// Outcome of reading one judge reply.
struct JudgeParse {
    enum class Status {
        ok,
        /// Not a JSON object at all; worth asking again.
        unparseable,
        /// A JSON object with wrong keys, types or ranges; final.
        invalid,
    };

    Status status = Status::unparseable;
    std::optional<Judgment> judgment;
    std::optional<std::string> feedback;
    std::string error;
};

/**
 * Reads a judge reply. Surrounding whitespace and one enclosing code fence
 * are removed, then the text must be one flat JSON object with exactly the
 * keys factuality, relevance and style (plus a string "feedback" when
 * `with_feedback`), integer values in range, and no duplicate keys.
 */
JudgeParse parse_judgment_reply(std::string_view reply, bool with_feedback = false);

struct JudgeOptions {
    std::string model;
    std::int64_t seed = 0;
    std::vector<FewShot> few_shots;
};

struct Review {
    Judgment judgment;
    std::string feedback;
};

/// LLM-as-a-judge with the TA rubric. One re-ask when a reply cannot be
/// parsed; a second unparseable reply, or any invalid reply, throws
/// ContractViolation.
class Judge {
public:
    Judge(std::shared_ptr<provider::ChatClient> chat, JudgeOptions options);

    Judgment evaluate(const std::string& question, const std::string& llm_answer,
                      const std::string& ta_answer) const;

    /// Scores an answer that has no TA answer yet and asks for feedback.
    Review review(const std::string& question, const std::string& llm_answer) const;

    const JudgeOptions& options() const noexcept { return options_; }

private:
    JudgeParse ask(std::vector<provider::ChatMessage> messages, bool with_feedback) const;

    std::shared_ptr<provider::ChatClient> chat_;
    JudgeOptions options_;
};

struct DimensionAlignment {
    double exact_match = 0.0;
    double mae = 0.0;

    bool operator==(const DimensionAlignment&) const = default;
};

struct AlignmentReport {
    DimensionAlignment factuality;
    DimensionAlignment relevance;
    DimensionAlignment style;
    std::size_t n = 0;

    bool operator==(const AlignmentReport&) const = default;
};

/// Pairwise exact match and mean absolute error per dimension. Throws
/// ValidationError on a length mismatch or empty input.
AlignmentReport align(const std::vector<Judgment>& judgments, const std::vector<Judgment>& ta_scores);

nlohmann::json to_json(const AlignmentReport& r);

/// One line of a judged-outputs file.
struct JudgedRecord {
    std::string question_id;
    std::string pipeline;
    std::string model;
    std::int64_t seed = 0;
    Judgment scores;

    bool operator==(const JudgedRecord&) const = default;
};

nlohmann::json to_json(const JudgedRecord& r);
JudgedRecord judged_record_from_json(const nlohmann::json& j);

} // namespace forumqa
