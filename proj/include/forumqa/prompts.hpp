#pragma once

#include <string>
#include <string_view>

// Prompt texts shared by the pipeline, retrieval and judge modules, and by the
// simulated backend that has to recognise them.
namespace forumqa::prompts {

/// System prompt for every function-calling and answer turn.
extern const std::string_view kTeachingAssistant;

/// Answer used when the model declines or produces no text.
inline constexpr std::string_view kFallbackAnswer =
    "Sorry, I do not know. Please wait for a staff member's response.";

/// Grading rubric for the judge, used as its system prompt.
extern const std::string_view kJudgeRubric;

/// Appended to the rubric when the judge must also return revision feedback.
extern const std::string_view kJudgeFeedbackAddendum;

/// Fills the rubric's ground-truth slot when no TA answer exists yet.
inline constexpr std::string_view kNoTaAnswer = "N/A (pre-deployment review)";

inline constexpr std::string_view kJudgeQuestionLabel = "Student question:";
inline constexpr std::string_view kJudgeAnswerLabel = "LLM-written answer:";
inline constexpr std::string_view kJudgeTruthLabel = "TA-written ground-truth answer:";

extern const std::string_view kJudgeReask;

// Retrieval
extern const std::string_view kSummarize;
extern const std::string_view kDetectHeaders;
extern const std::string_view kTableOfContents;
extern const std::string_view kRelevance;
inline constexpr std::string_view kRelevanceQuestion =
    "Is this document relevant for answering the student question?";

// Multi-hop function selection (first hop)
extern const std::string_view kSelectFunctions;

inline constexpr std::string_view kQuestionLabel = "Student question:";
inline constexpr std::string_view kTitleLabel = "Title:";
inline constexpr std::string_view kDocumentLabel = "Document:";

} // namespace forumqa::prompts
