#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "forumqa/provider/client.hpp"

namespace forumqa::sim {

/// Structural references in a text: "hw:3", "q:2", "ch:4", "sec:4.1".
/// Recognises hw3 / homework 3, q2 / question 2 / problem 2 / part 2,
/// ch4 / chapter 4 and section 4.1 (which also implies ch:4).
std::set<std::string> structural_refs(std::string_view text);

/// Content words: lower-case tokens without digits, stop words or
/// structural words.
std::set<std::string> content_words(std::string_view text);

/// Relevance in (0, 1) of a document (or summary) to a question. Questions
/// with structural references are scored mostly on reference overlap,
/// others on content-word overlap.
double relevance_score(std::string_view question, std::string_view document);

/// Whole lines that look like "Question 2", "Section 3.1", "Part 4" or
/// "Problem 1", in order.
std::vector<std::string> find_headers(std::string_view text);

/// Functions a careful reader would call for the question, judged from its
/// wording and optional category.
std::set<std::string> ideal_functions(std::string_view question, std::string_view category = {});

/**
 * Deterministic stand-in for a hosted chat model, for offline runs and tests.
 *
 * It recognises the framework's prompts by their system message and answers
 * each in the expected format: relevance questions with Yes/No
 * log-probabilities, summaries, header lists, table-of-contents picks,
 * rubric scores, function selections, tool calls and answers composed from
 * tool results. Replies depend only on the request, so the same request
 * always gets the same reply. Model names containing "weak" or "mini" make
 * noisier function-selection choices; the request seed varies that noise.
 */
class SimulatedCourseModel : public provider::ChatBackend {
public:
    provider::CompletionResponse complete(const provider::CompletionRequest& request) override;
};

} // namespace forumqa::sim
