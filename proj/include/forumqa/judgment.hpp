#pragma once

#include <compare>

#include <nlohmann/json.hpp>

namespace forumqa {

/// Rubric scores for one answer. factuality and relevance are 1-5, style is 1-3.
struct Judgment {
    int factuality = 1;
    int relevance = 1;
    int style = 1;

    static constexpr int kMaxFactuality = 5;
    static constexpr int kMaxRelevance = 5;
    static constexpr int kMaxStyle = 3;

    /// Range-checked constructor; throws ValidationError.
    static Judgment make(int factuality, int relevance, int style);

    auto operator<=>(const Judgment&) const = default;
};

/// Parses {"factuality","relevance","style"} with exact keys and range checks.
Judgment judgment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Judgment& j);

} // namespace forumqa
