#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace forumqa {

enum class FunctionName {
    qa_retrieval,
    textbook_retrieval,
    assignment_retrieval,
    logistics_retrieval,
};

inline constexpr std::array<FunctionName, 4> kAllFunctions = {
    FunctionName::qa_retrieval,
    FunctionName::textbook_retrieval,
    FunctionName::assignment_retrieval,
    FunctionName::logistics_retrieval,
};

using FunctionSet = std::set<FunctionName>;

std::string_view to_string(FunctionName name);

/// Returns nullopt for anything outside the closed set of four.
std::optional<FunctionName> try_parse_function_name(std::string_view text);

/// Throws ValidationError for unknown names.
FunctionName parse_function_name(std::string_view text);

} // namespace forumqa
