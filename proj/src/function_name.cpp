#include "forumqa/function_name.hpp"

#include "forumqa/error.hpp"

namespace forumqa {

std::string_view to_string(FunctionName name) {
    switch (name) {
    case FunctionName::qa_retrieval: return "qa_retrieval";
    case FunctionName::textbook_retrieval: return "textbook_retrieval";
    case FunctionName::assignment_retrieval: return "assignment_retrieval";
    case FunctionName::logistics_retrieval: return "logistics_retrieval";
    }
    return "unknown";
}

std::optional<FunctionName> try_parse_function_name(std::string_view text) {
    for (auto name : kAllFunctions) {
        if (to_string(name) == text) return name;
    }
    return std::nullopt;
}

FunctionName parse_function_name(std::string_view text) {
    if (auto name = try_parse_function_name(text)) return *name;
    throw ValidationError("unknown function name \"" + std::string(text) + "\"");
}

} // namespace forumqa
