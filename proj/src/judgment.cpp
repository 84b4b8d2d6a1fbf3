#include "forumqa/judgment.hpp"

#include <string>

#include "forumqa/error.hpp"

namespace forumqa {

namespace {

void check_range(const char* name, int value, int max) {
    if (value < 1 || value > max) {
        throw ValidationError(std::string(name) + " score " + std::to_string(value) +
                              " outside 1-" + std::to_string(max));
    }
}

int integer_field(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(std::string("missing score key \"") + key + "\"");
    if (!it->is_number_integer()) {
        throw ValidationError(std::string("score \"") + key + "\" is not an integer");
    }
    return it->get<int>();
}

} // namespace

Judgment Judgment::make(int factuality, int relevance, int style) {
    check_range("factuality", factuality, kMaxFactuality);
    check_range("relevance", relevance, kMaxRelevance);
    check_range("style", style, kMaxStyle);
    return Judgment{factuality, relevance, style};
}

Judgment judgment_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("scores must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (key != "factuality" && key != "relevance" && key != "style") {
            throw ValidationError("unexpected score key \"" + key + "\"");
        }
    }
    return Judgment::make(integer_field(j, "factuality"), integer_field(j, "relevance"),
                          integer_field(j, "style"));
}

nlohmann::json to_json(const Judgment& j) {
    return {{"factuality", j.factuality}, {"relevance", j.relevance}, {"style", j.style}};
}

} // namespace forumqa
