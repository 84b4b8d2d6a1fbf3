#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forumqa/corpus.hpp"
#include "forumqa/function_name.hpp"
#include "forumqa/provider/types.hpp"
#include "forumqa/retrieval/retriever.hpp"

namespace forumqa {

inline constexpr int kDefaultQaTopK = 3;

/// The four retrieval tools in schema order.
const std::vector<provider::ToolSchema>& function_schemas();
const provider::ToolSchema& schema_for(FunctionName name);

/// Schemas for a subset, in schema order.
std::vector<provider::ToolSchema> schemas_for(const FunctionSet& names);

struct FunctionCallRecord {
    FunctionName name = FunctionName::qa_retrieval;
    std::string call_id;
    /// Arguments as the model sent them.
    nlohmann::json arguments = nlohmann::json::object();
    std::vector<retrieval::RetrievalResult> results;
    /// qa_retrieval only: the pairs behind `results`, same order.
    std::vector<QAPair> qa_pairs;
    /// Pipeline iteration that issued the call, starting at 1.
    int round = 1;
    std::vector<std::string> warnings;

    bool operator==(const FunctionCallRecord&) const = default;
};

nlohmann::json to_json(const FunctionCallRecord& r);
FunctionCallRecord call_record_from_json(const nlohmann::json& j);

struct ToolboxOptions {
    /// Result count for the functions without a top_k parameter.
    std::size_t results_per_call = 3;
};

/// Binds the four functions to per-kind retrieval backends. Stateless over
/// immutable indexes, so concurrent dispatch is safe.
class Toolbox {
public:
    Toolbox(std::shared_ptr<const Corpus> corpus,
            std::map<SourceKind, std::shared_ptr<const retrieval::Retriever>> backends, ToolboxOptions options = {});

    /**
     * Runs one tool call against the backend of the function's kind.
     *
     * Throws ValidationError for an unknown function name, a missing or empty
     * query, a top_k that is not an integer, or a kind without a backend. A
     * non-positive top_k is clamped to 1 with a warning. Results whose document
     * is of another kind are discarded.
     */
    FunctionCallRecord dispatch(const provider::ToolCall& call, int round) const;

    /// JSON text handed back to the model as the tool message content.
    std::string render(const FunctionCallRecord& record) const;

    const Corpus& corpus() const noexcept { return *corpus_; }

private:
    std::shared_ptr<const Corpus> corpus_;
    std::map<SourceKind, std::shared_ptr<const retrieval::Retriever>> backends_;
    ToolboxOptions options_;
};

} // namespace forumqa
