#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forumqa/corpus.hpp"
#include "forumqa/functions.hpp"
#include "forumqa/judge.hpp"
#include "forumqa/provider/client.hpp"

namespace forumqa {

enum class PipelineKind { edison, fc, fc_categorize, fc_forced, fc_iterative, fc_feedback, fc_multihop };

inline constexpr std::array<PipelineKind, 7> kAllPipelines = {
    PipelineKind::edison,       PipelineKind::fc,          PipelineKind::fc_categorize, PipelineKind::fc_forced,
    PipelineKind::fc_iterative, PipelineKind::fc_feedback, PipelineKind::fc_multihop,
};

std::string_view to_string(PipelineKind kind);
PipelineKind parse_pipeline_kind(std::string_view text);

/// Kinds guaranteed to dispatch at least one function per run.
bool forces_selection(PipelineKind kind);

/// Judgment minima; an answer scoring below any of them is revised.
struct FeedbackThreshold {
    int factuality = 5;
    int relevance = 5;
    int style = 3;

    bool needs_revision(const Judgment& j) const {
        return j.factuality < factuality || j.relevance < relevance || j.style < style;
    }
};

using EdisonRules = std::map<Category, FunctionSet>;

/// assignment → {assignment, qa}, conceptual → {textbook, qa},
/// logistics → {logistics}.
EdisonRules default_edison_rules();
nlohmann::json to_json(const EdisonRules& rules);
EdisonRules edison_rules_from_json(const nlohmann::json& j);

struct PipelineConfig {
    PipelineKind kind = PipelineKind::fc;
    int max_rounds = 3;
    int max_feedback_rounds = 1;
    FeedbackThreshold feedback_threshold;
    EdisonRules edison_rules = default_edison_rules();
    std::string answer_model;
    std::string fc_model;
    std::int64_t seed = 0;

    /// Throws ValidationError on out-of-range bounds, missing models, or an
    /// edison rule table that does not cover every category.
    void validate() const;
};

/// Upper bound on trace rounds for a configuration.
std::size_t round_bound(const PipelineConfig& config);
/// Upper bound on pipeline-level provider calls, judge calls included.
std::size_t provider_call_bound(const PipelineConfig& config);

struct PipelineDeps {
    std::shared_ptr<provider::ChatClient> chat;
    std::shared_ptr<const Toolbox> toolbox;
    /// Required for fc_feedback only.
    std::shared_ptr<const Judge> judge;
};

/// One model turn (or, for edison, the rule-driven dispatch step).
struct Round {
    /// tools | answer | select | arguments | rules | revision_tools | revision_answer
    std::string phase;
    std::string model;
    provider::ToolChoice tool_choice = provider::ToolChoice::none();
    std::vector<provider::ChatMessage> messages;
    std::optional<provider::CompletionResponse> response;
    std::vector<FunctionCallRecord> calls;
    /// Calls the toolbox rejected (unknown name, missing query).
    std::vector<std::string> call_errors;
};

struct PipelineTrace {
    std::string question_id;
    PipelineKind kind = PipelineKind::fc;
    std::string fc_model;
    std::string answer_model;
    std::int64_t seed = 0;
    std::vector<Round> rounds;
    FunctionSet selected_functions;
    /// Reviews that led to a revision, in order.
    std::vector<Review> judge_feedback;
    /// Review of the final answer (fc_feedback).
    std::optional<Review> final_review;
    std::string answer;
    std::vector<std::string> flags;
    std::size_t provider_calls = 0;

    bool has_flag(std::string_view flag) const;
};

nlohmann::json to_json(const PipelineTrace& t);
PipelineTrace trace_from_json(const nlohmann::json& j);

// Flags set on traces.
inline constexpr std::string_view kFlagRoundBound = "round_bound_reached";
inline constexpr std::string_view kFlagDeclined = "declined";
inline constexpr std::string_view kFlagToolError = "tool_error";
inline constexpr std::string_view kFlagJudgeFailure = "judge_parse_failure";
inline constexpr std::string_view kFlagFeedbackUnresolved = "feedback_unresolved";
inline constexpr std::string_view kFlagMultihopFallback = "multihop_fallback";

/**
 * Answers one question with the configured pipeline and records every turn.
 *
 * Throws ValidationError when the question lacks a category that the kind
 * needs (fc_categorize, edison) or a dependency is missing, and ProviderError
 * subclasses when the model breaks its contract beyond the client's retries.
 */
PipelineTrace run_pipeline(const StudentQuestion& question, const PipelineConfig& config, const PipelineDeps& deps);

/// First-hop reply → function names, in order, without duplicates.
std::vector<FunctionName> parse_function_list(std::string_view reply, std::vector<std::string>* rejected = nullptr);

/// The first-hop prompt body: one line per function with its description.
std::string function_menu();

/// {run_dir}/traces/{model}/{qid}.{kind}.{seed}.json with the model id made
/// filename-safe.
std::filesystem::path trace_path(const std::filesystem::path& run_dir, const std::string& fc_model,
                                 const std::string& question_id, PipelineKind kind, std::int64_t seed);
void save_trace(const PipelineTrace& trace, const std::filesystem::path& path);
PipelineTrace load_trace(const std::filesystem::path& path);

} // namespace forumqa
