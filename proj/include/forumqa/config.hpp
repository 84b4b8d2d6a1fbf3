#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forumqa/bench.hpp"
#include "forumqa/pipelines.hpp"
#include "forumqa/provider/stack.hpp"
#include "forumqa/retrieval/chunking.hpp"
#include "forumqa/retrieval/retriever.hpp"

namespace forumqa {

struct PathsConfig {
    std::filesystem::path corpus;
    std::filesystem::path questions;
    std::filesystem::path labels;
    std::filesystem::path index_dir = "index";
    std::filesystem::path run_dir = "runs/default";
    std::optional<std::filesystem::path> fixtures;
    std::optional<std::filesystem::path> few_shots;
    /// Labelled (question, answer, TA answer, TA scores) set for judge alignment.
    std::optional<std::filesystem::path> judge_labels;
};

struct ModelsConfig {
    std::string fc_model = "gpt-4.1";
    std::string answer_model = "gpt-4.1";
    /// Model for header detection, summaries, table of contents and relevance.
    std::string retrieval_model = "gpt-4.1-mini";
    std::string judge_model = "gpt-4.1";
    /// Models compared by eval-fc; defaults to {fc_model}.
    std::vector<std::string> fc_models;
    /// Judges compared by eval-judge; defaults to {judge_model}.
    std::vector<std::string> judge_models;
};

struct RetrievalConfig {
    std::map<SourceKind, retrieval::Method> methods{
        {SourceKind::qa, retrieval::Method::vector},
        {SourceKind::textbook, retrieval::Method::hier_gen},
        {SourceKind::assignment, retrieval::Method::hier_gen},
        {SourceKind::logistics, retrieval::Method::vector},
    };
    std::size_t top_k = 3;
    std::size_t beam = 3;
    std::size_t max_select = 2;
    std::size_t candidate_k = retrieval::kDefaultCandidateK;
    int branching = 4;
    retrieval::ChunkingOptions chunking;
    bool hybrid_keyword = false;
};

struct CliConfig {
    PathsConfig paths;
    provider::ProviderSettings provider;
    ModelsConfig models;
    RetrievalConfig retrieval;
    /// Kind, bounds, threshold and edison rules; models and seed are filled per run.
    PipelineConfig pipeline;
    std::vector<std::int64_t> seeds{0, 1, 2, 3, 4};
    bench::CiOver ci_over = bench::CiOver::questions;

    /// Model list for eval-fc.
    std::vector<std::string> fc_models() const;
    std::vector<std::string> judge_models() const;
    /// Pipeline settings for one run.
    PipelineConfig pipeline_for(PipelineKind kind, const std::string& fc_model, std::int64_t seed) const;
};

/// Parses a JSON config. Relative paths resolve against `base_dir`.
/// Unknown keys and out-of-range numbers are ValidationErrors.
CliConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
CliConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const CliConfig& c);

} // namespace forumqa
