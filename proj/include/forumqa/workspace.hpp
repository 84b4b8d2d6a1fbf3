#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "forumqa/config.hpp"
#include "forumqa/corpus.hpp"
#include "forumqa/functions.hpp"
#include "forumqa/judge.hpp"
#include "forumqa/provider/stack.hpp"
#include "forumqa/retrieval/index.hpp"
#include "forumqa/retrieval/retriever.hpp"

namespace forumqa {

/// Seed for every index-time and retrieval-time model call. Retrieval is part
/// of the tool environment, so it does not vary with the pipeline seed.
inline constexpr std::int64_t kRetrievalSeed = 0;

std::filesystem::path hier_index_dir(const std::filesystem::path& index_dir, SourceKind kind);
std::filesystem::path vector_index_dir(const std::filesystem::path& index_dir, SourceKind kind);

struct IndexBuildReport {
    std::map<SourceKind, std::size_t> hier_chunks;
    std::map<SourceKind, std::size_t> vector_chunks;
};

/// Builds and saves the hierarchical index (every kind but qa) and the vector
/// index (every kind) for each of `kinds` under config.paths.index_dir.
IndexBuildReport build_indexes(const CliConfig& config, const Corpus& corpus, const provider::ProviderStack& stack,
                               const std::vector<SourceKind>& kinds, int jobs);

/**
 * The data and provider clients for one command, with lazily loaded indexes.
 *
 * Indexes and retrievers are loaded from disk on first use and cached; the
 * cache is guarded, so retrievers can be requested from worker threads.
 */
class Workspace {
public:
    Workspace(CliConfig config, provider::ProviderStack stack);

    const CliConfig& config() const noexcept { return config_; }
    const provider::ProviderStack& stack() const noexcept { return stack_; }

    /// Loads the corpus, questions and labels named in the config.
    void load_data(bool need_labels);
    void set_data(std::shared_ptr<const Corpus> corpus, std::vector<StudentQuestion> questions,
                  std::vector<GroundTruth> labels);

    const std::shared_ptr<const Corpus>& corpus() const;
    const std::vector<StudentQuestion>& questions() const noexcept { return questions_; }
    const std::vector<GroundTruth>& labels() const noexcept { return labels_; }
    const StudentQuestion& question(const std::string& id) const;

    std::shared_ptr<const retrieval::KindIndex> hier_index(SourceKind kind);
    std::shared_ptr<const retrieval::VectorIndex> vector_index(SourceKind kind);
    std::shared_ptr<const retrieval::Retriever> retriever(SourceKind kind, retrieval::Method method);

    /// Toolbox using the configured method for each kind.
    std::shared_ptr<const Toolbox> toolbox();
    /// Judge for `model` with the configured few-shot examples.
    std::shared_ptr<const Judge> judge(const std::string& model, std::int64_t seed = 0);

private:
    CliConfig config_;
    provider::ProviderStack stack_;
    std::shared_ptr<const Corpus> corpus_;
    std::vector<StudentQuestion> questions_;
    std::vector<GroundTruth> labels_;
    std::optional<std::vector<FewShot>> few_shots_;

    std::mutex mu_;
    std::map<SourceKind, std::shared_ptr<const retrieval::KindIndex>> hier_;
    std::map<SourceKind, std::shared_ptr<const retrieval::VectorIndex>> vector_;
    std::map<std::pair<SourceKind, retrieval::Method>, std::shared_ptr<const retrieval::Retriever>> retrievers_;
    std::shared_ptr<const Toolbox> toolbox_;
};

} // namespace forumqa
