#pragma once

#include <filesystem>
#include <unordered_map>

#include "forumqa/retrieval/tree.hpp"

namespace forumqa::retrieval {

/// Hierarchical index for one source kind: one summary tree per document.
/// The table of contents is the list of tree roots. Immutable once built.
class KindIndex {
public:
    KindIndex() = default;
    KindIndex(SourceKind kind, int branching, std::string provider_model, std::vector<Chunk> chunks,
              std::vector<SummaryTree> trees);

    SourceKind kind() const noexcept { return kind_; }
    int branching() const noexcept { return branching_; }
    const std::string& provider_model() const noexcept { return provider_model_; }
    const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
    const std::vector<SummaryTree>& trees() const noexcept { return trees_; }

    const Chunk& chunk(const std::string& id) const;
    const SummaryNode& node(const std::string& id) const;
    const SummaryTree& tree_of(const std::string& node_id) const;

    /// Root ids in tree order.
    std::vector<std::string> roots() const;

private:
    SourceKind kind_ = SourceKind::assignment;
    int branching_ = 4;
    std::string provider_model_;
    std::vector<Chunk> chunks_;
    std::vector<SummaryTree> trees_;
    std::unordered_map<std::string, std::size_t> chunk_pos_;
    std::unordered_map<std::string, std::size_t> node_tree_;
};

struct IndexOptions {
    ChunkingOptions chunking;
    TreeOptions tree;
};

/// Chunks every document of `kind` with structure-aware chunking and builds
/// its summary tree. Documents are processed in corpus order.
KindIndex build_kind_index(const Corpus& corpus, SourceKind kind, const ModelRef& model,
                           const IndexOptions& options);

/// Same, with caller-supplied chunker and summarizer.
KindIndex build_kind_index(const Corpus& corpus, SourceKind kind, const std::string& provider_model,
                           const std::function<std::vector<Chunk>(const Document&)>& chunker,
                           const Summarizer& summarize, const TreeOptions& options);

/// Writes <dir>/manifest.json, <dir>/nodes.jsonl and <dir>/chunks.jsonl.
void save_index(const KindIndex& index, const std::filesystem::path& dir);
KindIndex load_index(const std::filesystem::path& dir);

} // namespace forumqa::retrieval
