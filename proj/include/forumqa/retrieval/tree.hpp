#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forumqa/retrieval/chunking.hpp"

namespace forumqa::retrieval {

struct SummaryNode {
    std::string id;
    std::string summary;
    std::vector<std::string> children;
    std::optional<std::string> leaf_chunk;

    bool is_leaf() const noexcept { return children.empty(); }
    bool operator==(const SummaryNode&) const = default;
};

nlohmann::json to_json(const SummaryNode& n);
SummaryNode node_from_json(const nlohmann::json& j);

/// k-ary summary hierarchy over the chunks of one document. Leaves keep chunk
/// order; every internal node summarizes a contiguous block of at most k
/// children.
struct SummaryTree {
    std::string root;
    std::map<std::string, SummaryNode> nodes;
    int branching = 2;
    SourceKind kind = SourceKind::assignment;
    std::string doc_id;

    const SummaryNode& node(const std::string& id) const;
    /// Edges from root to the deepest leaf.
    std::size_t depth() const;
    /// Leaf node ids in left-to-right order.
    std::vector<std::string> leaves() const;

    bool operator==(const SummaryTree&) const = default;
};

/// What a summarizer sees: the document title and the texts it must cover
/// (chunk text for a leaf, child summaries for an internal node).
struct SummaryInput {
    std::string title;
    std::vector<std::string> parts;
    bool leaf = false;
};

using Summarizer = std::function<std::string(const SummaryInput&)>;

/// One model call per node with the summary prompt.
Summarizer llm_summarizer(const ModelRef& model);

/// Node count per level, leaves first: the ceil-division chain down to 1.
std::vector<std::size_t> level_sizes(std::size_t leaves, int k);

struct TreeOptions {
    int branching = 4;
    /// Concurrent summarizer calls per level.
    int jobs = 1;
};

/// Builds the tree bottom-up. Summaries for one level are requested
/// concurrently (up to `jobs`) and assembled in order, so the result does not
/// depend on scheduling. Throws if any summarizer call fails.
SummaryTree build_tree(const std::vector<Chunk>& chunks, const std::string& title, SourceKind kind,
                       const Summarizer& summarize, const TreeOptions& options);

/// Node id scheme: "<doc_id>/L<level>-<index>", zero-padded so lexical order
/// matches position within a level.
std::string node_id(const std::string& doc_id, std::size_t level, std::size_t index);

} // namespace forumqa::retrieval
