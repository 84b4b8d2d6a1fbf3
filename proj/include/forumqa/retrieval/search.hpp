#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "forumqa/retrieval/index.hpp"

namespace forumqa::retrieval {

struct RetrievalResult {
    Chunk chunk;
    double score = 0.0;
    /// Root-to-leaf node ids for hierarchical search, rank provenance otherwise.
    std::vector<std::string> path;

    bool operator==(const RetrievalResult&) const = default;
};

nlohmann::json to_json(const RetrievalResult& r);
RetrievalResult result_from_json(const nlohmann::json& j);

/// Total order on results: score descending, then (doc_id, span.start), then chunk id.
bool ranks_before(const RetrievalResult& a, const RetrievalResult& b);
void sort_results(std::vector<RetrievalResult>& results);

/// Relevance of a node summary (or chunk text) to a question, in [0, 1].
using NodeScorer = std::function<double(const std::string& question, const std::string& text)>;

/// Score used when the scorer throws on a node.
inline constexpr double kScoreFloor = 1e-6;

struct SearchOutcome {
    std::vector<RetrievalResult> results;
    std::vector<std::string> warnings;
};

/**
 * Level-synchronous beam search from the given entry nodes.
 *
 * Each step replaces every internal node in the beam by its children, scores
 * the new nodes, and keeps the best `beam` by score (ties by node id). Leaves
 * already in the beam stay as candidates. Stops once the beam holds only
 * leaves, which are returned in result order. Entry leaves are scored up front.
 * A scorer exception scores that node at kScoreFloor and adds a warning.
 */
SearchOutcome beam_search(const KindIndex& index, std::span<const std::string> entry_nodes,
                          const std::string& question, const NodeScorer& scorer, std::size_t beam);

struct TocSelection {
    std::vector<std::string> node_ids;
    std::vector<std::string> warnings;
    bool used_model = false;
};

/// Shows the model the root summaries and keeps the ids it picks (at most
/// `max_select`, unknown ids dropped). A single tree is selected without a
/// model call. Throws ProviderError when every id the model returned is
/// invalid.
TocSelection toc_select(const KindIndex& index, const std::string& question, const ModelRef& model,
                        std::size_t max_select);

/// Pulls entry ids out of the model's reply: a JSON array if it parses,
/// otherwise every known id mentioned in the text, in order of appearance.
std::vector<std::string> parse_toc_reply(std::string_view reply, std::span<const std::string> known_ids);

} // namespace forumqa::retrieval
