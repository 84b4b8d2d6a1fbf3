#include "forumqa/retrieval/retriever.hpp"

#include <algorithm>

#include "forumqa/error.hpp"

namespace forumqa::retrieval {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::hier_gen: return "hier_gen";
        case Method::vector: return "vector";
        case Method::vector_gen: return "vector_gen";
    }
    return "?";
}

Method parse_method(std::string_view s) {
    if (s == "hier_gen") return Method::hier_gen;
    if (s == "vector") return Method::vector;
    if (s == "vector_gen") return Method::vector_gen;
    throw ValidationError("unknown retrieval method \"" + std::string(s) + "\"");
}

namespace {

NodeScorer yes_scorer(const ModelRef& model) {
    auto relevance = std::make_shared<provider::RelevanceScorer>(model.chat, model.model, model.seed);
    return [relevance](const std::string& q, const std::string& text) { return relevance->yes_probability(q, text).p; };
}

} // namespace

HierRetriever::HierRetriever(std::shared_ptr<const KindIndex> index, ModelRef model, HierOptions options)
    : HierRetriever(index, model, yes_scorer(model), options) {}

HierRetriever::HierRetriever(std::shared_ptr<const KindIndex> index, ModelRef model, NodeScorer scorer,
                             HierOptions options)
    : index_(std::move(index)), model_(std::move(model)), scorer_(std::move(scorer)), options_(options) {
    if (!index_) throw ValidationError("hierarchical retriever needs an index");
    if (options_.beam == 0 || options_.max_select == 0) throw ValidationError("beam and max_select must be >= 1");
}

SearchOutcome HierRetriever::retrieve(const std::string& question, std::size_t top_k) const {
    if (top_k == 0 || index_->trees().empty()) return {};
    auto toc = toc_select(*index_, question, model_, options_.max_select);
    auto out = beam_search(*index_, toc.node_ids, question, scorer_, std::max(options_.beam, top_k));
    out.warnings.insert(out.warnings.begin(), toc.warnings.begin(), toc.warnings.end());
    if (out.results.size() > top_k) out.results.resize(top_k);
    return out;
}

SearchOutcome VectorRetriever::retrieve(const std::string& question, std::size_t top_k) const {
    return {index_->retrieve(question, top_k), {}};
}

VectorGenRetriever::VectorGenRetriever(std::shared_ptr<const VectorIndex> index, provider::RelevanceScorer relevance,
                                       std::size_t candidate_k)
    : index_(std::move(index)), relevance_(std::move(relevance)), candidate_k_(candidate_k) {
    if (candidate_k_ == 0) throw ValidationError("candidate_k must be >= 1");
}

SearchOutcome VectorGenRetriever::retrieve(const std::string& question, std::size_t top_k) const {
    return {vector_gen_retrieve(question, *index_, relevance_, candidate_k_, top_k), {}};
}

} // namespace forumqa::retrieval
