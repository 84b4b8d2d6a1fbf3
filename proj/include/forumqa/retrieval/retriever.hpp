#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "forumqa/provider/client.hpp"
#include "forumqa/retrieval/search.hpp"
#include "forumqa/retrieval/vector.hpp"

namespace forumqa::retrieval {

enum class Method { hier_gen, vector, vector_gen };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view s);

/// A retrieval backend over the chunks of one source kind.
class Retriever {
public:
    virtual ~Retriever() = default;
    virtual SearchOutcome retrieve(const std::string& question, std::size_t top_k) const = 0;
    virtual Method method() const noexcept = 0;
};

struct HierOptions {
    std::size_t beam = 3;
    std::size_t max_select = 2;
};

/// Table-of-contents selection followed by beam search under the model's
/// relevance probability. The beam is widened to `top_k` when smaller so
/// that `top_k` leaves can be returned.
class HierRetriever final : public Retriever {
public:
    HierRetriever(std::shared_ptr<const KindIndex> index, ModelRef model, HierOptions options = {});
    /// Custom node scorer, mainly for tests and ablations.
    HierRetriever(std::shared_ptr<const KindIndex> index, ModelRef model, NodeScorer scorer, HierOptions options = {});

    SearchOutcome retrieve(const std::string& question, std::size_t top_k) const override;
    Method method() const noexcept override { return Method::hier_gen; }
    const KindIndex& index() const noexcept { return *index_; }

private:
    std::shared_ptr<const KindIndex> index_;
    ModelRef model_;
    NodeScorer scorer_;
    HierOptions options_;
};

class VectorRetriever final : public Retriever {
public:
    explicit VectorRetriever(std::shared_ptr<const VectorIndex> index) : index_(std::move(index)) {}
    SearchOutcome retrieve(const std::string& question, std::size_t top_k) const override;
    Method method() const noexcept override { return Method::vector; }

private:
    std::shared_ptr<const VectorIndex> index_;
};

class VectorGenRetriever final : public Retriever {
public:
    VectorGenRetriever(std::shared_ptr<const VectorIndex> index, provider::RelevanceScorer relevance,
                       std::size_t candidate_k = kDefaultCandidateK);
    SearchOutcome retrieve(const std::string& question, std::size_t top_k) const override;
    Method method() const noexcept override { return Method::vector_gen; }

private:
    std::shared_ptr<const VectorIndex> index_;
    provider::RelevanceScorer relevance_;
    std::size_t candidate_k_;
};

} // namespace forumqa::retrieval
