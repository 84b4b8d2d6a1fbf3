#pragma once

#include <filesystem>
#include <memory>
#include <span>

#include "forumqa/provider/client.hpp"
#include "forumqa/retrieval/search.hpp"

namespace forumqa::retrieval {

/// Cosine similarity; 0 when either vector is all zeros. Throws on a
/// dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

/// Okapi BM25 over pre-tokenized documents (k1 = 1.2, b = 0.75).
class Bm25 {
public:
    explicit Bm25(const std::vector<std::string>& documents, double k1 = 1.2, double b = 0.75);
    std::vector<double> scores(std::string_view query) const;

private:
    std::vector<std::unordered_map<std::string, int>> term_freq_;
    std::vector<std::size_t> lengths_;
    std::unordered_map<std::string, int> doc_freq_;
    double avg_length_ = 0.0;
    double k1_;
    double b_;
};

/// Reciprocal-rank fusion of several rankings (lists of item indices, best
/// first): score(i) = sum 1 / (k + rank), rank starting at 1.
std::vector<double> reciprocal_rank_fusion(const std::vector<std::vector<std::size_t>>& rankings,
                                           std::size_t item_count, double k = 60.0);

struct VectorOptions {
    /// Fuse cosine ranking with BM25 keyword ranking through RRF.
    bool hybrid_keyword = false;
    double rrf_k = 60.0;
};

/// Chunks embedded once with one model. Immutable; retrieval is thread-safe
/// as long as the embedding client is.
class VectorIndex {
public:
    VectorIndex(std::vector<Chunk> chunks, std::shared_ptr<provider::EmbeddingClient> embedder,
                VectorOptions options = {});
    /// Pre-computed embeddings, e.g. loaded from disk.
    VectorIndex(std::vector<Chunk> chunks, std::vector<provider::Embedding> embeddings,
                std::shared_ptr<provider::EmbeddingClient> embedder, VectorOptions options = {});

    /// Top `top_k` chunks by cosine (or fused rank) with the question, clamped
    /// to the chunk count.
    std::vector<RetrievalResult> retrieve(const std::string& question, std::size_t top_k) const;

    const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
    const std::vector<provider::Embedding>& embeddings() const noexcept { return embeddings_; }

private:
    std::vector<Chunk> chunks_;
    std::vector<provider::Embedding> embeddings_;
    std::shared_ptr<provider::EmbeddingClient> embedder_;
    VectorOptions options_;
    std::unique_ptr<Bm25> bm25_;
};

/// Ranks chunks by cosine with a given question embedding.
std::vector<RetrievalResult> rank_by_cosine(std::span<const double> question, const std::vector<Chunk>& chunks,
                                            const std::vector<provider::Embedding>& embeddings, std::size_t top_k);

/// Re-scores candidates with a relevance probability and returns the top
/// `top_k` under the usual result order. Path records both ranks.
std::vector<RetrievalResult> rerank(const std::string& question, std::vector<RetrievalResult> candidates,
                                    const std::function<double(const std::string&, const std::string&)>& scorer,
                                    std::size_t top_k);

/// Vector retrieval of `candidate_k` chunks, then reranking by the model's
/// yes probability.
std::vector<RetrievalResult> vector_gen_retrieve(const std::string& question, const VectorIndex& index,
                                                 const provider::RelevanceScorer& relevance,
                                                 std::size_t candidate_k, std::size_t top_k);

inline constexpr std::size_t kDefaultCandidateK = 15;

/// Fixed-size chunks for the vector baselines; qa documents stay whole.
std::vector<Chunk> vector_chunks(const Corpus& corpus, SourceKind kind, std::size_t chunk_chars, std::size_t overlap);

/// Writes manifest.json (kind, chunk_count, embedding_model, dim),
/// chunks.jsonl and embeddings.jsonl.
void save_vector_index(const VectorIndex& index, SourceKind kind, const std::string& embedding_model,
                       const std::filesystem::path& dir);
/// Reloads a saved index; the embedder is used for queries only.
VectorIndex load_vector_index(const std::filesystem::path& dir, std::shared_ptr<provider::EmbeddingClient> embedder,
                              VectorOptions options = {});

} // namespace forumqa::retrieval
