#include "forumqa/retrieval/vector.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "forumqa/error.hpp"
#include "forumqa/provider/mock.hpp"

namespace forumqa::retrieval {

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ValidationError("embedding dimension mismatch: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// ---------------------------------------------------------------------------
// BM25 / RRF

Bm25::Bm25(const std::vector<std::string>& documents, double k1, double b) : k1_(k1), b_(b) {
    std::size_t total = 0;
    for (const auto& doc : documents) {
        auto& tf = term_freq_.emplace_back();
        const auto tokens = provider::tokenize(doc);
        for (const auto& t : tokens) ++tf[t];
        for (const auto& [t, _] : tf) ++doc_freq_[t];
        lengths_.push_back(tokens.size());
        total += tokens.size();
    }
    avg_length_ = documents.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(documents.size());
}

std::vector<double> Bm25::scores(std::string_view query) const {
    const auto n = static_cast<double>(term_freq_.size());
    std::vector<double> out(term_freq_.size(), 0.0);
    for (const auto& term : provider::tokenize(query)) {
        auto df_it = doc_freq_.find(term);
        if (df_it == doc_freq_.end()) continue;
        const double df = df_it->second;
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (std::size_t d = 0; d < term_freq_.size(); ++d) {
            auto it = term_freq_[d].find(term);
            if (it == term_freq_[d].end()) continue;
            const double tf = it->second;
            const double norm = avg_length_ > 0.0 ? static_cast<double>(lengths_[d]) / avg_length_ : 1.0;
            out[d] += idf * tf * (k1_ + 1.0) / (tf + k1_ * (1.0 - b_ + b_ * norm));
        }
    }
    return out;
}

std::vector<double> reciprocal_rank_fusion(const std::vector<std::vector<std::size_t>>& rankings,
                                           std::size_t item_count, double k) {
    std::vector<double> fused(item_count, 0.0);
    for (const auto& ranking : rankings) {
        for (std::size_t r = 0; r < ranking.size(); ++r) fused.at(ranking[r]) += 1.0 / (k + static_cast<double>(r + 1));
    }
    return fused;
}

// ---------------------------------------------------------------------------
// Vector index

namespace {

std::vector<std::string> texts_of(const std::vector<Chunk>& chunks) {
    std::vector<std::string> out;
    out.reserve(chunks.size());
    for (const auto& c : chunks) out.push_back(c.text);
    return out;
}

/// Indices sorted by score descending under the result tie rule.
std::vector<std::size_t> order_by(const std::vector<double>& scores, const std::vector<Chunk>& chunks) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        RetrievalResult ra{chunks[a], scores[a], {}};
        RetrievalResult rb{chunks[b], scores[b], {}};
        return ranks_before(ra, rb);
    });
    return order;
}

} // namespace

VectorIndex::VectorIndex(std::vector<Chunk> chunks, std::shared_ptr<provider::EmbeddingClient> embedder,
                         VectorOptions options)
    : chunks_(std::move(chunks)), embedder_(std::move(embedder)), options_(options) {
    if (!embedder_) throw ValidationError("vector index needs an embedder");
    if (!chunks_.empty()) embeddings_ = embedder_->embed(texts_of(chunks_));
    if (options_.hybrid_keyword) bm25_ = std::make_unique<Bm25>(texts_of(chunks_));
}

VectorIndex::VectorIndex(std::vector<Chunk> chunks, std::vector<provider::Embedding> embeddings,
                         std::shared_ptr<provider::EmbeddingClient> embedder, VectorOptions options)
    : chunks_(std::move(chunks)), embeddings_(std::move(embeddings)), embedder_(std::move(embedder)), options_(options) {
    if (embeddings_.size() != chunks_.size()) throw ValidationError("one embedding per chunk required");
    for (const auto& e : embeddings_) {
        if (e.size() != embeddings_.front().size()) throw ValidationError("embedding dimension mismatch in index");
    }
    if (options_.hybrid_keyword) bm25_ = std::make_unique<Bm25>(texts_of(chunks_));
}

std::vector<RetrievalResult> rank_by_cosine(std::span<const double> question, const std::vector<Chunk>& chunks,
                                            const std::vector<provider::Embedding>& embeddings, std::size_t top_k) {
    std::vector<RetrievalResult> results;
    results.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        results.push_back({chunks[i], cosine(question, embeddings[i]), {}});
    }
    sort_results(results);
    if (results.size() > top_k) results.resize(top_k);
    for (std::size_t r = 0; r < results.size(); ++r) results[r].path = {"vector#" + std::to_string(r + 1)};
    return results;
}

std::vector<RetrievalResult> VectorIndex::retrieve(const std::string& question, std::size_t top_k) const {
    if (chunks_.empty() || top_k == 0) return {};
    const auto q = embedder_->embed({question}).front();
    if (!bm25_) return rank_by_cosine(q, chunks_, embeddings_, top_k);

    std::vector<double> cos(chunks_.size());
    for (std::size_t i = 0; i < chunks_.size(); ++i) cos[i] = cosine(q, embeddings_[i]);
    const auto fused = reciprocal_rank_fusion({order_by(cos, chunks_), order_by(bm25_->scores(question), chunks_)},
                                              chunks_.size(), options_.rrf_k);
    std::vector<RetrievalResult> results;
    for (std::size_t i = 0; i < chunks_.size(); ++i) results.push_back({chunks_[i], fused[i], {}});
    sort_results(results);
    if (results.size() > top_k) results.resize(top_k);
    for (std::size_t r = 0; r < results.size(); ++r) results[r].path = {"hybrid#" + std::to_string(r + 1)};
    return results;
}

std::vector<RetrievalResult> rerank(const std::string& question, std::vector<RetrievalResult> candidates,
                                    const std::function<double(const std::string&, const std::string&)>& scorer,
                                    std::size_t top_k) {
    for (std::size_t r = 0; r < candidates.size(); ++r) {
        auto& c = candidates[r];
        c.score = scorer(question, c.chunk.text);
        if (c.path.empty()) c.path.push_back("vector#" + std::to_string(r + 1));
    }
    sort_results(candidates);
    if (candidates.size() > top_k) candidates.resize(top_k);
    for (std::size_t r = 0; r < candidates.size(); ++r) candidates[r].path.push_back("gen#" + std::to_string(r + 1));
    return candidates;
}

std::vector<RetrievalResult> vector_gen_retrieve(const std::string& question, const VectorIndex& index,
                                                 const provider::RelevanceScorer& relevance,
                                                 std::size_t candidate_k, std::size_t top_k) {
    auto candidates = index.retrieve(question, candidate_k);
    return rerank(question, std::move(candidates),
                  [&](const std::string& q, const std::string& text) { return relevance.yes_probability(q, text).p; },
                  top_k);
}

// ---------------------------------------------------------------------------
// Persistence

std::vector<Chunk> vector_chunks(const Corpus& corpus, SourceKind kind, std::size_t chunk_chars, std::size_t overlap) {
    std::vector<Chunk> out;
    for (const auto* doc : corpus.of_kind(kind)) {
        if (kind == SourceKind::qa) {
            out.push_back({doc->id + "#0", doc->id, doc->body, {0, doc->body.size()}, std::nullopt});
            continue;
        }
        auto chunks = split_fixed(*doc, chunk_chars, overlap);
        out.insert(out.end(), std::make_move_iterator(chunks.begin()), std::make_move_iterator(chunks.end()));
    }
    return out;
}

void save_vector_index(const VectorIndex& index, SourceKind kind, const std::string& embedding_model,
                       const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + (dir / name).string());
        out << text;
    };
    nlohmann::json manifest{{"kind", to_string(kind)},
                            {"chunk_count", index.chunks().size()},
                            {"embedding_model", embedding_model},
                            {"dim", index.embeddings().empty() ? 0 : index.embeddings().front().size()}};
    std::string chunks, embeddings;
    for (std::size_t i = 0; i < index.chunks().size(); ++i) {
        chunks += to_json(index.chunks()[i]).dump() + "\n";
        embeddings += nlohmann::json{{"chunk", index.chunks()[i].id}, {"vector", index.embeddings()[i]}}.dump() + "\n";
    }
    write("manifest.json", manifest.dump(2) + "\n");
    write("chunks.jsonl", chunks);
    write("embeddings.jsonl", embeddings);
}

VectorIndex load_vector_index(const std::filesystem::path& dir, std::shared_ptr<provider::EmbeddingClient> embedder,
                              VectorOptions options) {
    auto read_lines = [&](const std::string& name) {
        std::ifstream in(dir / name, std::ios::binary);
        if (!in) throw ValidationError("cannot open " + (dir / name).string());
        std::vector<nlohmann::json> out;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) out.push_back(nlohmann::json::parse(line));
        }
        return out;
    };
    try {
        std::ifstream in(dir / "manifest.json");
        if (!in) throw ValidationError("no vector index manifest in " + dir.string());
        const auto manifest = nlohmann::json::parse(in);
        std::vector<Chunk> chunks;
        for (const auto& j : read_lines("chunks.jsonl")) chunks.push_back(chunk_from_json(j));
        std::vector<provider::Embedding> embeddings;
        const auto rows = read_lines("embeddings.jsonl");
        if (rows.size() != chunks.size()) throw ValidationError("embedding count does not match chunks in " + dir.string());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].at("chunk").get<std::string>() != chunks[i].id) {
                throw ValidationError("embedding order does not match chunks in " + dir.string());
            }
            embeddings.push_back(rows[i].at("vector").get<provider::Embedding>());
        }
        if (chunks.size() != manifest.at("chunk_count").get<std::size_t>()) {
            throw ValidationError("chunk count does not match manifest in " + dir.string());
        }
        return VectorIndex(std::move(chunks), std::move(embeddings), std::move(embedder), options);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad vector index in " + dir.string() + ": " + e.what());
    }
}

} // namespace forumqa::retrieval
