#include "forumqa/workspace.hpp"

#include <spdlog/spdlog.h>

#include "forumqa/error.hpp"
#include "forumqa/retrieval/vector.hpp"

namespace forumqa {

std::filesystem::path hier_index_dir(const std::filesystem::path& index_dir, SourceKind kind) {
    return index_dir / std::string(to_string(kind)) / "hier";
}

std::filesystem::path vector_index_dir(const std::filesystem::path& index_dir, SourceKind kind) {
    return index_dir / std::string(to_string(kind)) / "vector";
}

namespace {

retrieval::VectorOptions vector_options(const CliConfig& config) {
    retrieval::VectorOptions o;
    o.hybrid_keyword = config.retrieval.hybrid_keyword;
    return o;
}

} // namespace

IndexBuildReport build_indexes(const CliConfig& config, const Corpus& corpus, const provider::ProviderStack& stack,
                               const std::vector<SourceKind>& kinds, int jobs) {
    IndexBuildReport report;
    const retrieval::ModelRef model{stack.chat, config.models.retrieval_model, kRetrievalSeed};
    for (auto kind : kinds) {
        if (kind != SourceKind::qa) {
            retrieval::IndexOptions options;
            options.chunking = config.retrieval.chunking;
            options.tree.branching = config.retrieval.branching;
            options.tree.jobs = jobs;
            const auto index = retrieval::build_kind_index(corpus, kind, model, options);
            retrieval::save_index(index, hier_index_dir(config.paths.index_dir, kind));
            report.hier_chunks[kind] = index.chunks().size();
            spdlog::info("hierarchical index for {}: {} chunks, {} trees", to_string(kind), index.chunks().size(),
                         index.trees().size());
        }
        auto chunks = retrieval::vector_chunks(corpus, kind, config.retrieval.chunking.chunk_chars,
                                               config.retrieval.chunking.overlap);
        const retrieval::VectorIndex index(std::move(chunks), stack.embedder, vector_options(config));
        retrieval::save_vector_index(index, kind, stack.embedder->model(), vector_index_dir(config.paths.index_dir, kind));
        report.vector_chunks[kind] = index.chunks().size();
        spdlog::info("vector index for {}: {} chunks", to_string(kind), index.chunks().size());
    }
    return report;
}

Workspace::Workspace(CliConfig config, provider::ProviderStack stack)
    : config_(std::move(config)), stack_(std::move(stack)) {}

void Workspace::load_data(bool need_labels) {
    if (config_.paths.corpus.empty()) throw ValidationError("config has no corpus path");
    corpus_ = std::make_shared<const Corpus>(load_corpus(config_.paths.corpus));
    if (!config_.paths.questions.empty()) questions_ = load_questions(config_.paths.questions);
    if (need_labels) {
        if (config_.paths.labels.empty()) throw ValidationError("config has no labels path");
        labels_ = load_labels(config_.paths.labels, questions_, corpus_.get());
    }
}

void Workspace::set_data(std::shared_ptr<const Corpus> corpus, std::vector<StudentQuestion> questions,
                         std::vector<GroundTruth> labels) {
    corpus_ = std::move(corpus);
    questions_ = std::move(questions);
    labels_ = std::move(labels);
}

const std::shared_ptr<const Corpus>& Workspace::corpus() const {
    if (!corpus_) throw ValidationError("no corpus loaded");
    return corpus_;
}

const StudentQuestion& Workspace::question(const std::string& id) const {
    for (const auto& q : questions_) {
        if (q.id == id) return q;
    }
    throw ValidationError("unknown question id \"" + id + "\"");
}

std::shared_ptr<const retrieval::KindIndex> Workspace::hier_index(SourceKind kind) {
    std::lock_guard lock(mu_);
    auto& slot = hier_[kind];
    if (!slot) {
        if (kind == SourceKind::qa) throw ValidationError("qa documents have no hierarchical index");
        slot = std::make_shared<const retrieval::KindIndex>(
            retrieval::load_index(hier_index_dir(config_.paths.index_dir, kind)));
        if (slot->provider_model() != config_.models.retrieval_model) {
            spdlog::warn("{} index was built with {}, retrieval uses {}", to_string(kind), slot->provider_model(),
                         config_.models.retrieval_model);
        }
    }
    return slot;
}

std::shared_ptr<const retrieval::VectorIndex> Workspace::vector_index(SourceKind kind) {
    std::lock_guard lock(mu_);
    auto& slot = vector_[kind];
    if (!slot) {
        slot = std::make_shared<const retrieval::VectorIndex>(retrieval::load_vector_index(
            vector_index_dir(config_.paths.index_dir, kind), stack_.embedder, vector_options(config_)));
    }
    return slot;
}

std::shared_ptr<const retrieval::Retriever> Workspace::retriever(SourceKind kind, retrieval::Method method) {
    {
        std::lock_guard lock(mu_);
        auto it = retrievers_.find({kind, method});
        if (it != retrievers_.end()) return it->second;
    }
    std::shared_ptr<const retrieval::Retriever> made;
    const retrieval::ModelRef model{stack_.chat, config_.models.retrieval_model, kRetrievalSeed};
    switch (method) {
        case retrieval::Method::hier_gen:
            made = std::make_shared<retrieval::HierRetriever>(
                hier_index(kind), model,
                retrieval::HierOptions{config_.retrieval.beam, config_.retrieval.max_select});
            break;
        case retrieval::Method::vector:
            made = std::make_shared<retrieval::VectorRetriever>(vector_index(kind));
            break;
        case retrieval::Method::vector_gen:
            made = std::make_shared<retrieval::VectorGenRetriever>(
                vector_index(kind),
                provider::RelevanceScorer(stack_.chat, config_.models.retrieval_model, kRetrievalSeed),
                config_.retrieval.candidate_k);
            break;
    }
    std::lock_guard lock(mu_);
    return retrievers_.emplace(std::make_pair(kind, method), made).first->second;
}

std::shared_ptr<const Toolbox> Workspace::toolbox() {
    {
        std::lock_guard lock(mu_);
        if (toolbox_) return toolbox_;
    }
    std::map<SourceKind, std::shared_ptr<const retrieval::Retriever>> backends;
    for (auto kind : kAllSourceKinds) {
        auto it = config_.retrieval.methods.find(kind);
        if (it == config_.retrieval.methods.end()) continue;
        if (corpus()->of_kind(kind).empty()) continue;
        backends[kind] = retriever(kind, it->second);
    }
    ToolboxOptions options;
    options.results_per_call = config_.retrieval.top_k;
    auto made = std::make_shared<const Toolbox>(corpus(), std::move(backends), options);
    std::lock_guard lock(mu_);
    if (!toolbox_) toolbox_ = std::move(made);
    return toolbox_;
}

std::shared_ptr<const Judge> Workspace::judge(const std::string& model, std::int64_t seed) {
    {
        std::lock_guard lock(mu_);
        if (!few_shots_) {
            few_shots_ = config_.paths.few_shots ? load_few_shots(*config_.paths.few_shots) : std::vector<FewShot>{};
        }
    }
    JudgeOptions options;
    options.model = model;
    options.seed = seed;
    options.few_shots = *few_shots_;
    return std::make_shared<const Judge>(stack_.chat, std::move(options));
}

} // namespace forumqa
