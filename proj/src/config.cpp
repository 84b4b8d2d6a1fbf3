#include "forumqa/config.hpp"

#include <fstream>
#include <set>

#include "forumqa/error.hpp"

namespace forumqa {

using nlohmann::json;

std::vector<std::string> CliConfig::fc_models() const {
    return models.fc_models.empty() ? std::vector<std::string>{models.fc_model} : models.fc_models;
}

std::vector<std::string> CliConfig::judge_models() const {
    return models.judge_models.empty() ? std::vector<std::string>{models.judge_model} : models.judge_models;
}

PipelineConfig CliConfig::pipeline_for(PipelineKind kind, const std::string& fc_model, std::int64_t seed) const {
    PipelineConfig c = pipeline;
    c.kind = kind;
    c.fc_model = fc_model;
    c.answer_model = models.answer_model;
    c.seed = seed;
    return c;
}

namespace {

void check_keys(const json& j, const std::string& section, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ValidationError("config section \"" + section + "\" must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items()) {
        if (!ok.contains(key)) {
            throw ValidationError("unknown config key \"" + (section.empty() ? key : section + "." + key) + "\"");
        }
    }
}

std::filesystem::path resolve(const json& v, const std::filesystem::path& base) {
    std::filesystem::path p = v.get<std::string>();
    return p.is_relative() && !base.empty() ? base / p : p;
}

std::size_t positive(const json& v, const std::string& name) {
    const auto n = v.get<long long>();
    if (n < 1) throw ValidationError(name + " must be >= 1");
    return static_cast<std::size_t>(n);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

CliConfig config_from_json(const json& j, const std::filesystem::path& base) {
    CliConfig c;
    try {
        check_keys(j, "", {"paths", "provider", "models", "retrieval", "pipeline", "judge", "bench"});

        if (j.contains("paths")) {
            const auto& p = j["paths"];
            check_keys(p, "paths", {"corpus", "questions", "labels", "index_dir", "run_dir", "fixtures", "few_shots",
                                    "judge_labels"});
            if (p.contains("corpus")) c.paths.corpus = resolve(p["corpus"], base);
            if (p.contains("questions")) c.paths.questions = resolve(p["questions"], base);
            if (p.contains("labels")) c.paths.labels = resolve(p["labels"], base);
            if (p.contains("index_dir")) c.paths.index_dir = resolve(p["index_dir"], base);
            if (p.contains("run_dir")) c.paths.run_dir = resolve(p["run_dir"], base);
            if (p.contains("fixtures")) c.paths.fixtures = resolve(p["fixtures"], base);
            if (p.contains("few_shots")) c.paths.few_shots = resolve(p["few_shots"], base);
            if (p.contains("judge_labels")) c.paths.judge_labels = resolve(p["judge_labels"], base);
        }

        if (j.contains("provider")) {
            const auto& p = j["provider"];
            check_keys(p, "provider", {"backend", "base_url", "embedding_model", "requests_per_minute",
                                       "timeout_seconds", "embedding_dim", "blur_structure", "transport_attempts",
                                       "contract_retries", "initial_backoff_ms"});
            if (p.contains("backend")) c.provider.backend = provider::parse_backend_kind(p["backend"].get<std::string>());
            read(p, "base_url", c.provider.base_url);
            read(p, "embedding_model", c.provider.embedding_model);
            read(p, "requests_per_minute", c.provider.requests_per_minute);
            if (c.provider.requests_per_minute < 0) throw ValidationError("requests_per_minute must be >= 0");
            if (p.contains("timeout_seconds")) {
                c.provider.timeout = std::chrono::seconds(positive(p["timeout_seconds"], "timeout_seconds"));
            }
            if (p.contains("embedding_dim")) c.provider.embedding_dim = positive(p["embedding_dim"], "embedding_dim");
            read(p, "blur_structure", c.provider.blur_structure);
            if (p.contains("transport_attempts")) {
                c.provider.retry.transport_attempts = static_cast<int>(positive(p["transport_attempts"], "transport_attempts"));
            }
            read(p, "contract_retries", c.provider.retry.contract_retries);
            if (c.provider.retry.contract_retries < 0) throw ValidationError("contract_retries must be >= 0");
            if (p.contains("initial_backoff_ms")) {
                c.provider.retry.initial_backoff = std::chrono::milliseconds(p["initial_backoff_ms"].get<long long>());
            }
        }

        if (j.contains("models")) {
            const auto& m = j["models"];
            check_keys(m, "models", {"fc_model", "answer_model", "retrieval_model", "judge_model", "fc_models",
                                     "judge_models"});
            read(m, "fc_model", c.models.fc_model);
            read(m, "answer_model", c.models.answer_model);
            read(m, "retrieval_model", c.models.retrieval_model);
            read(m, "judge_model", c.models.judge_model);
            read(m, "fc_models", c.models.fc_models);
            read(m, "judge_models", c.models.judge_models);
        }

        if (j.contains("retrieval")) {
            const auto& r = j["retrieval"];
            check_keys(r, "retrieval", {"methods", "top_k", "beam", "max_select", "candidate_k", "branching",
                                        "chunk_chars", "overlap", "hybrid_keyword"});
            if (r.contains("methods")) {
                check_keys(r["methods"], "retrieval.methods", {"qa", "textbook", "assignment", "logistics"});
                for (const auto& [kind, method] : r["methods"].items()) {
                    c.retrieval.methods[parse_source_kind(kind)] = retrieval::parse_method(method.get<std::string>());
                }
            }
            if (r.contains("top_k")) c.retrieval.top_k = positive(r["top_k"], "top_k");
            if (r.contains("beam")) c.retrieval.beam = positive(r["beam"], "beam");
            if (r.contains("max_select")) c.retrieval.max_select = positive(r["max_select"], "max_select");
            if (r.contains("candidate_k")) c.retrieval.candidate_k = positive(r["candidate_k"], "candidate_k");
            read(r, "branching", c.retrieval.branching);
            if (c.retrieval.branching < 2) throw ValidationError("branching must be >= 2");
            if (r.contains("chunk_chars")) c.retrieval.chunking.chunk_chars = positive(r["chunk_chars"], "chunk_chars");
            read(r, "overlap", c.retrieval.chunking.overlap);
            if (c.retrieval.chunking.overlap >= c.retrieval.chunking.chunk_chars) {
                throw ValidationError("overlap must be smaller than chunk_chars");
            }
            read(r, "hybrid_keyword", c.retrieval.hybrid_keyword);
        }

        if (j.contains("pipeline")) {
            const auto& p = j["pipeline"];
            check_keys(p, "pipeline", {"kind", "max_rounds", "max_feedback_rounds", "feedback_threshold", "edison_rules"});
            if (p.contains("kind")) c.pipeline.kind = parse_pipeline_kind(p["kind"].get<std::string>());
            read(p, "max_rounds", c.pipeline.max_rounds);
            read(p, "max_feedback_rounds", c.pipeline.max_feedback_rounds);
            if (p.contains("feedback_threshold")) {
                const auto& t = p["feedback_threshold"];
                check_keys(t, "pipeline.feedback_threshold", {"factuality", "relevance", "style"});
                read(t, "factuality", c.pipeline.feedback_threshold.factuality);
                read(t, "relevance", c.pipeline.feedback_threshold.relevance);
                read(t, "style", c.pipeline.feedback_threshold.style);
            }
            if (p.contains("edison_rules")) c.pipeline.edison_rules = edison_rules_from_json(p["edison_rules"]);
            if (c.pipeline.max_rounds < 1) throw ValidationError("max_rounds must be >= 1");
            if (c.pipeline.max_feedback_rounds < 0) throw ValidationError("max_feedback_rounds must be >= 0");
        }

        if (j.contains("judge")) {
            const auto& jd = j["judge"];
            check_keys(jd, "judge", {"model", "models", "few_shots"});
            read(jd, "model", c.models.judge_model);
            read(jd, "models", c.models.judge_models);
            if (jd.contains("few_shots")) c.paths.few_shots = resolve(jd["few_shots"], base);
        }

        if (j.contains("bench")) {
            const auto& b = j["bench"];
            check_keys(b, "bench", {"seeds", "ci_over"});
            if (b.contains("seeds")) {
                c.seeds = b["seeds"].get<std::vector<std::int64_t>>();
                const std::set<std::int64_t> distinct(c.seeds.begin(), c.seeds.end());
                if (c.seeds.empty() || distinct.size() != c.seeds.size()) {
                    throw ValidationError("bench.seeds must be non-empty and distinct");
                }
            }
            if (b.contains("ci_over")) {
                const auto v = b["ci_over"].get<std::string>();
                if (v == "questions") {
                    c.ci_over = bench::CiOver::questions;
                } else if (v == "samples") {
                    c.ci_over = bench::CiOver::samples;
                } else {
                    throw ValidationError("bench.ci_over must be questions or samples");
                }
            }
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    return c;
}

CliConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

json to_json(const CliConfig& c) {
    json methods = json::object();
    for (const auto& [kind, m] : c.retrieval.methods) methods[std::string(to_string(kind))] = to_string(m);
    json paths{{"corpus", c.paths.corpus.string()},
               {"questions", c.paths.questions.string()},
               {"labels", c.paths.labels.string()},
               {"index_dir", c.paths.index_dir.string()},
               {"run_dir", c.paths.run_dir.string()}};
    if (c.paths.fixtures) paths["fixtures"] = c.paths.fixtures->string();
    if (c.paths.few_shots) paths["few_shots"] = c.paths.few_shots->string();
    if (c.paths.judge_labels) paths["judge_labels"] = c.paths.judge_labels->string();
    return {
        {"paths", paths},
        {"provider",
         {{"backend", c.provider.backend == provider::BackendKind::openai ? "openai" : "sim"},
          {"base_url", c.provider.base_url},
          {"embedding_model", c.provider.embedding_model},
          {"requests_per_minute", c.provider.requests_per_minute},
          {"timeout_seconds", c.provider.timeout.count()},
          {"embedding_dim", c.provider.embedding_dim},
          {"blur_structure", c.provider.blur_structure},
          {"transport_attempts", c.provider.retry.transport_attempts},
          {"contract_retries", c.provider.retry.contract_retries},
          {"initial_backoff_ms", c.provider.retry.initial_backoff.count()}}},
        {"models",
         {{"fc_model", c.models.fc_model},
          {"answer_model", c.models.answer_model},
          {"retrieval_model", c.models.retrieval_model},
          {"judge_model", c.models.judge_model},
          {"fc_models", c.models.fc_models},
          {"judge_models", c.models.judge_models}}},
        {"retrieval",
         {{"methods", methods},
          {"top_k", c.retrieval.top_k},
          {"beam", c.retrieval.beam},
          {"max_select", c.retrieval.max_select},
          {"candidate_k", c.retrieval.candidate_k},
          {"branching", c.retrieval.branching},
          {"chunk_chars", c.retrieval.chunking.chunk_chars},
          {"overlap", c.retrieval.chunking.overlap},
          {"hybrid_keyword", c.retrieval.hybrid_keyword}}},
        {"pipeline",
         {{"kind", to_string(c.pipeline.kind)},
          {"max_rounds", c.pipeline.max_rounds},
          {"max_feedback_rounds", c.pipeline.max_feedback_rounds},
          {"feedback_threshold",
           {{"factuality", c.pipeline.feedback_threshold.factuality},
            {"relevance", c.pipeline.feedback_threshold.relevance},
            {"style", c.pipeline.feedback_threshold.style}}},
          {"edison_rules", to_json(c.pipeline.edison_rules)}}},
        {"bench", {{"seeds", c.seeds}, {"ci_over", c.ci_over == bench::CiOver::questions ? "questions" : "samples"}}},
    };
}

} // namespace forumqa
