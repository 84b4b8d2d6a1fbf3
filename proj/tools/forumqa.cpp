#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "forumqa/bench.hpp"
#include "forumqa/config.hpp"
#include "forumqa/error.hpp"
#include "forumqa/judge.hpp"
#include "forumqa/parallel.hpp"
#include "forumqa/pipelines.hpp"
#include "forumqa/workspace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace forumqa;

namespace {

struct GlobalFlags {
    fs::path config;
    std::optional<fs::path> replay;
    std::optional<fs::path> record;
    std::optional<std::string> provider;
    std::optional<std::int64_t> seed;
    std::optional<fs::path> run_dir;
    std::optional<fs::path> index_dir;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool verbose = false;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << text;
}

/// Config with command-line overrides applied; flags win.
CliConfig effective_config(const GlobalFlags& g) {
    if (g.config.empty()) throw ValidationError("--config is required for this command");
    auto c = load_config(g.config);
    if (g.provider) c.provider.backend = provider::parse_backend_kind(*g.provider);
    if (g.run_dir) c.paths.run_dir = *g.run_dir;
    if (g.index_dir) c.paths.index_dir = *g.index_dir;
    if (g.replay && g.record) throw ValidationError("--replay and --record are mutually exclusive");
    if (g.replay) {
        c.paths.fixtures = *g.replay;
        c.provider.fixtures = *g.replay;
        c.provider.fixture_mode = provider::FixtureMode::replay;
    } else if (g.record) {
        c.paths.fixtures = *g.record;
        c.provider.fixtures = *g.record;
        c.provider.fixture_mode = provider::FixtureMode::record;
    }
    if (g.seed) c.seeds = {*g.seed};
    if (g.jobs < 1) throw ValidationError("--jobs must be >= 1");
    return c;
}

std::unique_ptr<Workspace> open_workspace(const GlobalFlags& g, bool need_labels) {
    auto config = effective_config(g);
    auto stack = provider::make_provider_stack(config.provider, provider::api_key_from_environment());
    auto ws = std::make_unique<Workspace>(std::move(config), std::move(stack));
    ws->load_data(need_labels);
    return ws;
}

void report_live_requests(const Workspace& ws) {
    std::cerr << "live requests: " << ws.stack().live_requests() << "\n";
}

fs::path table_path(const CliConfig& c, const std::string& name) { return c.paths.run_dir / "tables" / (name + ".json"); }

void save_table(const CliConfig& c, const std::string& name, const bench::MetricsTable& table) {
    write_text(table_path(c, name), json{{"tables", json::array({bench::to_json(table)})}}.dump(2) + "\n");
    std::cout << bench::render(table, bench::ReportFormat::markdown);
    std::cout << "table written to " << table_path(c, name).string() << "\n";
}

std::vector<PipelineKind> parse_pipelines(const std::string& text) {
    if (text == "all") return {kAllPipelines.begin(), kAllPipelines.end()};
    std::vector<PipelineKind> out;
    for (const auto& name : split_list(text)) out.push_back(parse_pipeline_kind(name));
    if (out.empty()) throw ValidationError("--pipelines is empty");
    return out;
}

std::vector<SourceKind> kinds_with_documents(const Corpus& corpus) {
    std::vector<SourceKind> out;
    for (auto k : kAllSourceKinds) {
        if (!corpus.of_kind(k).empty()) out.push_back(k);
    }
    return out;
}

std::vector<std::int64_t> resolve_seeds(const CliConfig& c, std::optional<int> count, const std::string& list) {
    if (!list.empty()) {
        std::vector<std::int64_t> out;
        for (const auto& s : split_list(list)) out.push_back(std::stoll(s));
        return out;
    }
    if (count) {
        if (*count < 1) throw ValidationError("--seeds must be >= 1");
        std::vector<std::int64_t> out;
        for (int i = 0; i < *count; ++i) out.push_back(i);
        return out;
    }
    return c.seeds;
}

void print_results(const std::vector<retrieval::RetrievalResult>& results) {
    for (std::size_t r = 0; r < results.size(); ++r) {
        const auto& res = results[r];
        std::string path;
        for (const auto& step : res.path) path += (path.empty() ? "" : " > ") + step;
        std::cout << fmt::format("{}. {:.4f} {} [{}..{}) {}\n   path: {}\n", r + 1, res.score, res.chunk.id,
                                 res.chunk.span.start, res.chunk.span.end, res.chunk.header.value_or(""), path);
    }
}

// ---------------------------------------------------------------------------
// Commands

struct SynthArgs {
    fs::path out = "data";
    std::uint64_t seed = 7;
    int questions = 20;
    int qa = 6, textbook = 4, assignment = 4, logistics = 2;
    std::size_t few_shots = 3;
    std::size_t judge_labels = 30;
};

int cmd_synth(const SynthArgs& a) {
    SyntheticSpec spec;
    spec.documents = {{SourceKind::qa, a.qa},
                      {SourceKind::textbook, a.textbook},
                      {SourceKind::assignment, a.assignment},
                      {SourceKind::logistics, a.logistics}};
    spec.questions = a.questions;
    const auto data = gen_synthetic_corpus(spec, a.seed);
    write_text(a.out / "corpus.jsonl", serialize_corpus(data.corpus));
    write_text(a.out / "questions.jsonl", serialize_questions(data.questions));
    write_text(a.out / "labels.jsonl", serialize_labels(data.labels));
    write_text(a.out / "few_shots.jsonl", serialize_few_shots(synthetic_judge_set(data.questions, data.labels,
                                                                                  a.few_shots, a.seed + 1)));
    write_text(a.out / "judge_labels.jsonl", serialize_few_shots(synthetic_judge_set(data.questions, data.labels,
                                                                                     a.judge_labels, a.seed + 2)));
    const json config{{"paths",
                       {{"corpus", "corpus.jsonl"},
                        {"questions", "questions.jsonl"},
                        {"labels", "labels.jsonl"},
                        {"index_dir", "index"},
                        {"run_dir", "runs"},
                        {"few_shots", "few_shots.jsonl"},
                        {"judge_labels", "judge_labels.jsonl"}}},
                      {"provider", {{"backend", "sim"}}}};
    write_text(a.out / "config.json", config.dump(2) + "\n");
    std::cout << fmt::format("wrote {} documents, {} questions to {}\n", data.corpus.size(), data.questions.size(),
                             a.out.string());
    return 0;
}

int cmd_ingest(const GlobalFlags& g) {
    auto config = effective_config(g);
    const auto corpus = load_corpus(config.paths.corpus);
    json summary{{"documents", corpus.size()}};
    for (auto k : kAllSourceKinds) summary["by_kind"][std::string(to_string(k))] = corpus.of_kind(k).size();
    if (!config.paths.questions.empty()) {
        const auto questions = load_questions(config.paths.questions);
        summary["questions"] = questions.size();
        if (!config.paths.labels.empty()) {
            summary["labels"] = load_labels(config.paths.labels, questions, &corpus).size();
        }
    }
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_index(const GlobalFlags& g, const std::string& kinds_text) {
    auto wsp = open_workspace(g, false);
    auto& ws = *wsp;
    std::vector<SourceKind> kinds;
    if (kinds_text.empty()) {
        kinds = kinds_with_documents(*ws.corpus());
    } else {
        for (const auto& k : split_list(kinds_text)) kinds.push_back(parse_source_kind(k));
    }
    const auto report = build_indexes(ws.config(), *ws.corpus(), ws.stack(), kinds, g.jobs);
    for (const auto& [kind, n] : report.hier_chunks) std::cout << to_string(kind) << " hier: " << n << " chunks\n";
    for (const auto& [kind, n] : report.vector_chunks) std::cout << to_string(kind) << " vector: " << n << " chunks\n";
    report_live_requests(ws);
    return 0;
}

int cmd_retrieve(const GlobalFlags& g, const std::string& query, const std::string& method_text,
                 const std::string& kind_text, std::size_t k) {
    if (query.empty()) throw ValidationError("--query must not be empty");
    auto wsp = open_workspace(g, false);
    auto& ws = *wsp;
    const auto method = retrieval::parse_method(method_text);
    std::vector<SourceKind> kinds;
    if (!kind_text.empty()) {
        kinds.push_back(parse_source_kind(kind_text));
    } else {
        for (auto kind : kinds_with_documents(*ws.corpus())) {
            if (method == retrieval::Method::hier_gen && kind == SourceKind::qa) continue;
            kinds.push_back(kind);
        }
    }
    std::vector<retrieval::RetrievalResult> merged;
    for (auto kind : kinds) {
        auto outcome = ws.retriever(kind, method)->retrieve(query, k);
        for (const auto& w : outcome.warnings) spdlog::warn("{}: {}", to_string(kind), w);
        merged.insert(merged.end(), outcome.results.begin(), outcome.results.end());
    }
    retrieval::sort_results(merged);
    if (merged.size() > k) merged.resize(k);
    print_results(merged);
    report_live_requests(ws);
    return 0;
}

struct AskArgs {
    std::string question_id;
    std::string question;
    std::string category;
    std::string pipeline = "fc_multihop";
    std::string fc_model;
};

int cmd_ask(const GlobalFlags& g, const AskArgs& a) {
    auto wsp = open_workspace(g, false);
    auto& ws = *wsp;
    StudentQuestion q;
    if (!a.question_id.empty()) {
        q = ws.question(a.question_id);
    } else if (!a.question.empty()) {
        q.id = "adhoc";
        q.text = a.question;
    } else {
        throw ValidationError("ask needs --question-id or --question");
    }
    if (!a.category.empty()) q.category = parse_category(a.category);
    const auto& c = ws.config();
    const auto seed = c.seeds.front();
    const auto fc_model = a.fc_model.empty() ? c.models.fc_model : a.fc_model;
    const auto config = c.pipeline_for(parse_pipeline_kind(a.pipeline), fc_model, seed);
    PipelineDeps deps{ws.stack().chat, ws.toolbox(), nullptr};
    if (config.kind == PipelineKind::fc_feedback) deps.judge = ws.judge(c.models.judge_model, seed);
    const auto trace = run_pipeline(q, config, deps);
    const auto path = trace_path(c.paths.run_dir, fc_model, q.id, config.kind, seed);
    save_trace(trace, path);
    std::cout << trace.answer << "\n";
    std::cerr << "functions:";
    for (auto f : trace.selected_functions) std::cerr << " " << to_string(f);
    std::cerr << "\ntrace: " << path.string() << "\n";
    for (const auto& flag : trace.flags) std::cerr << "flag: " << flag << "\n";
    report_live_requests(ws);
    return 0;
}

struct EvalFcArgs {
    std::string pipelines = "all";
    std::optional<int> seeds;
    std::string seed_list;
    std::string fc_models;
    bool answer_with_fc_model = false;
};

int cmd_eval_fc(const GlobalFlags& g, const EvalFcArgs& a) {
    auto wsp = open_workspace(g, true);
    auto& ws = *wsp;
    const auto& c = ws.config();
    const auto kinds = parse_pipelines(a.pipelines);
    const auto seeds = resolve_seeds(c, a.seeds, a.seed_list);
    const auto models = a.fc_models.empty() ? c.fc_models() : split_list(a.fc_models);

    struct Job {
        const StudentQuestion* question;
        PipelineKind kind;
        std::string model;
        std::int64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& model : models) {
        for (auto kind : kinds) {
            for (const auto& q : ws.questions()) {
                for (auto seed : seeds) jobs.push_back({&q, kind, model, seed});
            }
        }
    }
    const auto toolbox = ws.toolbox();
    std::map<std::int64_t, std::shared_ptr<const Judge>> judges;
    for (auto seed : seeds) judges[seed] = ws.judge(c.models.judge_model, seed);

    std::vector<PipelineTrace> traces(jobs.size());
    parallel_for(jobs.size(), g.jobs, [&](std::size_t i) {
        const auto& job = jobs[i];
        auto config = c.pipeline_for(job.kind, job.model, job.seed);
        if (a.answer_with_fc_model) config.answer_model = job.model;
        PipelineDeps deps{ws.stack().chat, toolbox, judges.at(job.seed)};
        traces[i] = run_pipeline(*job.question, config, deps);
        save_trace(traces[i], trace_path(c.paths.run_dir, job.model, job.question->id, job.kind, job.seed));
    });
    std::vector<std::string> warnings;
    save_table(c, "fc_f1", bench::evaluate_fc(traces, ws.labels(), c.ci_over, &warnings));
    report_live_requests(ws);
    return 0;
}

int cmd_eval_retrieval(const GlobalFlags& g, const std::string& methods_text, const std::string& ks_text) {
    auto wsp = open_workspace(g, true);
    auto& ws = *wsp;
    const auto& c = ws.config();
    std::vector<std::size_t> ks;
    for (const auto& k : split_list(ks_text)) {
        const auto v = std::stoll(k);
        if (v < 1) throw ValidationError("--k values must be >= 1");
        ks.push_back(static_cast<std::size_t>(v));
    }

    // Questions are routed to the kind of their labelled documents, so each
    // row measures one backend on the questions it should answer.
    std::map<SourceKind, std::vector<StudentQuestion>> by_kind;
    std::map<std::string, const GroundTruth*> labels;
    for (const auto& l : ws.labels()) labels[l.question_id] = &l;
    for (const auto& q : ws.questions()) {
        auto it = labels.find(q.id);
        if (it == labels.end() || it->second->relevant_docs.empty()) continue;
        by_kind[ws.corpus()->at(*it->second->relevant_docs.begin()).kind].push_back(q);
    }

    std::vector<std::string> warnings;
    bench::MetricsTable table;
    table.title = "Retrieval recall";
    for (const auto& [kind, questions] : by_kind) {
        std::vector<bench::RetrievalMethodRun> runs;
        for (const auto& name : split_list(methods_text)) {
            const auto method = retrieval::parse_method(name);
            if (method == retrieval::Method::hier_gen && kind == SourceKind::qa) continue;
            auto retriever = ws.retriever(kind, method);
            runs.push_back({c.models.retrieval_model, std::string(to_string(method)) + " (" + std::string(to_string(kind)) + ")",
                            [retriever](const StudentQuestion& q, std::size_t k) {
                                return retriever->retrieve(q.text, k).results;
                            }});
        }
        const auto part = bench::evaluate_retrieval(runs, questions, ws.labels(), ks, g.jobs, &warnings);
        for (const auto& row : part.rows) {
            for (const auto& [metric, cell] : row.cells) table.set(row.model, row.experiment, metric, cell);
        }
    }
    save_table(c, "retrieval", table);
    report_live_requests(ws);
    return 0;
}

int cmd_eval_judge(const GlobalFlags& g, const std::string& models_text) {
    auto wsp = open_workspace(g, false);
    auto& ws = *wsp;
    const auto& c = ws.config();
    if (!c.paths.judge_labels) throw ValidationError("config has no paths.judge_labels");
    const auto labelled = load_few_shots(*c.paths.judge_labels);
    const auto models = models_text.empty() ? c.judge_models() : split_list(models_text);
    std::vector<std::shared_ptr<const Judge>> owned;
    std::vector<std::pair<std::string, const Judge*>> judges;
    for (const auto& m : models) {
        owned.push_back(ws.judge(m, c.seeds.front()));
        judges.emplace_back(m, owned.back().get());
    }
    save_table(c, "judge_alignment", bench::evaluate_judge_alignment(judges, labelled, g.jobs));
    report_live_requests(ws);
    return 0;
}

int cmd_eval_responses(const GlobalFlags& g, const std::string& pipelines_text, const std::string& judge_model) {
    auto wsp = open_workspace(g, true);
    auto& ws = *wsp;
    const auto& c = ws.config();
    const auto kinds = parse_pipelines(pipelines_text);
    const fs::path dir = c.paths.run_dir / "traces";
    if (!fs::exists(dir)) throw ValidationError("no traces under " + dir.string() + "; run eval-fc first");
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<PipelineTrace> traces;
    for (const auto& f : files) {
        auto t = load_trace(f);
        if (std::find(kinds.begin(), kinds.end(), t.kind) != kinds.end()) traces.push_back(std::move(t));
    }
    const auto judge = ws.judge(judge_model.empty() ? c.models.judge_model : judge_model, c.seeds.front());
    std::vector<std::string> warnings;
    const auto result = bench::evaluate_responses(traces, ws.questions(), ws.labels(), *judge, g.jobs, c.ci_over, &warnings);
    std::string judged;
    for (const auto& r : result.judged) judged += to_json(r).dump() + "\n";
    write_text(c.paths.run_dir / "judged.jsonl", judged);
    save_table(c, "responses", result.table);
    report_live_requests(ws);
    return 0;
}

int cmd_report(const GlobalFlags& g, const std::string& formats_text) {
    const auto c = effective_config(g);
    const fs::path dir = c.paths.run_dir / "tables";
    if (!fs::exists(dir)) throw ValidationError("no tables under " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<bench::MetricsTable> tables;
    for (const auto& f : files) {
        auto part = bench::load_report_json(f);
        tables.insert(tables.end(), part.begin(), part.end());
    }
    const auto names = formats_text == "all" ? std::vector<std::string>{"json", "csv", "md"} : split_list(formats_text);
    for (const auto& name : names) {
        const auto format = bench::parse_report_format(name);
        const auto path = c.paths.run_dir / ("report." + std::string(bench::extension(format)));
        bench::write_report(tables, format, path);
        std::cout << path.string() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("forumqa"));
    spdlog::set_level(spdlog::level::warn);

    CLI::App app{"Course-forum question answering: indexing, answering and evaluation"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--config", g.config, "JSON config file");
    app.add_option("--replay", g.replay, "Serve every provider request from this fixture directory");
    app.add_option("--record", g.record, "Record provider requests into this fixture directory");
    app.add_option("--provider", g.provider, "Backend: sim or openai");
    app.add_option("--seed", g.seed, "Single seed, replacing the configured seed list");
    app.add_option("--jobs", g.jobs, "Worker threads");
    app.add_option("--run-dir", g.run_dir, "Output directory for traces, tables and reports");
    app.add_option("--index-dir", g.index_dir, "Index directory");
    app.add_flag("-v,--verbose", g.verbose, "Log progress");

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Write a synthetic corpus, labels, judge sets and config");
    c_synth->add_option("--out", synth.out, "Output directory");
    c_synth->add_option("--seed", synth.seed, "Generator seed");
    c_synth->add_option("--questions", synth.questions, "Question count");
    c_synth->add_option("--qa", synth.qa, "Q&A documents");
    c_synth->add_option("--textbook", synth.textbook, "Textbook chapters");
    c_synth->add_option("--assignment", synth.assignment, "Assignments");
    c_synth->add_option("--logistics", synth.logistics, "Logistics documents");
    c_synth->add_option("--judge-labels", synth.judge_labels, "Labelled judge examples");

    auto* c_ingest = app.add_subcommand("ingest", "Validate the corpus, questions and labels");

    std::string index_kinds;
    auto* c_index = app.add_subcommand("index", "Build and save hierarchical and vector indexes");
    c_index->add_option("--kinds", index_kinds, "Comma-separated kinds (default: all with documents)");

    std::string query, method = "hier_gen", kind;
    std::size_t k = 3;
    auto* c_retrieve = app.add_subcommand("retrieve", "Retrieve chunks for a query");
    c_retrieve->add_option("--query", query, "Query text")->required();
    c_retrieve->add_option("--method", method, "hier_gen, vector or vector_gen");
    c_retrieve->add_option("--kind", kind, "Source kind (default: merge all kinds)");
    c_retrieve->add_option("--k", k, "Result count")->check(CLI::PositiveNumber);

    AskArgs ask;
    auto* c_ask = app.add_subcommand("ask", "Answer one question and write its trace");
    c_ask->add_option("--question-id", ask.question_id, "Question id from the question set");
    c_ask->add_option("--question", ask.question, "Ad-hoc question text");
    c_ask->add_option("--category", ask.category, "conceptual, assignment or logistics");
    c_ask->add_option("--pipeline", ask.pipeline, "Pipeline kind");
    c_ask->add_option("--fc-model", ask.fc_model, "Function-calling model");

    EvalFcArgs fc;
    auto* c_fc = app.add_subcommand("eval-fc", "Run pipelines and score function selection");
    c_fc->add_option("--pipelines", fc.pipelines, "Comma-separated kinds or 'all'");
    c_fc->add_option("--seeds", fc.seeds, "Seed count (seeds 0..N-1)");
    c_fc->add_option("--seed-list", fc.seed_list, "Explicit comma-separated seeds");
    c_fc->add_option("--fc-models", fc.fc_models, "Comma-separated function-calling models");
    c_fc->add_flag("--answer-with-fc-model", fc.answer_with_fc_model, "Answer with the function-calling model");

    std::string methods = "hier_gen,vector,vector_gen", ks = "1,3,5";
    auto* c_ret = app.add_subcommand("eval-retrieval", "Recall@k per retrieval method and kind");
    c_ret->add_option("--methods", methods, "Comma-separated methods");
    c_ret->add_option("--k", ks, "Comma-separated k values");

    std::string judge_models;
    auto* c_judge = app.add_subcommand("eval-judge", "Judge agreement with TA scores");
    c_judge->add_option("--judge-models", judge_models, "Comma-separated judge models");

    std::string resp_pipelines = "all", judge_model;
    auto* c_resp = app.add_subcommand("eval-responses", "Judge the answers in saved traces");
    c_resp->add_option("--pipelines", resp_pipelines, "Comma-separated kinds or 'all'");
    c_resp->add_option("--judge-model", judge_model, "Judge model");

    std::string formats = "all";
    auto* c_report = app.add_subcommand("report", "Render saved tables as json, csv and markdown");
    c_report->add_option("--format", formats, "json, csv, md or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (g.verbose) spdlog::set_level(spdlog::level::info);

    try {
        if (*c_synth) return cmd_synth(synth);
        if (*c_ingest) return cmd_ingest(g);
        if (*c_index) return cmd_index(g, index_kinds);
        if (*c_retrieve) return cmd_retrieve(g, query, method, kind, k);
        if (*c_ask) return cmd_ask(g, ask);
        if (*c_fc) return cmd_eval_fc(g, fc);
        if (*c_ret) return cmd_eval_retrieval(g, methods, ks);
        if (*c_judge) return cmd_eval_judge(g, judge_models);
        if (*c_resp) return cmd_eval_responses(g, resp_pipelines, judge_model);
        if (*c_report) return cmd_report(g, formats);
    } catch (const ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
