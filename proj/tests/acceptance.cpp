// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runs hermetically: provider traffic is recorded from the
// simulated backend into a scratch directory and then replayed.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "forumqa/bench.hpp"
#include "forumqa/config.hpp"
#include "forumqa/error.hpp"
#include "forumqa/parallel.hpp"
#include "forumqa/pipelines.hpp"
#include "forumqa/prompts.hpp"
#include "forumqa/provider/mock.hpp"
#include "forumqa/retrieval/recall.hpp"
#include "forumqa/workspace.hpp"
#include "scripted_tree.hpp"

using namespace forumqa;
using namespace forumqa::retrieval;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("forumqa_acceptance_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

SyntheticData course_data() {
    SyntheticSpec spec;
    spec.documents = {{SourceKind::qa, 6}, {SourceKind::textbook, 4}, {SourceKind::assignment, 4},
                      {SourceKind::logistics, 2}};
    spec.questions = 20;
    return gen_synthetic_corpus(spec, 7);
}

// ---------------------------------------------------------------------------
// Criteria 1 and 2: random scripted-score trees

struct RandomTree {
    testing::ScriptedForest forest;
    std::size_t leaves = 0;
    int k = 2;
};

std::vector<RandomTree> random_trees(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> leaves(1, 30);
    std::uniform_int_distribution<int> branching(2, 4);
    std::vector<RandomTree> out;
    for (std::size_t i = 0; i < count; ++i) {
        RandomTree t;
        t.leaves = leaves(rng);
        t.k = branching(rng);
        t.forest = testing::scripted_forest({t.leaves}, t.k);
        testing::randomize_scores(t.forest, rng);
        out.push_back(std::move(t));
    }
    return out;
}

Outcome criterion_beam_oracle(const std::vector<RandomTree>& trees) {
    const auto start = Clock::now();
    std::size_t mismatches = 0;
    for (const auto& t : trees) {
        const auto roots = t.forest.index->roots();
        const auto out = beam_search(*t.forest.index, roots, "q", t.forest.scorer(), t.leaves);
        const auto oracle = testing::exhaustive_leaf_ranking(t.forest);
        bool same = out.results.size() == oracle.size();
        for (std::size_t i = 0; same && i < oracle.size(); ++i) {
            same = out.results[i].chunk.id == oracle[i].first && out.results[i].score == oracle[i].second;
        }
        mismatches += same ? 0 : 1;
    }
    const double elapsed = seconds_since(start);
    return {trees.size() >= 50 && mismatches == 0 && elapsed < 5.0,
            fmt::format("{} trees, {} mismatches against exhaustive ranking, {:.3f} s", trees.size(), mismatches,
                        elapsed)};
}

struct MonotonicityCount {
    std::size_t violations = 0;
    std::size_t trees_with_violation = 0;
    std::string example;
};

MonotonicityCount count_monotonicity_violations(const std::vector<RandomTree>& trees) {
    MonotonicityCount c;
    for (std::size_t i = 0; i < trees.size(); ++i) {
        const auto& t = trees[i];
        const auto roots = t.forest.index->roots();
        double previous = -1.0;
        bool violated = false;
        for (std::size_t beam = 1; beam <= t.leaves; ++beam) {
            const double top = beam_search(*t.forest.index, roots, "q", t.forest.scorer(), beam).results.front().score;
            if (top < previous) {
                ++c.violations;
                if (c.example.empty()) {
                    c.example = fmt::format("tree {} ({} leaves, k={}): beam {} top-1 {:.4f} < beam {} top-1 {:.4f}", i,
                                            t.leaves, t.k, beam, top, beam - 1, previous);
                }
                violated = true;
            }
            previous = top;
        }
        c.trees_with_violation += violated ? 1 : 0;
    }
    return c;
}

Outcome criterion_beam_monotonicity(const std::vector<RandomTree>& trees) {
    const auto c = count_monotonicity_violations(trees);
    std::string detail = fmt::format("{} violations in {} of {} trees", c.violations, c.trees_with_violation,
                                     trees.size());
    if (!c.example.empty()) detail += "; first: " + c.example;
    return {c.violations == 0, detail};
}

/// Same trees with every internal score replaced by the maximum leaf score
/// below it; reported for information alongside criterion 2.
std::string max_consistent_monotonicity(std::vector<RandomTree> trees) {
    for (auto& t : trees) {
        const auto& tree = t.forest.index->trees().front();
        std::function<double(const std::string&)> fill = [&](const std::string& id) {
            const auto& node = tree.nodes.at(id);
            if (node.children.empty()) return t.forest.scores.at(id);
            double best = 0.0;
            for (const auto& child : node.children) best = std::max(best, fill(child));
            t.forest.scores[id] = best;
            return best;
        };
        fill(tree.root);
    }
    const auto c = count_monotonicity_violations(trees);
    return fmt::format("{} violations in {} trees when internal scores equal their subtree maximum", c.violations,
                       trees.size());
}

// ---------------------------------------------------------------------------
// Criterion 3

Outcome criterion_tree_structure() {
    std::size_t failures = 0, checked = 0;
    std::string first;
    for (std::size_t leaves = 1; leaves <= 64; ++leaves) {
        for (int k = 2; k <= 4; ++k) {
            ++checked;
            // Independent chain: repeatedly ceil-divide until one node is left.
            std::size_t expected = leaves;
            for (std::size_t level = leaves; level > 1;) {
                level = (level + static_cast<std::size_t>(k) - 1) / static_cast<std::size_t>(k);
                expected += level;
            }
            const auto f = testing::scripted_forest({leaves}, k);
            const auto& tree = f.index->trees().front();
            std::map<std::string, int> leaf_of_chunk;
            for (const auto& [id, node] : tree.nodes) {
                if (node.leaf_chunk) ++leaf_of_chunk[*node.leaf_chunk];
            }
            bool ok = tree.nodes.size() == expected && leaf_of_chunk.size() == leaves;
            for (const auto& c : f.index->chunks()) ok = ok && leaf_of_chunk[c.id] == 1;
            if (!ok) {
                ++failures;
                if (first.empty()) first = fmt::format("leaves={} k={}: {} nodes, expected {}", leaves, k,
                                                       tree.nodes.size(), expected);
            }
        }
    }
    const auto ten = testing::scripted_forest({10}, 3).index->trees().front().nodes.size();
    std::string detail = fmt::format("{} (leaves, k) shapes, {} failures; 10 leaves k=3 gives {} nodes", checked,
                                     failures, ten);
    if (!first.empty()) detail += "; first: " + first;
    return {failures == 0 && ten == 17, detail};
}

// ---------------------------------------------------------------------------
// Criterion 4

struct RetrievalRun {
    double hier_recall = 0.0;
    double vector_recall = 0.0;
    std::size_t questions = 0;
    std::string rankings;
};

RetrievalRun run_structural_retrieval(const SyntheticData& data, const std::filesystem::path& dir,
                                      provider::FixtureMode mode, bool build) {
    CliConfig config;
    config.paths.index_dir = dir / "index";
    config.provider.fixtures = dir / "fixtures";
    config.provider.fixture_mode = mode;
    config.provider.blur_structure = true;
    config.provider.embedding_model = "hashing-blurred";
    auto stack = provider::make_provider_stack(config.provider, "");
    const std::vector<SourceKind> kinds{SourceKind::textbook, SourceKind::assignment};
    if (build) build_indexes(config, data.corpus, stack, kinds, jobs());
    Workspace ws(config, stack);
    ws.set_data(std::make_shared<const Corpus>(data.corpus), data.questions, data.labels);

    std::map<std::string, std::vector<RetrievalResult>> hier, vec;
    std::map<std::string, std::set<std::string>> relevant;
    RetrievalRun run;
    for (const auto& label : data.labels) {
        if (label.relevant_docs.empty()) continue;
        const auto kind = data.corpus.at(*label.relevant_docs.begin()).kind;
        if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) continue;
        const auto& q = ws.question(label.question_id);
        hier[q.id] = ws.retriever(kind, Method::hier_gen)->retrieve(q.text, 1).results;
        vec[q.id] = ws.retriever(kind, Method::vector)->retrieve(q.text, 1).results;
        relevant[q.id] = label.relevant_docs;
        for (const auto* side : {&hier, &vec}) {
            for (const auto& r : side->at(q.id)) run.rankings += q.id + ":" + to_json(r).dump() + "\n";
        }
    }
    run.questions = relevant.size();
    run.hier_recall = recall_at_k(hier, relevant, 1).mean;
    run.vector_recall = recall_at_k(vec, relevant, 1).mean;
    if (mode == provider::FixtureMode::replay && stack.live_requests() != 0) {
        throw std::runtime_error("replay reached a live backend");
    }
    return run;
}

Outcome criterion_structural_retrieval() {
    const auto data = course_data();
    const auto dir = scratch("retrieval");
    const auto recorded = run_structural_retrieval(data, dir, provider::FixtureMode::record, true);
    const auto start = Clock::now();
    const auto replayed = run_structural_retrieval(data, dir, provider::FixtureMode::replay, false);
    const double elapsed = seconds_since(start);
    const bool deterministic = recorded.rankings == replayed.rankings;
    return {replayed.hier_recall == 1.0 && replayed.vector_recall < 1.0 && deterministic && elapsed < 30.0,
            fmt::format("{} structural questions: hier_gen R@1 {:.3f}, blurred vector R@1 {:.3f}; replay matches "
                        "record: {}; 0 live requests; {:.2f} s",
                        replayed.questions, replayed.hier_recall, replayed.vector_recall,
                        deterministic ? "yes" : "no", elapsed)};
}

// ---------------------------------------------------------------------------
// Criterion 5

Outcome criterion_metric_oracles() {
    std::mt19937_64 rng(5150);
    const double tol = 1e-12;
    std::size_t failures = 0;
    auto check = [&](double got, double want) {
        if (!(std::abs(got - want) <= tol)) ++failures;
    };

    // fc_f1 against a bitmask count.
    for (int i = 0; i < 200; ++i) {
        const unsigned p = static_cast<unsigned>(rng() % 16), t = 1 + static_cast<unsigned>(rng() % 15);
        FunctionSet ps, ts;
        for (unsigned b = 0; b < 4; ++b) {
            if (p & (1u << b)) ps.insert(kAllFunctions[b]);
            if (t & (1u << b)) ts.insert(kAllFunctions[b]);
        }
        const int tp = std::popcount(p & t);
        const double want = tp == 0 ? 0.0 : 2.0 * tp / (std::popcount(p) + std::popcount(t));
        check(bench::fc_f1(ps, ts), want);
    }

    // recall_at_k against a direct count over the first k results.
    for (int i = 0; i < 200; ++i) {
        std::map<std::string, std::vector<RetrievalResult>> results;
        std::map<std::string, std::set<std::string>> relevant;
        const std::size_t k = 1 + rng() % 5;
        long double total = 0.0L;
        const std::size_t nq = 1 + rng() % 6;
        for (std::size_t q = 0; q < nq; ++q) {
            const auto qid = "q" + std::to_string(q);
            auto& ranked = results[qid];
            std::vector<std::string> docs;
            for (std::size_t r = 0, n = rng() % 7; r < n; ++r) docs.push_back("d" + std::to_string(rng() % 8));
            for (std::size_t r = 0; r < docs.size(); ++r) {
                ranked.push_back({{docs[r] + "#" + std::to_string(r), docs[r], "t", {r, r + 1}, std::nullopt},
                                        1.0 - 0.1 * static_cast<double>(r), {}});
            }
            for (std::size_t r = 0, n = 1 + rng() % 3; r < n; ++r) relevant[qid].insert("d" + std::to_string(rng() % 8));
            std::size_t hits = 0;
            for (const auto& d : relevant[qid]) {
                bool found = false;
                for (std::size_t r = 0; r < std::min(k, docs.size()); ++r) found = found || docs[r] == d;
                hits += found ? 1 : 0;
            }
            total += static_cast<long double>(hits) / static_cast<long double>(relevant[qid].size());
        }
        check(recall_at_k(results, relevant, k).mean, static_cast<double>(total / static_cast<long double>(nq)));
    }

    // Exact match and MAE against a reversed-order long double sum.
    for (int i = 0; i < 200; ++i) {
        std::vector<Judgment> a, b;
        const std::size_t n = 1 + rng() % 12;
        for (std::size_t j = 0; j < n; ++j) {
            a.push_back({1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 3)});
            b.push_back({1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 3)});
        }
        const auto report = align(a, b);
        const std::vector<std::pair<int Judgment::*, const DimensionAlignment*>> dims{
            {&Judgment::factuality, &report.factuality}, {&Judgment::relevance, &report.relevance},
            {&Judgment::style, &report.style}};
        for (const auto& [field, got] : dims) {
            long double equal = 0.0L, abs_sum = 0.0L;
            for (std::size_t j = n; j-- > 0;) {
                equal += a[j].*field == b[j].*field ? 1.0L : 0.0L;
                abs_sum += std::abs(a[j].*field - b[j].*field);
            }
            check(got->exact_match, static_cast<double>(equal / n));
            check(got->mae, static_cast<double>(abs_sum / n));
        }
    }

    // Likert interval against Welford's method in long double.
    for (int i = 0; i < 200; ++i) {
        std::vector<double> xs;
        for (std::size_t j = 0, n = 2 + rng() % 40; j < n; ++j) xs.push_back(1.0 + static_cast<double>(rng() % 5));
        long double m = 0.0L, m2 = 0.0L;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const long double d = xs[j] - m;
            m += d / static_cast<long double>(j + 1);
            m2 += d * (xs[j] - m);
        }
        const long double n = static_cast<long double>(xs.size());
        const auto s = bench::likert_aggregate(xs);
        check(s.mean, static_cast<double>(m));
        check(*s.ci_halfwidth, static_cast<double>(1.96L * std::sqrt(m2 / (n - 1.0L)) / std::sqrt(n)));
    }

    // Worked examples.
    const double f1 = bench::fc_f1({FunctionName::qa_retrieval, FunctionName::textbook_retrieval},
                                   {FunctionName::textbook_retrieval});
    const auto example = align({{5, 1, 1}, {4, 1, 1}, {3, 1, 1}}, {{5, 1, 1}, {5, 1, 1}, {3, 1, 1}});
    const std::vector<double> likert{4, 5, 4, 5};
    const double hw = *bench::likert_aggregate(likert).ci_halfwidth;
    const bool worked = std::abs(f1 - 2.0 / 3.0) <= tol && std::abs(example.factuality.exact_match - 2.0 / 3.0) <= tol &&
                        std::abs(example.factuality.mae - 1.0 / 3.0) <= tol &&
                        std::abs(hw - 1.96 * std::sqrt(1.0 / 3.0) / 2.0) <= tol && std::abs(hw - 0.5659) < 1e-4;
    return {failures == 0 && worked,
            fmt::format("4 x 200 random instances, {} mismatches beyond 1e-12; F1 {:.6f}, EM {:.6f}, MAE {:.6f}, "
                        "halfwidth {:.6f}",
                        failures, f1, example.factuality.exact_match, example.factuality.mae, hw)};
}

// ---------------------------------------------------------------------------
// Criterion 6

struct MatrixRun {
    std::vector<std::string> dumps;
    std::vector<PipelineTrace> traces;
    std::size_t live = 0;
    double seconds = 0.0;
};

MatrixRun run_pipeline_matrix(const SyntheticData& data, const std::filesystem::path& dir, provider::FixtureMode mode,
                              bool build, const std::vector<std::string>& fc_models) {
    CliConfig config;
    config.paths.index_dir = dir / "index";
    config.provider.fixtures = dir / "fixtures";
    config.provider.fixture_mode = mode;
    auto stack = provider::make_provider_stack(config.provider, "");
    if (build) {
        build_indexes(config, data.corpus, stack,
                      {SourceKind::qa, SourceKind::textbook, SourceKind::assignment, SourceKind::logistics}, jobs());
    }
    const auto start = Clock::now();
    Workspace ws(config, stack);
    ws.set_data(std::make_shared<const Corpus>(data.corpus), data.questions, data.labels);
    struct Job {
        PipelineKind kind;
        std::string model;
        std::size_t question;
        std::int64_t seed;
    };
    std::vector<Job> work;
    for (const auto& model : fc_models) {
        for (auto kind : kAllPipelines) {
            for (std::size_t q = 0; q < data.questions.size(); ++q) {
                for (std::int64_t seed : config.seeds) work.push_back({kind, model, q, seed});
            }
        }
    }
    PipelineDeps deps;
    deps.chat = stack.chat;
    deps.toolbox = ws.toolbox();
    deps.judge = ws.judge(config.models.judge_model);
    MatrixRun run;
    run.traces.resize(work.size());
    run.dumps.resize(work.size());
    parallel_for(work.size(), jobs(), [&](std::size_t i) {
        const auto& job = work[i];
        run.traces[i] = run_pipeline(data.questions[job.question], config.pipeline_for(job.kind, job.model, job.seed), deps);
        run.dumps[i] = to_json(run.traces[i]).dump(2);
    });
    run.seconds = seconds_since(start);
    run.live = stack.live_requests();
    return run;
}

Outcome criterion_pipeline_contracts() {
    const auto data = course_data();
    const auto dir = scratch("pipelines");
    const std::vector<std::string> models{"gpt-4.1", "gpt-4.1-mini"};
    const auto recorded = run_pipeline_matrix(data, dir, provider::FixtureMode::record, true, models);
    const auto first = run_pipeline_matrix(data, dir, provider::FixtureMode::replay, false, models);
    const auto second = run_pipeline_matrix(data, dir, provider::FixtureMode::replay, false, models);

    std::size_t forced_empty = 0, bound_exceeded = 0;
    std::map<std::pair<std::string, std::int64_t>, std::set<FunctionSet>> edison;
    for (const auto& t : first.traces) {
        PipelineConfig c;
        c.kind = t.kind;
        if (forces_selection(t.kind) && t.selected_functions.empty()) ++forced_empty;
        if (t.rounds.size() > round_bound(c) || t.provider_calls > provider_call_bound(c)) ++bound_exceeded;
        if (t.kind == PipelineKind::edison) edison[{t.question_id, t.seed}].insert(t.selected_functions);
    }
    std::size_t edison_split = 0;
    for (const auto& [_, sets] : edison) edison_split += sets.size() == 1 ? 0 : 1;
    const bool identical = first.dumps == second.dumps && first.dumps == recorded.dumps;
    const std::size_t live = first.live + second.live;
    const double elapsed = first.seconds + second.seconds;
    return {forced_empty == 0 && bound_exceeded == 0 && edison_split == 0 && identical && live == 0 && elapsed < 60.0,
            fmt::format("{} runs (7 pipelines x {} questions x 5 seeds x {} fc models): forced without selection {}, "
                        "bound exceeded {}, edison splits {}, byte-identical reruns {}, live requests {}, {:.2f} s",
                        first.traces.size(), data.questions.size(), models.size(), forced_empty, bound_exceeded,
                        edison_split, identical ? "yes" : "no", live, elapsed)};
}

// ---------------------------------------------------------------------------
// Criterion 7

struct JudgeCase {
    std::string name;
    std::vector<std::string> replies;
    std::optional<Judgment> expected;
    std::size_t calls;
};

std::vector<JudgeCase> judge_cases() {
    const std::string ok = R"({"factuality": 5, "relevance": 4, "style": 3})";
    const Judgment j{5, 4, 3};
    return {
        {"plain dictionary", {ok}, j, 1},
        {"json code fence", {"```json\n" + ok + "\n```"}, j, 1},
        {"bare code fence", {"```\n" + ok + "\n```"}, j, 1},
        {"surrounding whitespace", {"\n\n  " + ok + "  \n"}, j, 1},
        {"fence inside whitespace", {"  ```json\n" + ok + "\n```\n"}, j, 1},
        {"reordered keys", {R"({"style": 3, "factuality": 5, "relevance": 4})"}, j, 1},
        {"minimum scores", {R"({"factuality": 1, "relevance": 1, "style": 1})"}, Judgment{1, 1, 1}, 1},
        {"maximum scores", {R"({"factuality": 5, "relevance": 5, "style": 3})"}, Judgment{5, 5, 3}, 1},
        {"re-ask after prose", {"I would give it a five.", ok}, j, 2},
        {"re-ask after empty reply", {"", ok}, j, 2},
        {"re-ask after trailing chatter", {ok + " Hope this helps!", ok}, j, 2},
        {"re-ask after a list", {"[5, 4, 3]", ok}, j, 2},
        {"re-ask after truncated dictionary", {R"({"factuality": 5, "relevance": 4,)", ok}, j, 2},
        {"prose twice", {"five", "still five"}, std::nullopt, 2},
        {"re-ask then out of range", {"five", R"({"factuality": 7, "relevance": 4, "style": 3})"}, std::nullopt, 2},
        {"factuality above range", {R"({"factuality": 6, "relevance": 4, "style": 3})"}, std::nullopt, 1},
        {"relevance zero", {R"({"factuality": 5, "relevance": 0, "style": 3})"}, std::nullopt, 1},
        {"style above range", {R"({"factuality": 5, "relevance": 4, "style": 4})"}, std::nullopt, 1},
        {"negative score", {R"({"factuality": -1, "relevance": 4, "style": 3})"}, std::nullopt, 1},
        {"extra key", {R"({"factuality": 5, "relevance": 4, "style": 3, "overall": 4})"}, std::nullopt, 1},
        {"missing key", {R"({"factuality": 5, "relevance": 4})"}, std::nullopt, 1},
        {"duplicate key", {R"({"factuality": 5, "relevance": 4, "style": 3, "factuality": 1})"}, std::nullopt, 1},
        {"string score", {R"({"factuality": "5", "relevance": 4, "style": 3})"}, std::nullopt, 1},
        {"fractional score", {R"({"factuality": 4.5, "relevance": 4, "style": 3})"}, std::nullopt, 1},
        {"boolean score", {R"({"factuality": true, "relevance": 4, "style": 3})"}, std::nullopt, 1},
        {"null score", {R"({"factuality": null, "relevance": 4, "style": 3})"}, std::nullopt, 1},
        {"nested scores", {R"({"scores": {"factuality": 5, "relevance": 4, "style": 3}})"}, std::nullopt, 1},
        {"capitalised keys", {R"({"Factuality": 5, "Relevance": 4, "Style": 3})"}, std::nullopt, 1},
        {"fenced extra key", {"```json\n{\"factuality\": 5, \"relevance\": 4, \"style\": 3, \"why\": \"ok\"}\n```"},
         std::nullopt, 1},
        {"feedback key without request", {R"({"factuality": 5, "relevance": 4, "style": 3, "feedback": "x"})"},
         std::nullopt, 1},
    };
}

Outcome criterion_judge_parser() {
    const auto cases = judge_cases();
    std::size_t correct = 0;
    std::string first_wrong;
    for (const auto& c : cases) {
        auto mock = std::make_shared<provider::ScriptedChat>();
        for (const auto& r : c.replies) mock->push_text(r);
        provider::ClientOptions options;
        options.sleep = [](std::chrono::milliseconds) {};
        Judge judge(std::make_shared<provider::ChatClient>(mock, options), {"judge", 0, {}});
        std::optional<Judgment> got;
        bool rejected = false;
        try {
            got = judge.evaluate("question", "answer", "ta answer");
        } catch (const ContractViolation&) {
            rejected = true;
        }
        const bool right = (c.expected ? (got && *got == *c.expected) : rejected) && mock->call_count() == c.calls;
        correct += right ? 1 : 0;
        if (!right && first_wrong.empty()) first_wrong = c.name;
    }
    std::string detail = fmt::format("{}/{} adversarial cases resolved as specified", correct, cases.size());
    if (!first_wrong.empty()) detail += "; first wrong: " + first_wrong;
    return {correct == cases.size() && cases.size() == 30, detail};
}

// ---------------------------------------------------------------------------
// Criterion 8

Outcome criterion_report_format() {
    const auto dir = scratch("report");
    bench::MetricsTable table;
    table.title = "Response quality";
    table.set("gpt-4.1", "fc_multihop", "factuality", {4.648, 0.036, 80});
    bench::write_report({table}, bench::ReportFormat::json, dir / "report.json");
    const auto loaded = bench::load_report_json(dir / "report.json");
    bench::write_report(loaded, bench::ReportFormat::markdown, dir / "report.md");
    std::ifstream in(dir / "report.md");
    const std::string md((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const bool found = md.find("| gpt-4.1 | fc_multihop | 4.648 ± 0.036 |") != std::string::npos;
    return {found, fmt::format("report.md {} \"4.648 ± 0.036\" after a json round trip", found ? "contains" : "lacks")};
}

} // namespace

int main() {
    spdlog::set_level(spdlog::level::err);
    const auto trees = random_trees(100, 20240601);

    struct Criterion {
        int id;
        std::string name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "beam search equals exhaustive ranking at full width", [&] { return criterion_beam_oracle(trees); }},
        {2, "top-1 score non-decreasing in beam width", [&] { return criterion_beam_monotonicity(trees); }},
        {3, "tree node counts and leaf coverage", criterion_tree_structure},
        {4, "structural retrieval beats blurred vectors", criterion_structural_retrieval},
        {5, "metric oracles", criterion_metric_oracles},
        {6, "pipeline contracts under replay", criterion_pipeline_contracts},
        {7, "judge parser adversarial set", criterion_judge_parser},
        {8, "report cell format", criterion_report_format},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " (" << o.detail << ")\n";
        if (c.id == 2) std::cout << "info  criterion 2: " << max_consistent_monotonicity(trees) << "\n";
    }
    std::cout << (failed == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failed)) << "\n";
    return failed == 0 ? 0 : 1;
}
