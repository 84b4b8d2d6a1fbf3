#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "forumqa/bench.hpp"
#include "forumqa/error.hpp"
#include "helpers.hpp"

using namespace forumqa;
using namespace forumqa::bench;
using F = FunctionName;

namespace {

PipelineTrace trace(std::string qid, PipelineKind kind, std::string model, std::int64_t seed, FunctionSet selected,
                    std::string answer = "an answer") {
    PipelineTrace t;
    t.question_id = std::move(qid);
    t.kind = kind;
    t.fc_model = std::move(model);
    t.answer_model = "answer-model";
    t.seed = seed;
    t.selected_functions = std::move(selected);
    t.answer = std::move(answer);
    return t;
}

GroundTruth label(std::string qid, FunctionSet fns, std::optional<std::string> ta = std::nullopt,
                  std::set<std::string> docs = {}) {
    GroundTruth g;
    g.question_id = std::move(qid);
    g.functions = std::move(fns);
    g.ta_answer = std::move(ta);
    g.relevant_docs = std::move(docs);
    return g;
}

retrieval::RetrievalResult hit(const std::string& doc, double score) {
    return {{doc + "#0", doc, "t", {0, 1}, std::nullopt}, score, {}};
}

} // namespace

TEST_CASE("function-calling F1 examples") {
    CHECK(fc_f1({F::textbook_retrieval}, {F::textbook_retrieval}) == 1.0);
    CHECK(fc_f1({F::qa_retrieval, F::textbook_retrieval}, {F::textbook_retrieval}) == doctest::Approx(2.0 / 3.0));
    CHECK(fc_f1({}, {F::textbook_retrieval}) == 0.0);
    CHECK(fc_f1({F::qa_retrieval}, {F::textbook_retrieval}) == 0.0);
    CHECK_THROWS_AS(fc_f1({F::qa_retrieval}, {}), ValidationError);
}

TEST_CASE("likert aggregate examples") {
    const std::vector<double> a{4, 5, 4, 5};
    const auto s = likert_aggregate(a);
    CHECK(s.mean == 4.5);
    REQUIRE(s.ci_halfwidth);
    CHECK(*s.ci_halfwidth == doctest::Approx(1.96 * std::sqrt(1.0 / 3.0) / 2.0));
    CHECK(*s.ci_halfwidth == doctest::Approx(0.5659).epsilon(1e-4));
    CHECK(s.n == 4);
    CHECK_FALSE(s.flagged);

    const std::vector<double> flat{3, 3, 3};
    CHECK(*likert_aggregate(flat).ci_halfwidth == 0.0);

    const std::vector<double> one{4};
    const auto single = likert_aggregate(one);
    CHECK(single.mean == 4.0);
    CHECK_FALSE(single.ci_halfwidth);
    CHECK(single.flagged);

    CHECK_THROWS_AS(likert_aggregate(std::vector<double>{}), ValidationError);
    CHECK(z_for_confidence(0.95) == 1.96);
    CHECK(z_for_confidence(0.99) == doctest::Approx(2.5758).epsilon(1e-4));
}

TEST_CASE("cells format to three decimals") {
    CHECK(format_cell({4.648, 0.036, 80}) == "4.648 ± 0.036");
    CHECK(format_cell({4.6484, 0.03551, 80}) == "4.648 ± 0.036");
    CHECK(format_cell({4.0, std::nullopt, 1}) == "4.000");
}

TEST_CASE("reports render in three formats") {
    MetricsTable t;
    t.title = "Responses";
    t.set("gpt-4.1", "fc_multihop", "factuality", {4.648, 0.036, 80});
    t.set("gpt-4.1", "fc", "factuality", {4.5, 0.1, 80});
    t.set("other", "fc", "style", {2.5, std::nullopt, 1});

    const auto md = render(t, ReportFormat::markdown);
    CHECK(md.find("| gpt-4.1 | fc_multihop | 4.648 ± 0.036 | n/a |") != std::string::npos);

    const auto csv = render(t, ReportFormat::csv);
    std::istringstream lines(csv);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "table,model,experiment,factuality_mean,factuality_ci,factuality_n,style_mean,style_ci,style_n");
    CHECK(rows[3] == "Responses,other,fc,,,,2.5,,1");

    const auto dir = testing::scratch_dir("report");
    write_report({t}, ReportFormat::json, dir / "report.json");
    const auto loaded = load_report_json(dir / "report.json");
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0] == t);
    CHECK(render(loaded, ReportFormat::json) == render(t, ReportFormat::json));
    CHECK_THROWS_AS(parse_report_format("xlsx"), ValidationError);
}

TEST_CASE("per-question aggregation averages seeds first") {
    const std::map<std::string, std::vector<double>> s{{"q1", {1.0, 0.0}}, {"q2", {1.0, 1.0}}};
    const auto q = aggregate_per_question(s, CiOver::questions);
    CHECK(q.mean == 0.75);
    CHECK(q.n == 2);
    const auto p = aggregate_per_question(s, CiOver::samples);
    CHECK(p.mean == 0.75);
    CHECK(p.n == 4);
}

TEST_CASE("evaluate_fc gives one row per model and pipeline") {
    const std::vector<GroundTruth> labels{label("q1", {F::textbook_retrieval}), label("q2", {F::qa_retrieval}),
                                          label("q3", {})};
    std::vector<PipelineTrace> traces;
    for (const auto* model : {"m1", "m2"}) {
        for (std::int64_t seed = 0; seed < 2; ++seed) {
            traces.push_back(trace("q1", PipelineKind::edison, model, seed, {F::textbook_retrieval, F::qa_retrieval}));
            traces.push_back(trace("q2", PipelineKind::edison, model, seed, {F::qa_retrieval}));
            traces.push_back(trace("q3", PipelineKind::edison, model, seed, {F::qa_retrieval}));
        }
        traces.push_back(trace("q1", PipelineKind::fc, model, 0, {F::textbook_retrieval}));
        traces.push_back(trace("q2", PipelineKind::fc, model, 0, {F::qa_retrieval}));
    }
    std::vector<std::string> warnings;
    const auto table = evaluate_fc(traces, labels, CiOver::questions, &warnings);
    CHECK(warnings.size() == 1);
    const auto* e1 = table.find("m1", "edison", "f1");
    const auto* e2 = table.find("m2", "edison", "f1");
    REQUIRE(e1);
    REQUIRE(e2);
    CHECK(*e1 == *e2);
    CHECK(e1->mean == doctest::Approx((2.0 / 3.0 + 1.0) / 2.0));
    CHECK(table.find("m1", "fc", "f1")->mean == 1.0);
    CHECK(table.rows.size() == 4);
}

TEST_CASE("evaluate_retrieval cuts one ranking at each k") {
    const std::vector<StudentQuestion> qs{{"q1", "a", std::nullopt, std::nullopt}, {"q2", "b", std::nullopt, std::nullopt}};
    const std::vector<GroundTruth> labels{label("q1", {F::qa_retrieval}, std::nullopt, {"d2"}),
                                          label("q2", {F::qa_retrieval}, std::nullopt, {"d1", "d3"})};
    std::size_t calls = 0;
    RetrievalMethodRun run{"m", "fixed", [&](const StudentQuestion&, std::size_t k) {
                               ++calls;
                               CHECK(k == 5);
                               return std::vector<retrieval::RetrievalResult>{hit("d1", 0.9), hit("d2", 0.8), hit("d3", 0.7)};
                           }};
    const auto table = evaluate_retrieval({run}, qs, labels, {1, 3, 5});
    CHECK(calls == 2);
    CHECK(table.find("m", "fixed", "recall@1")->mean == doctest::Approx(0.25));
    CHECK(table.find("m", "fixed", "recall@3")->mean == doctest::Approx(1.0));
    CHECK(table.find("m", "fixed", "recall@5")->mean == doctest::Approx(1.0));
}

TEST_CASE("evaluate_responses with a constant judge") {
    auto mock = std::make_shared<provider::ScriptedChat>(
        [](const provider::CompletionRequest&) { return provider::text_response(R"({"factuality": 5, "relevance": 5, "style": 3})"); });
    Judge judge(testing::client_for(mock), {"j", 0, {}});
    const std::vector<StudentQuestion> qs{{"q1", "a?", std::nullopt, std::nullopt}, {"q2", "b?", std::nullopt, std::nullopt}};
    const std::vector<GroundTruth> labels{label("q1", {F::qa_retrieval}, "TA one"), label("q2", {F::qa_retrieval})};
    std::vector<PipelineTrace> traces;
    for (std::int64_t seed = 0; seed < 3; ++seed) {
        traces.push_back(trace("q1", PipelineKind::fc, "m", seed, {}));
        traces.push_back(trace("q2", PipelineKind::fc, "m", seed, {}));
    }
    std::vector<std::string> warnings;
    const auto eval = evaluate_responses(traces, qs, labels, judge, 2, CiOver::samples, &warnings);
    CHECK(eval.judged.size() == 3);
    CHECK_FALSE(warnings.empty());
    for (const auto* m : {"factuality", "relevance", "style"}) {
        const auto* c = eval.table.find("answer-model", "fc", m);
        REQUIRE(c);
        CHECK(*c->ci_halfwidth == 0.0);
    }
    CHECK(eval.table.find("answer-model", "fc", "factuality")->mean == 5.0);
    CHECK(eval.table.find("answer-model", "fc", "style")->mean == 3.0);
}

TEST_CASE("evaluate_responses over two seeds matches hand arithmetic") {
    auto mock = std::make_shared<provider::ScriptedChat>([](const provider::CompletionRequest& r) {
        const bool first = r.messages.back().content.find("seed zero") != std::string::npos;
        return provider::text_response(first ? R"({"factuality": 4, "relevance": 5, "style": 2})"
                                             : R"({"factuality": 2, "relevance": 5, "style": 3})");
    });
    Judge judge(testing::client_for(mock), {"j", 0, {}});
    const std::vector<StudentQuestion> qs{{"q1", "a?", std::nullopt, std::nullopt}};
    const std::vector<GroundTruth> labels{label("q1", {F::qa_retrieval}, "TA")};
    const std::vector<PipelineTrace> traces{trace("q1", PipelineKind::fc, "m", 0, {}, "seed zero answer"),
                                            trace("q1", PipelineKind::fc, "m", 1, {}, "seed one answer")};
    const auto pooled = evaluate_responses(traces, qs, labels, judge, 1, CiOver::samples);
    const auto* f = pooled.table.find("answer-model", "fc", "factuality");
    CHECK(f->mean == 3.0);
    CHECK(*f->ci_halfwidth == doctest::Approx(1.96 * std::sqrt(2.0) / std::sqrt(2.0)));
    const auto by_question = evaluate_responses(traces, qs, labels, judge, 1, CiOver::questions);
    CHECK(by_question.table.find("answer-model", "fc", "factuality")->mean == 3.0);
    CHECK_FALSE(by_question.table.find("answer-model", "fc", "factuality")->ci_halfwidth);
}

TEST_CASE("a judge that echoes TA labels aligns perfectly") {
    const std::vector<FewShot> labelled{{"q1", "a1", "ta-one", {5, 4, 3}}, {"q2", "a2", "ta-two", {2, 1, 1}},
                                        {"q3", "a3", "ta-three", {3, 3, 2}}};
    auto mock = std::make_shared<provider::ScriptedChat>([&](const provider::CompletionRequest& r) {
        const auto& item = r.messages.back().content;
        for (const auto& l : labelled) {
            if (item.find(l.ta_answer) != std::string::npos) return provider::text_response(to_json(l.scores).dump());
        }
        return provider::text_response("?");
    });
    Judge judge(testing::client_for(mock), {"echo", 0, {}});
    std::map<std::string, AlignmentReport> reports;
    const auto table = evaluate_judge_alignment({{"echo", &judge}}, labelled, 2, &reports);
    for (const auto* m : {"factuality", "relevance", "style"}) {
        CHECK(table.find("echo", "alignment", std::string(m) + "_em")->mean == 1.0);
        CHECK(table.find("echo", "alignment", std::string(m) + "_mae")->mean == 0.0);
    }
    CHECK(reports.at("echo").n == 3);
}
