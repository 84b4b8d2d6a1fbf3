#include <doctest.h>

#include "forumqa/error.hpp"
#include "forumqa/judge.hpp"
#include "forumqa/prompts.hpp"
#include "helpers.hpp"

using namespace forumqa;
using provider::ScriptedChat;
using Status = JudgeParse::Status;

TEST_CASE("judge replies parse into judgments") {
    const auto ok = parse_judgment_reply(R"({"factuality": 5, "relevance": 4, "style": 3})");
    REQUIRE(ok.status == Status::ok);
    CHECK(*ok.judgment == Judgment{5, 4, 3});

    const auto fenced = parse_judgment_reply("```json\n{\"factuality\": 2, \"relevance\": 3, \"style\": 1}\n```");
    REQUIRE(fenced.status == Status::ok);
    CHECK(*fenced.judgment == Judgment{2, 3, 1});

    CHECK(parse_judgment_reply(R"({"factuality": 6, "relevance": 4, "style": 3})").status == Status::invalid);
    CHECK(parse_judgment_reply(R"({"factuality": 5, "relevance": 4, "style": 4})").status == Status::invalid);
    CHECK(parse_judgment_reply(R"({"factuality": 5, "relevance": 4})").status == Status::invalid);
    CHECK(parse_judgment_reply(R"({"factuality": 5, "relevance": 4, "style": 3, "tone": 2})").status ==
          Status::invalid);
    CHECK(parse_judgment_reply(R"({"factuality": 5, "relevance": 4, "style": 3, "style": 1})").status ==
          Status::invalid);
    CHECK(parse_judgment_reply(R"({"factuality": "5", "relevance": 4, "style": 3})").status == Status::invalid);
    CHECK(parse_judgment_reply(R"({"factuality": 4.5, "relevance": 4, "style": 3})").status == Status::invalid);
    CHECK(parse_judgment_reply("The answer deserves a 5.").status == Status::unparseable);
    CHECK(parse_judgment_reply(R"([5, 4, 3])").status != Status::ok);

    const auto fb = parse_judgment_reply(R"({"factuality": 3, "relevance": 5, "style": 3, "feedback": "cite it"})", true);
    REQUIRE(fb.status == Status::ok);
    CHECK(*fb.feedback == "cite it");
    CHECK(parse_judgment_reply(R"({"factuality": 3, "relevance": 5, "style": 3})", true).status == Status::invalid);
}

TEST_CASE("judge prompt carries the rubric, few shots and the triple") {
    const std::vector<FewShot> shots{{"q0", "a0", "t0", {4, 4, 2}}};
    const auto messages = judge_messages("Q?", "LLM says", "TA says", shots);
    REQUIRE(messages.size() == 4);
    CHECK(messages[0].content == prompts::kJudgeRubric);
    CHECK(messages[0].content.find("choose the higher one") != std::string::npos);
    CHECK(nlohmann::json::parse(messages[2].content) == to_json(Judgment{4, 4, 2}));
    CHECK(messages[3].content == judge_triple("Q?", "LLM says", "TA says"));
    CHECK(messages[3].content ==
          "Student question: Q?\n\nLLM-written answer: LLM says\n\nTA-written ground-truth answer: TA says");
}

TEST_CASE("judge asks again once when the reply is unparseable") {
    auto mock = std::make_shared<ScriptedChat>();
    mock->push_text("hmm, maybe a five");
    mock->push_text(R"({"factuality": 5, "relevance": 5, "style": 3})");
    Judge judge(testing::client_for(mock), {"j", 0, {}});
    CHECK(judge.evaluate("q", "a", "t") == Judgment{5, 5, 3});
    CHECK(mock->call_count() == 2);

    mock->push_text("no");
    mock->push_text("still no");
    CHECK_THROWS_AS(judge.evaluate("q", "a", "t"), ContractViolation);

    mock->push_text(R"({"factuality": 9, "relevance": 5, "style": 3})");
    const auto before = mock->call_count();
    CHECK_THROWS_AS(judge.evaluate("q", "a", "t"), ContractViolation);
    CHECK(mock->call_count() == before + 1);
}

TEST_CASE("alignment examples") {
    const std::vector<Judgment> judge{{5, 1, 1}, {4, 1, 1}, {3, 1, 1}};
    const std::vector<Judgment> ta{{5, 1, 1}, {5, 1, 1}, {3, 1, 1}};
    const auto r = align(judge, ta);
    CHECK(r.n == 3);
    CHECK(r.factuality.exact_match == doctest::Approx(2.0 / 3.0));
    CHECK(r.factuality.mae == doctest::Approx(1.0 / 3.0));
    CHECK(r.relevance == DimensionAlignment{1.0, 0.0});

    const auto same = align(ta, ta);
    for (const auto* d : {&same.factuality, &same.relevance, &same.style}) CHECK(*d == DimensionAlignment{1.0, 0.0});

    const auto extreme = align({{1, 1, 1}}, {{5, 5, 3}});
    CHECK(extreme.factuality == DimensionAlignment{0.0, 4.0});
    CHECK(extreme.style == DimensionAlignment{0.0, 2.0});

    CHECK(align(judge, ta) == align(ta, judge));
    CHECK_THROWS_AS(align(judge, {ta[0]}), ValidationError);
    CHECK_THROWS_AS(align({}, {}), ValidationError);
}

TEST_CASE("few-shot files round trip") {
    const std::vector<FewShot> shots{{"q1", "a1", "t1", {5, 4, 3}}, {"q2", "a, \"quoted\"", "t2", {1, 2, 1}}};
    CHECK(parse_few_shots(serialize_few_shots(shots)) == shots);
    CHECK_THROWS_AS(parse_few_shots(R"({"question": "q", "llm_answer": "a", "ta_answer": "t", "scores": {"factuality": 7, "relevance": 1, "style": 1}})"),
                    ValidationError);
}

TEST_CASE("judged records round trip") {
    const JudgedRecord r{"q3", "fc_forced", "gpt-x", 2, {4, 5, 2}};
    CHECK(judged_record_from_json(to_json(r)) == r);
}

TEST_CASE("synthetic judge set grades answers consistently") {
    const auto data = gen_synthetic_corpus(SyntheticSpec{{{SourceKind::qa, 3}, {SourceKind::textbook, 2}}, 8}, 7);
    const auto set = synthetic_judge_set(data.questions, data.labels, 12, 5);
    CHECK(set.size() == 12);
    CHECK(set == synthetic_judge_set(data.questions, data.labels, 12, 5));
    for (const auto& s : set) {
        CHECK_FALSE(s.ta_answer.empty());
        if (s.llm_answer == prompts::kFallbackAnswer) CHECK(s.scores == Judgment{2, 1, 1});
    }
}
