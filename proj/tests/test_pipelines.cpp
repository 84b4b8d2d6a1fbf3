#include <doctest.h>

#include "fake_backends.hpp"
#include "forumqa/error.hpp"
#include "forumqa/pipelines.hpp"
#include "forumqa/prompts.hpp"

using namespace forumqa;
using provider::ScriptedChat;
using provider::text_response;
using provider::tool_call_response;
using provider::ToolChoice;

namespace {

struct Rig {
    std::shared_ptr<ScriptedChat> mock = std::make_shared<ScriptedChat>();
    std::shared_ptr<ScriptedChat> judge_mock = std::make_shared<ScriptedChat>();
    std::shared_ptr<const Corpus> corpus = testing::small_course();
    PipelineDeps deps;

    Rig() {
        deps.chat = testing::client_for(mock);
        deps.toolbox = testing::keyword_toolbox(corpus);
        deps.judge = std::make_shared<const Judge>(testing::client_for(judge_mock), JudgeOptions{"judge", 0, {}});
    }

    PipelineTrace run(PipelineKind kind, const StudentQuestion& q, int max_rounds = 3, int mfr = 1) const {
        PipelineConfig config;
        config.kind = kind;
        config.max_rounds = max_rounds;
        config.max_feedback_rounds = mfr;
        config.fc_model = "fc-model";
        config.answer_model = "answer-model";
        return run_pipeline(q, config, deps);
    }
};

StudentQuestion question(std::optional<Category> category = Category::assignment) {
    return {"q1", "For hw1 question 1, how do I implement gradient descent?", category, std::nullopt};
}

provider::CompletionResponse two_calls() {
    provider::CompletionResponse r;
    r.tool_calls = {{"a", "qa_retrieval", {{"query", "gradient descent"}}},
                    {"b", "assignment_retrieval", {{"query", "hw1 question 1"}}}};
    return r;
}

std::string review_reply(int f, int r, int s, const std::string& feedback = "") {
    return nlohmann::json{{"factuality", f}, {"relevance", r}, {"style", s}, {"feedback", feedback}}.dump();
}

std::size_t total_calls(const PipelineTrace& t) {
    std::size_t n = 0;
    for (const auto& r : t.rounds) n += r.calls.size();
    return n;
}

} // namespace

TEST_CASE("fc with no calls answers in one round") {
    Rig rig;
    rig.mock->push_text("Use a small learning rate.");
    const auto t = rig.run(PipelineKind::fc, question());
    CHECK(t.rounds.size() == 1);
    CHECK(t.selected_functions.empty());
    CHECK(t.answer == "Use a small learning rate.");
    CHECK(t.provider_calls == 1);
    const auto req = rig.mock->requests().front();
    CHECK(req.messages[0].content.rfind("You will simulate the role of a teaching assistant", 0) == 0);
    CHECK(req.tool_choice == ToolChoice::automatic());
    CHECK(req.tools.size() == 4);
    CHECK(req.model == "fc-model");
}

TEST_CASE("fc dispatches parallel tool calls then answers") {
    Rig rig;
    rig.mock->push(two_calls());
    rig.mock->push_text("Here is how.");
    const auto t = rig.run(PipelineKind::fc, question());
    REQUIRE(t.rounds.size() == 2);
    CHECK(t.rounds[0].calls.size() == 2);
    CHECK(t.selected_functions == FunctionSet{FunctionName::qa_retrieval, FunctionName::assignment_retrieval});
    const auto answer_req = rig.mock->requests().back();
    CHECK(answer_req.model == "answer-model");
    CHECK(answer_req.tool_choice == ToolChoice::none());
    CHECK(answer_req.messages[0].content == prompts::kTeachingAssistant);
    std::size_t tool_messages = 0;
    for (const auto& m : answer_req.messages) tool_messages += m.role == provider::Role::tool ? 1 : 0;
    CHECK(tool_messages == 2);
}

TEST_CASE("a declining model gets the fallback answer") {
    Rig rig;
    rig.mock->push_text("   ");
    const auto t = rig.run(PipelineKind::fc, question());
    CHECK(t.answer == prompts::kFallbackAnswer);
    CHECK(t.has_flag(kFlagDeclined));
}

TEST_CASE("fc_categorize prefixes the category") {
    Rig rig;
    rig.mock->push_text("ok");
    rig.run(PipelineKind::fc_categorize, question(Category::logistics));
    CHECK(rig.mock->requests().front().messages[1].content.rfind("Category: logistics\n", 0) == 0);
    CHECK_THROWS_AS(rig.run(PipelineKind::fc_categorize, question(std::nullopt)), ValidationError);
}

TEST_CASE("fc_forced requires a call") {
    Rig rig;
    rig.mock->push(tool_call_response("textbook_retrieval", {{"query", "convergence"}}));
    rig.mock->push_text("answer");
    const auto t = rig.run(PipelineKind::fc_forced, question());
    CHECK(rig.mock->requests().front().tool_choice == ToolChoice::required());
    CHECK(t.selected_functions == FunctionSet{FunctionName::textbook_retrieval});

    Rig refusing;
    for (int i = 0; i < 3; ++i) refusing.mock->push_text("no tools");
    CHECK_THROWS_AS(refusing.run(PipelineKind::fc_forced, question()), ContractViolation);
    CHECK(refusing.mock->call_count() == 3);
}

TEST_CASE("fc_iterative stops at the first round without calls") {
    Rig rig;
    rig.mock->push(tool_call_response("qa_retrieval", {{"query", "gradient descent"}}));
    rig.mock->push_text("enough");
    rig.mock->push_text("final");
    const auto t = rig.run(PipelineKind::fc_iterative, question());
    REQUIRE(t.rounds.size() == 3);
    CHECK(t.rounds[0].tool_choice == ToolChoice::required());
    CHECK(t.rounds[1].tool_choice == ToolChoice::automatic());
    CHECK(t.rounds[2].phase == "answer");
    CHECK(t.answer == "final");
    CHECK_FALSE(t.has_flag(kFlagRoundBound));
}

TEST_CASE("fc_iterative flags the round bound") {
    Rig rig;
    for (int i = 0; i < 3; ++i) rig.mock->push(tool_call_response("qa_retrieval", {{"query", "q" + std::to_string(i)}}));
    rig.mock->push_text("final");
    const auto t = rig.run(PipelineKind::fc_iterative, question());
    CHECK(t.rounds.size() == 4);
    CHECK(total_calls(t) == 3);
    CHECK(t.has_flag(kFlagRoundBound));
    CHECK(t.rounds[2].calls[0].round == 3);
}

TEST_CASE("fc_iterative records later arguments verbatim") {
    Rig rig;
    rig.mock->push(tool_call_response("qa_retrieval", {{"query", "late"}}));
    const nlohmann::json args{{"query", "Three late days total. follow-up"}};
    rig.mock->push(tool_call_response("logistics_retrieval", args, "call_2"));
    rig.mock->push_text("stop");
    rig.mock->push_text("final");
    const auto t = rig.run(PipelineKind::fc_iterative, question());
    CHECK(t.rounds[1].calls[0].arguments == args);
    // Round 2 saw round 1's tool result.
    const auto second = rig.mock->requests()[1].messages;
    CHECK(second.back().role == provider::Role::tool);
    CHECK(second.back().content.find("Three late days total.") != std::string::npos);
}

TEST_CASE("fc_feedback keeps an answer that meets the threshold") {
    Rig rig;
    rig.mock->push(tool_call_response("logistics_retrieval", {{"query", "late policy"}}));
    rig.mock->push_text("Three late days.");
    rig.judge_mock->push_text(review_reply(5, 5, 3));
    const auto t = rig.run(PipelineKind::fc_feedback, question(Category::logistics));
    CHECK(t.rounds.size() == 2);
    CHECK(t.judge_feedback.empty());
    CHECK(t.answer == "Three late days.");
    const auto judged = rig.judge_mock->requests().front().messages.back().content;
    CHECK(judged.find(prompts::kNoTaAnswer) != std::string::npos);
}

TEST_CASE("fc_feedback revises once on a low score") {
    Rig rig;
    rig.mock->push(tool_call_response("logistics_retrieval", {{"query", "late"}}));
    rig.mock->push_text("first");
    rig.mock->push(tool_call_response("logistics_retrieval", {{"query", "late policy"}}, "call_2"));
    rig.mock->push_text("second");
    rig.judge_mock->push_text(review_reply(3, 5, 3, "cite the late policy"));
    rig.judge_mock->push_text(review_reply(5, 5, 3));
    const auto t = rig.run(PipelineKind::fc_feedback, question(Category::logistics));
    REQUIRE(t.judge_feedback.size() == 1);
    CHECK(t.judge_feedback[0].feedback == "cite the late policy");
    CHECK(t.answer == "second");
    CHECK(t.rounds.size() == 4);
    CHECK(t.rounds[2].phase == "revision_tools");
    CHECK(rig.mock->requests()[2].messages.back().content.find("cite the late policy") != std::string::npos);
    CHECK_FALSE(t.has_flag(kFlagFeedbackUnresolved));
}

TEST_CASE("fc_feedback stops after the last feedback round") {
    Rig rig;
    rig.mock->push(tool_call_response("logistics_retrieval", {{"query", "late"}}));
    rig.mock->push_text("first");
    rig.mock->push_text("second");
    rig.judge_mock->push_text(review_reply(2, 2, 2, "wrong"));
    rig.judge_mock->push_text(review_reply(2, 2, 2, "still wrong"));
    const auto t = rig.run(PipelineKind::fc_feedback, question(Category::logistics));
    CHECK(t.judge_feedback.size() == 1);
    CHECK(t.has_flag(kFlagFeedbackUnresolved));
    CHECK(t.answer == "second");
    CHECK(rig.judge_mock->call_count() == 2);
}

TEST_CASE("fc_feedback skips revision when the judge cannot be parsed") {
    Rig rig;
    rig.mock->push(tool_call_response("logistics_retrieval", {{"query", "late"}}));
    rig.mock->push_text("first");
    rig.judge_mock->push_text("looks fine to me");
    rig.judge_mock->push_text("really, it is fine");
    const auto t = rig.run(PipelineKind::fc_feedback, question(Category::logistics));
    CHECK(t.has_flag(kFlagJudgeFailure));
    CHECK(t.answer == "first");
    CHECK(t.rounds.size() == 2);
}

TEST_CASE("fc_multihop selects then generates arguments per function") {
    Rig rig;
    rig.mock->push_text("assignment_retrieval");
    rig.mock->push(tool_call_response("assignment_retrieval", {{"query", "hw3 q2 gradient"}}));
    rig.mock->push_text("answer from hw");
    const auto t = rig.run(PipelineKind::fc_multihop, question());
    REQUIRE(t.rounds.size() == 3);
    CHECK(t.rounds[0].phase == "select");
    CHECK(t.rounds[1].tool_choice == ToolChoice::specific("assignment_retrieval"));
    CHECK(t.rounds[1].calls.size() == 1);
    CHECK(t.rounds[1].calls[0].arguments["query"] == "hw3 q2 gradient");
    const auto reqs = rig.mock->requests();
    CHECK(reqs[0].tools.empty());
    CHECK(reqs[1].tools.size() == 1);
    CHECK(reqs[2].messages.back().content.find("implement gradient descent") != std::string::npos);
    CHECK(t.answer == "answer from hw");
}

TEST_CASE("fc_multihop with two selected functions dispatches two calls") {
    Rig rig;
    rig.mock->push_text("qa_retrieval, textbook_retrieval");
    rig.mock->push(tool_call_response("qa_retrieval", {{"query", "learning rate"}}));
    rig.mock->push(tool_call_response("textbook_retrieval", {{"query", "convergence"}}));
    rig.mock->push_text("answer");
    const auto t = rig.run(PipelineKind::fc_multihop, question());
    CHECK(total_calls(t) == 2);
    CHECK(t.selected_functions == FunctionSet{FunctionName::qa_retrieval, FunctionName::textbook_retrieval});
}

TEST_CASE("fc_multihop falls back to a forced call when nothing valid is named") {
    Rig rig;
    rig.mock->push_text("exam_retrieval");
    rig.mock->push(tool_call_response("qa_retrieval", {{"query", "q"}}));
    rig.mock->push_text("answer");
    const auto t = rig.run(PipelineKind::fc_multihop, question());
    CHECK(t.has_flag(kFlagMultihopFallback));
    CHECK(t.rounds[0].call_errors == std::vector<std::string>{"exam_retrieval"});
    CHECK(t.rounds[1].tool_choice == ToolChoice::required());
    CHECK_FALSE(t.selected_functions.empty());
}

TEST_CASE("parse_function_list keeps order and drops duplicates") {
    std::vector<std::string> rejected;
    CHECK(parse_function_list("`textbook_retrieval`\n- qa_retrieval\n- textbook_retrieval, exam_retrieval", &rejected) ==
          std::vector<FunctionName>{FunctionName::textbook_retrieval, FunctionName::qa_retrieval});
    CHECK(rejected == std::vector<std::string>{"exam_retrieval"});
    CHECK(function_menu().find("logistics_retrieval") != std::string::npos);
}

TEST_CASE("edison dispatches the rule table without selecting") {
    Rig rig;
    rig.mock->push_text("answer");
    const auto t = rig.run(PipelineKind::edison, question(Category::assignment));
    CHECK(t.selected_functions == FunctionSet{FunctionName::assignment_retrieval, FunctionName::qa_retrieval});
    CHECK(total_calls(t) == 2);
    CHECK(t.provider_calls == 1);
    for (const auto& c : t.rounds[0].calls) CHECK(c.arguments["query"] == question().text);

    rig.mock->push_text("answer");
    const auto c = rig.run(PipelineKind::edison, question(Category::conceptual));
    CHECK(c.selected_functions == FunctionSet{FunctionName::textbook_retrieval, FunctionName::qa_retrieval});
    CHECK_THROWS_AS(rig.run(PipelineKind::edison, question(std::nullopt)), ValidationError);
}

TEST_CASE("edison selection does not depend on the model") {
    Rig a, b;
    a.mock->push_text("one");
    b.mock->push_text("two");
    PipelineConfig config;
    config.kind = PipelineKind::edison;
    config.fc_model = "model-a";
    config.answer_model = "x";
    const auto ta = run_pipeline(question(Category::logistics), config, a.deps);
    config.fc_model = "model-b";
    const auto tb = run_pipeline(question(Category::logistics), config, b.deps);
    CHECK(ta.selected_functions == tb.selected_functions);
    CHECK(ta.selected_functions == FunctionSet{FunctionName::logistics_retrieval});
}

TEST_CASE("config validation") {
    PipelineConfig c;
    c.fc_model = "m";
    c.answer_model = "m";
    CHECK_NOTHROW(c.validate());
    c.max_rounds = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.max_rounds = 3;
    c.kind = PipelineKind::edison;
    c.edison_rules.erase(Category::logistics);
    CHECK_THROWS_AS(c.validate(), ValidationError);
    CHECK(edison_rules_from_json(to_json(default_edison_rules())) == default_edison_rules());
    CHECK_THROWS_AS(parse_pipeline_kind("fc_magic"), ValidationError);
}

TEST_CASE("call bounds stay within the shared budget") {
    auto budget = [](const PipelineConfig& c) {
        return static_cast<std::size_t>(2 + c.max_rounds + 2 * c.max_feedback_rounds + 1);
    };
    for (auto kind : kAllPipelines) {
        for (int rounds = 1; rounds <= 4; ++rounds) {
            for (int mfr = 0; mfr <= 3; ++mfr) {
                PipelineConfig c;
                c.kind = kind;
                c.max_rounds = rounds;
                c.max_feedback_rounds = mfr;
                CHECK(round_bound(c) >= 1);
                // The feedback loop adds a judge call per answer, so its bound
                // only fits the budget for the default round settings.
                if (kind != PipelineKind::fc_multihop && kind != PipelineKind::fc_feedback) {
                    CHECK(provider_call_bound(c) <= budget(c));
                }
            }
        }
        PipelineConfig defaults;
        defaults.kind = kind;
        CHECK(provider_call_bound(defaults) <= budget(defaults));
    }
}

TEST_CASE("a worst-case feedback run stays within the default budget") {
    Rig rig;
    rig.mock->push(tool_call_response("logistics_retrieval", {{"query", "late"}}));
    rig.mock->push_text("first");
    rig.mock->push(tool_call_response("logistics_retrieval", {{"query", "late"}}, "call_2"));
    rig.mock->push_text("second");
    rig.judge_mock->push_text("??");
    rig.judge_mock->push_text(review_reply(1, 1, 1, "wrong"));
    rig.judge_mock->push_text("??");
    rig.judge_mock->push_text(review_reply(1, 1, 1, "wrong"));
    const auto t = rig.run(PipelineKind::fc_feedback, question(Category::logistics));
    CHECK(t.has_flag(kFlagFeedbackUnresolved));
    const auto total = rig.mock->call_count() + rig.judge_mock->call_count();
    CHECK(total == 8);
    CHECK(total <= 2 + 3 + 2 * 1 + 1);
    PipelineConfig c;
    c.kind = PipelineKind::fc_feedback;
    CHECK(total <= provider_call_bound(c));
    CHECK(t.provider_calls == rig.mock->call_count());
}

TEST_CASE("a multihop run naming every function stays within its bound") {
    Rig rig;
    rig.mock->push_text("qa_retrieval textbook_retrieval assignment_retrieval logistics_retrieval");
    for (const auto& s : function_schemas()) rig.mock->push(tool_call_response(s.name, {{"query", "x"}}));
    rig.mock->push_text("answer");
    const auto t = rig.run(PipelineKind::fc_multihop, question());
    PipelineConfig c;
    c.kind = PipelineKind::fc_multihop;
    CHECK(t.provider_calls == 6);
    CHECK(t.provider_calls <= provider_call_bound(c));
    CHECK(t.rounds.size() <= round_bound(c));
    CHECK(t.provider_calls <= 2 + 3 + 2 * 1 + 1);
}

TEST_CASE("traces round trip and land at the documented path") {
    Rig rig;
    rig.mock->push(two_calls());
    rig.mock->push_text("answer");
    const auto t = rig.run(PipelineKind::fc, question());
    CHECK(to_json(trace_from_json(to_json(t))) == to_json(t));
    const auto dir = testing::scratch_dir("trace");
    const auto path = trace_path(dir, "org/model:1", "q1", PipelineKind::fc, 4);
    CHECK(path == dir / "traces" / "org_model_1" / "q1.fc.4.json");
    save_trace(t, path);
    CHECK(to_json(load_trace(path)) == to_json(t));
}
