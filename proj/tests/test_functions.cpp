#include <doctest.h>

#include "fake_backends.hpp"
#include "forumqa/error.hpp"

using namespace forumqa;
using provider::ToolCall;

TEST_CASE("four function schemas with the course tool names") {
    const auto& schemas = function_schemas();
    REQUIRE(schemas.size() == 4);
    CHECK(schemas[0].name == "qa_retrieval");
    CHECK(schemas[1].name == "textbook_retrieval");
    CHECK(schemas[2].name == "assignment_retrieval");
    CHECK(schemas[3].name == "logistics_retrieval");

    REQUIRE(schemas[0].parameters.size() == 2);
    CHECK(schemas[0].parameters[0].name == "query");
    CHECK(schemas[0].parameters[0].required);
    CHECK(schemas[0].parameters[1].name == "top_k");
    CHECK(schemas[0].parameters[1].type == provider::ParamType::integer);
    CHECK_FALSE(schemas[0].parameters[1].required);
    for (std::size_t i = 1; i < 4; ++i) {
        REQUIRE(schemas[i].parameters.size() == 1);
        CHECK(schemas[i].parameters[0].name == "query");
    }
    for (auto name : kAllFunctions) {
        const auto kind = std::string(to_string(source_of(name)));
        CHECK(schema_for(name).description.find(kind) != std::string::npos);
    }
}

TEST_CASE("schemas serialize in the tool-definition shape") {
    const auto tool = provider::to_openai_tool(function_schemas()[0]);
    CHECK(tool["type"] == "function");
    CHECK(tool["function"]["name"] == "qa_retrieval");
    CHECK(tool["function"]["parameters"]["required"] == nlohmann::json::array({"query"}));
    CHECK(tool["function"]["parameters"]["properties"]["top_k"]["type"] == "integer");
}

TEST_CASE("qa_retrieval returns top_k pairs from an embedded qa index") {
    std::vector<Document> docs;
    for (int i = 0; i < 5; ++i) {
        docs.push_back(testing::qa_doc("qa" + std::to_string(i), "question about topic " + std::to_string(i) +
                                                                     (i < 2 ? " gradient descent" : " grading"),
                                       "answer " + std::to_string(i)));
    }
    auto corpus = std::make_shared<const Corpus>(docs);
    auto embedder = std::make_shared<provider::EmbeddingClient>(std::make_shared<provider::HashingEmbedder>(64), "e");
    auto index = std::make_shared<const retrieval::VectorIndex>(
        retrieval::vector_chunks(*corpus, SourceKind::qa, 1000, 0), embedder, retrieval::VectorOptions{});
    Toolbox box(corpus, {{SourceKind::qa, std::make_shared<retrieval::VectorRetriever>(index)}});

    const auto record = box.dispatch({"c1", "qa_retrieval", {{"query", "gradient descent"}, {"top_k", 2}}}, 1);
    REQUIRE(record.results.size() == 2);
    REQUIRE(record.qa_pairs.size() == 2);
    CHECK(record.qa_pairs[0].answer.rfind("answer ", 0) == 0);
    CHECK(record.arguments["top_k"] == 2);
    CHECK(record.round == 1);

    CHECK(box.dispatch({"c2", "qa_retrieval", {{"query", "grading"}}}, 1).results.size() == kDefaultQaTopK);

    const auto clamped = box.dispatch({"c3", "qa_retrieval", {{"query", "grading"}, {"top_k", -4}}}, 2);
    CHECK(clamped.results.size() == 1);
    CHECK(clamped.warnings.size() == 1);
    CHECK_THROWS_AS(box.dispatch({"c4", "qa_retrieval", {{"query", "x"}, {"top_k", "two"}}}, 1), ValidationError);

    const auto rendered = nlohmann::json::parse(box.render(record));
    CHECK(rendered["function"] == "qa_retrieval");
    CHECK(rendered["results"].size() == 2);
    CHECK(rendered["results"][0].contains("answer"));
}

TEST_CASE("functions only return documents of their own kind") {
    auto corpus = testing::small_course();
    auto box = testing::keyword_toolbox(corpus, true);
    const auto record = box->dispatch({"c1", "logistics_retrieval", {{"query", "late policy"}}}, 1);
    CHECK_FALSE(record.results.empty());
    for (const auto& r : record.results) CHECK(corpus->at(r.chunk.doc_id).kind == SourceKind::logistics);
    CHECK_FALSE(record.warnings.empty());
}

TEST_CASE("dispatch rejects unknown names and missing queries") {
    auto box = testing::keyword_toolbox(testing::small_course());
    CHECK_THROWS_AS(box->dispatch({"c", "exam_retrieval", {{"query", "x"}}}, 1), ValidationError);
    CHECK_THROWS_AS(box->dispatch({"c", "textbook_retrieval", nlohmann::json::object()}, 1), ValidationError);
    CHECK_THROWS_AS(box->dispatch({"c", "textbook_retrieval", {{"query", ""}}}, 1), ValidationError);
    CHECK_FALSE(try_parse_function_name("exam_retrieval").has_value());
    CHECK_THROWS_AS(parse_function_name("exam_retrieval"), ValidationError);

    Toolbox partial(testing::small_course(), {});
    CHECK_THROWS_AS(partial.dispatch({"c", "textbook_retrieval", {{"query", "x"}}}, 1), ValidationError);
}

TEST_CASE("non-qa functions return the configured result count and ignore top_k") {
    auto corpus = testing::small_course();
    std::map<SourceKind, std::shared_ptr<const retrieval::Retriever>> backends{
        {SourceKind::textbook, std::make_shared<testing::KeywordRetriever>(corpus, SourceKind::textbook)}};
    Toolbox one(corpus, backends, ToolboxOptions{1});
    const auto record = one.dispatch({"c", "textbook_retrieval", {{"query", "gradient"}, {"top_k", 2}}}, 1);
    CHECK(record.results.size() == 1);
    CHECK(record.results[0].chunk.doc_id == "tb1");
    CHECK(record.warnings.size() == 1);
    CHECK_THROWS_AS(Toolbox(corpus, backends, ToolboxOptions{0}), ValidationError);
}

TEST_CASE("call records round trip through json") {
    auto box = testing::keyword_toolbox(testing::small_course());
    const auto record = box->dispatch({"c9", "qa_retrieval", {{"query", "late policy"}, {"top_k", 1}}}, 3);
    CHECK(call_record_from_json(to_json(record)) == record);
}
