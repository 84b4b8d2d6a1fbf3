#include <doctest.h>

#include <fstream>

#include "forumqa/config.hpp"
#include "forumqa/error.hpp"
#include "forumqa/workspace.hpp"
#include "helpers.hpp"

using namespace forumqa;
using nlohmann::json;

TEST_CASE("an empty config gives the defaults") {
    const auto c = config_from_json(json::object(), "/base");
    CHECK(c.models.fc_model == "gpt-4.1");
    CHECK(c.models.retrieval_model == "gpt-4.1-mini");
    CHECK(c.retrieval.methods.at(SourceKind::textbook) == retrieval::Method::hier_gen);
    CHECK(c.retrieval.methods.at(SourceKind::qa) == retrieval::Method::vector);
    CHECK(c.retrieval.top_k == 3);
    CHECK(c.pipeline.max_rounds == 3);
    CHECK(c.pipeline.max_feedback_rounds == 1);
    CHECK(c.pipeline.edison_rules == default_edison_rules());
    CHECK(c.seeds == std::vector<std::int64_t>{0, 1, 2, 3, 4});
    CHECK(c.fc_models() == std::vector<std::string>{"gpt-4.1"});
    CHECK(c.provider.backend == provider::BackendKind::sim);
}

TEST_CASE("sections override defaults and paths resolve against the config directory") {
    const json j = {
        {"paths", {{"corpus", "data/corpus.jsonl"}, {"run_dir", "/abs/runs"}, {"fixtures", "fx"}}},
        {"models", {{"fc_model", "small"}, {"fc_models", {"a", "b"}}}},
        {"retrieval", {{"methods", {{"textbook", "vector_gen"}}}, {"top_k", 5}, {"chunk_chars", 400}}},
        {"pipeline", {{"max_rounds", 2}, {"feedback_threshold", {{"style", 2}}},
                      {"edison_rules", {{"assignment", {"assignment_retrieval"}},
                                        {"conceptual", {"textbook_retrieval"}},
                                        {"logistics", {"logistics_retrieval"}}}}}},
        {"bench", {{"seeds", {3, 9}}, {"ci_over", "samples"}}},
    };
    const auto c = config_from_json(j, "/base/dir");
    CHECK(c.paths.corpus == std::filesystem::path("/base/dir/data/corpus.jsonl"));
    CHECK(c.paths.run_dir == std::filesystem::path("/abs/runs"));
    CHECK(c.paths.fixtures == std::filesystem::path("/base/dir/fx"));
    CHECK(c.fc_models() == std::vector<std::string>{"a", "b"});
    CHECK(c.retrieval.methods.at(SourceKind::textbook) == retrieval::Method::vector_gen);
    CHECK(c.retrieval.methods.at(SourceKind::assignment) == retrieval::Method::hier_gen);
    CHECK(c.retrieval.top_k == 5);
    CHECK(c.retrieval.chunking.chunk_chars == 400);
    CHECK(c.pipeline.max_rounds == 2);
    CHECK(c.pipeline.feedback_threshold.style == 2);
    CHECK(c.pipeline.feedback_threshold.factuality == 5);
    CHECK(c.pipeline.edison_rules.at(Category::assignment) == FunctionSet{FunctionName::assignment_retrieval});
    CHECK(c.seeds == std::vector<std::int64_t>{3, 9});
    CHECK(c.ci_over == bench::CiOver::samples);

    const auto p = c.pipeline_for(PipelineKind::fc_forced, "b", 9);
    CHECK(p.kind == PipelineKind::fc_forced);
    CHECK(p.fc_model == "b");
    CHECK(p.answer_model == c.models.answer_model);
    CHECK(p.seed == 9);
    CHECK(p.max_rounds == 2);
}

TEST_CASE("bad configs are rejected with the offending key") {
    auto message = [](const json& j) {
        try {
            config_from_json(j);
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message({{"retrieval", {{"beem", 3}}}}).find("retrieval.beem") != std::string::npos);
    CHECK(message({{"colour", 1}}).find("colour") != std::string::npos);
    CHECK(message({{"retrieval", {{"top_k", 0}}}}) != "no error");
    CHECK(message({{"retrieval", {{"methods", {{"exams", "vector"}}}}}}) != "no error");
    CHECK(message({{"retrieval", {{"methods", {{"qa", "bm25"}}}}}}) != "no error");
    CHECK(message({{"pipeline", {{"max_rounds", 0}}}}) != "no error");
    CHECK(message({{"bench", {{"seeds", json::array()}}}}) != "no error");
    CHECK(message({{"bench", {{"seeds", {1, 1}}}}}) != "no error");
    CHECK(message({{"bench", {{"ci_over", "seeds"}}}}) != "no error");
    CHECK(message({{"provider", {{"backend", "carrier-pigeon"}}}}) != "no error");
    CHECK(message({{"retrieval", {{"top_k", "three"}}}}).find("config") != std::string::npos);
}

TEST_CASE("config files allow comments and round trip") {
    const auto dir = testing::scratch_dir("config");
    {
        std::ofstream out(dir / "c.json");
        out << "{\n  // quick run\n  \"paths\": {\"corpus\": \"corpus.jsonl\"},\n  \"bench\": {\"seeds\": [7]}\n}\n";
    }
    const auto c = load_config(dir / "c.json");
    CHECK(c.paths.corpus == dir / "corpus.jsonl");
    CHECK(c.seeds == std::vector<std::int64_t>{7});
    const auto again = config_from_json(to_json(c));
    CHECK(to_json(again) == to_json(c));
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ValidationError);
}

TEST_CASE("index directories are laid out per kind") {
    CHECK(hier_index_dir("idx", SourceKind::textbook) == std::filesystem::path("idx/textbook/hier"));
    CHECK(vector_index_dir("idx", SourceKind::qa) == std::filesystem::path("idx/qa/vector"));
}
