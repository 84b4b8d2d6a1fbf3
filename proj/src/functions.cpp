#include "forumqa/functions.hpp"

#include <spdlog/spdlog.h>

#include "forumqa/error.hpp"

namespace forumqa {

using nlohmann::json;
using provider::ParamType;
using provider::ToolParam;
using provider::ToolSchema;

const std::vector<ToolSchema>& function_schemas() {
    static const std::vector<ToolSchema> schemas = [] {
        const ToolParam query{"query", ParamType::string, "Search query describing the information needed.", true};
        return std::vector<ToolSchema>{
            {"qa_retrieval",
             "Retrieves similar question-and-answer pairs from past qa forum posts of this course.",
             {query,
              {"top_k", ParamType::integer, "Number of question-answer pairs to return (default 3).", false}}},
            {"textbook_retrieval", "Retrieves matching content from the course textbook.", {query}},
            {"assignment_retrieval",
             "Retrieves matching content from assignment documents, including any relevant solutions.",
             {query}},
            {"logistics_retrieval", "Retrieves matching content from course logistics documents.", {query}},
        };
    }();
    return schemas;
}

const ToolSchema& schema_for(FunctionName name) {
    for (const auto& s : function_schemas()) {
        if (s.name == to_string(name)) return s;
    }
    throw std::logic_error("no schema for function");
}

std::vector<ToolSchema> schemas_for(const FunctionSet& names) {
    std::vector<ToolSchema> out;
    for (auto n : kAllFunctions) {
        if (names.contains(n)) out.push_back(schema_for(n));
    }
    return out;
}

json to_json(const FunctionCallRecord& r) {
    json results = json::array();
    for (const auto& res : r.results) results.push_back(retrieval::to_json(res));
    json pairs = json::array();
    for (const auto& p : r.qa_pairs) pairs.push_back({{"question", p.question}, {"answer", p.answer}});
    return {{"name", to_string(r.name)}, {"call_id", r.call_id}, {"arguments", r.arguments},
            {"results", results},        {"qa_pairs", pairs},    {"round", r.round},
            {"warnings", r.warnings}};
}

FunctionCallRecord call_record_from_json(const json& j) {
    FunctionCallRecord r;
    r.name = parse_function_name(j.at("name").get<std::string>());
    r.call_id = j.at("call_id").get<std::string>();
    r.arguments = j.at("arguments");
    for (const auto& res : j.at("results")) r.results.push_back(retrieval::result_from_json(res));
    for (const auto& p : j.at("qa_pairs")) {
        r.qa_pairs.push_back({p.at("question").get<std::string>(), p.at("answer").get<std::string>()});
    }
    r.round = j.at("round").get<int>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

Toolbox::Toolbox(std::shared_ptr<const Corpus> corpus,
                 std::map<SourceKind, std::shared_ptr<const retrieval::Retriever>> backends, ToolboxOptions options)
    : corpus_(std::move(corpus)), backends_(std::move(backends)), options_(options) {
    if (!corpus_) throw ValidationError("toolbox needs a corpus");
    if (options_.results_per_call == 0) throw ValidationError("results_per_call must be >= 1");
}

namespace {

std::size_t read_top_k(const json& args, std::vector<std::string>& warnings) {
    if (!args.contains("top_k") || args["top_k"].is_null()) return kDefaultQaTopK;
    const auto& v = args["top_k"];
    long long k = 0;
    if (v.is_number_integer()) {
        k = v.get<long long>();
    } else if (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>()))) {
        k = static_cast<long long>(v.get<double>());
    } else {
        throw ValidationError("qa_retrieval top_k must be an integer, got " + v.dump());
    }
    if (k <= 0) {
        warnings.push_back("top_k " + std::to_string(k) + " clamped to 1");
        spdlog::warn("qa_retrieval: {}", warnings.back());
        return 1;
    }
    return static_cast<std::size_t>(k);
}

} // namespace

FunctionCallRecord Toolbox::dispatch(const provider::ToolCall& call, int round) const {
    const auto name = try_parse_function_name(call.name);
    if (!name) throw ValidationError("unknown function \"" + call.name + "\"");
    if (!call.arguments.is_object()) throw ValidationError(call.name + ": arguments must be an object");
    const auto q = call.arguments.find("query");
    if (q == call.arguments.end() || !q->is_string() || q->get<std::string>().empty()) {
        throw ValidationError(call.name + ": missing query");
    }

    FunctionCallRecord record;
    record.name = *name;
    record.call_id = call.id;
    record.arguments = call.arguments;
    record.round = round;

    std::size_t top_k = options_.results_per_call;
    if (*name == FunctionName::qa_retrieval) {
        top_k = read_top_k(call.arguments, record.warnings);
    } else if (call.arguments.contains("top_k")) {
        record.warnings.push_back("top_k is not a parameter of " + call.name + "; ignored");
    }

    const auto kind = source_of(*name);
    const auto backend = backends_.find(kind);
    if (backend == backends_.end() || !backend->second) {
        throw ValidationError("no retrieval backend configured for " + std::string(to_string(kind)));
    }
    auto outcome = backend->second->retrieve(q->get<std::string>(), top_k);
    record.warnings.insert(record.warnings.end(), outcome.warnings.begin(), outcome.warnings.end());
    for (auto& r : outcome.results) {
        const auto* doc = corpus_->find(r.chunk.doc_id);
        if (doc == nullptr || doc->kind != kind) {
            record.warnings.push_back("result from \"" + r.chunk.doc_id + "\" is not a " +
                                      std::string(to_string(kind)) + " document; discarded");
            continue;
        }
        if (kind == SourceKind::qa) record.qa_pairs.push_back(doc->qa.value_or(QAPair{doc->title, doc->body}));
        record.results.push_back(std::move(r));
    }
    return record;
}

std::string Toolbox::render(const FunctionCallRecord& record) const {
    json items = json::array();
    if (record.name == FunctionName::qa_retrieval) {
        for (std::size_t i = 0; i < record.qa_pairs.size(); ++i) {
            items.push_back({{"source", record.results[i].chunk.doc_id},
                             {"question", record.qa_pairs[i].question},
                             {"answer", record.qa_pairs[i].answer}});
        }
    } else {
        for (const auto& r : record.results) {
            json item{{"source", r.chunk.doc_id}};
            if (const auto* doc = corpus_->find(r.chunk.doc_id)) item["title"] = doc->title;
            if (r.chunk.header) item["section"] = *r.chunk.header;
            item["content"] = r.chunk.text;
            items.push_back(std::move(item));
        }
    }
    return json{{"function", to_string(record.name)}, {"results", items}}.dump();
}

} // namespace forumqa
