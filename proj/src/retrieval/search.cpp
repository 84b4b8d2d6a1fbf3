#include "forumqa/retrieval/search.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "forumqa/error.hpp"
#include "forumqa/prompts.hpp"

namespace forumqa::retrieval {

using nlohmann::json;

json to_json(const RetrievalResult& r) {
    return {{"chunk", to_json(r.chunk)}, {"score", r.score}, {"path", r.path}};
}

RetrievalResult result_from_json(const json& j) {
    return {chunk_from_json(j.at("chunk")), j.at("score").get<double>(), j.at("path").get<std::vector<std::string>>()};
}

bool ranks_before(const RetrievalResult& a, const RetrievalResult& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.chunk.doc_id != b.chunk.doc_id) return a.chunk.doc_id < b.chunk.doc_id;
    if (a.chunk.span.start != b.chunk.span.start) return a.chunk.span.start < b.chunk.span.start;
    return a.chunk.id < b.chunk.id;
}

void sort_results(std::vector<RetrievalResult>& results) { std::sort(results.begin(), results.end(), ranks_before); }

namespace {

struct BeamItem {
    std::string node;
    double score = 0.0;
    std::vector<std::string> path;
};

} // namespace

SearchOutcome beam_search(const KindIndex& index, std::span<const std::string> entry_nodes,
                          const std::string& question, const NodeScorer& scorer, std::size_t beam) {
    if (beam == 0) throw ValidationError("beam width must be >= 1");
    SearchOutcome out;
    auto score_node = [&](const SummaryNode& node) {
        try {
            return std::clamp(scorer(question, node.summary), 0.0, 1.0);
        } catch (const std::exception& e) {
            out.warnings.push_back("node " + node.id + " scored at floor: " + e.what());
            spdlog::warn("{}", out.warnings.back());
            return kScoreFloor;
        }
    };

    std::vector<BeamItem> frontier;
    for (const auto& id : entry_nodes) {
        const auto& node = index.node(id);
        frontier.push_back({id, node.is_leaf() ? score_node(node) : 0.0, {id}});
    }

    auto all_leaves = [&] {
        return std::all_of(frontier.begin(), frontier.end(),
                           [&](const BeamItem& item) { return index.node(item.node).is_leaf(); });
    };
    while (!all_leaves()) {
        std::vector<BeamItem> candidates;
        for (auto& item : frontier) {
            const auto& node = index.node(item.node);
            if (node.is_leaf()) {
                candidates.push_back(std::move(item));
                continue;
            }
            for (const auto& child_id : node.children) {
                auto path = item.path;
                path.push_back(child_id);
                candidates.push_back({child_id, score_node(index.node(child_id)), std::move(path)});
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const BeamItem& a, const BeamItem& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.node < b.node;
        });
        if (candidates.size() > beam) candidates.resize(beam);
        frontier = std::move(candidates);
    }

    for (auto& item : frontier) {
        const auto& node = index.node(item.node);
        out.results.push_back({index.chunk(*node.leaf_chunk), item.score, std::move(item.path)});
    }
    sort_results(out.results);
    return out;
}

// ---------------------------------------------------------------------------

std::vector<std::string> parse_toc_reply(std::string_view reply, std::span<const std::string> known_ids) {
    std::string text(reply);
    text.erase(0, text.find_first_not_of(" \t\r\n"));
    if (text.rfind("```", 0) == 0) {
        const auto nl = text.find('\n');
        text = nl == std::string::npos ? "" : text.substr(nl + 1);
        if (const auto close = text.rfind("```"); close != std::string::npos) text = text.substr(0, close);
    }
    try {
        auto j = json::parse(text);
        if (j.is_array()) {
            std::vector<std::string> out;
            for (const auto& v : j) {
                if (v.is_string()) out.push_back(v.get<std::string>());
            }
            return out;
        }
    } catch (const json::exception&) {
    }
    std::vector<std::pair<std::size_t, std::string>> hits;
    for (const auto& id : known_ids) {
        if (auto pos = text.find(id); pos != std::string::npos) hits.emplace_back(pos, id);
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::string> out;
    for (auto& [_, id] : hits) out.push_back(std::move(id));
    return out;
}

TocSelection toc_select(const KindIndex& index, const std::string& question, const ModelRef& model,
                        std::size_t max_select) {
    if (max_select == 0) throw ValidationError("max_select must be >= 1");
    const auto roots = index.roots();
    if (roots.empty()) throw ValidationError("cannot select from an empty index");
    TocSelection out;
    if (roots.size() == 1) {
        out.node_ids = roots;
        return out;
    }

    std::string toc;
    for (const auto& id : roots) toc += "[" + id + "] " + index.node(id).summary + "\n";
    const auto user = std::string(prompts::kQuestionLabel) + " " + question + "\n\nSelect at most " +
                      std::to_string(max_select) + " entries.\n\nTable of contents:\n" + toc;
    auto response = model.chat->chat_complete(
        model.model,
        {provider::ChatMessage::system(std::string(prompts::kTableOfContents)), provider::ChatMessage::user(user)}, {},
        provider::ToolChoice::none(), false, model.seed);
    out.used_model = true;

    const std::unordered_set<std::string> valid(roots.begin(), roots.end());
    std::set<std::string> taken;
    for (auto& id : parse_toc_reply(provider::text_of(response), roots)) {
        if (!valid.contains(id)) {
            out.warnings.push_back("table of contents selection \"" + id + "\" is not an entry; dropped");
            spdlog::warn("{}", out.warnings.back());
            continue;
        }
        if (!taken.insert(id).second) continue;
        if (out.node_ids.size() == max_select) {
            out.warnings.push_back("more than " + std::to_string(max_select) + " entries selected; truncated");
            break;
        }
        out.node_ids.push_back(std::move(id));
    }
    if (out.node_ids.empty()) throw ProviderError("table of contents selection returned no valid entries");
    return out;
}

} // namespace forumqa::retrieval
