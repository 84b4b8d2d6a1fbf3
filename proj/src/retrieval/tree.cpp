#include "forumqa/retrieval/tree.hpp"

#include <cstdio>

#include "forumqa/error.hpp"
#include "forumqa/parallel.hpp"
#include "forumqa/prompts.hpp"

namespace forumqa::retrieval {

using nlohmann::json;

json to_json(const SummaryNode& n) {
    json j{{"id", n.id}, {"summary", n.summary}, {"children", n.children}};
    j["leaf_chunk"] = n.leaf_chunk ? json(*n.leaf_chunk) : json(nullptr);
    return j;
}

SummaryNode node_from_json(const json& j) {
    SummaryNode n;
    n.id = j.at("id").get<std::string>();
    n.summary = j.at("summary").get<std::string>();
    n.children = j.at("children").get<std::vector<std::string>>();
    if (auto it = j.find("leaf_chunk"); it != j.end() && it->is_string()) n.leaf_chunk = *it;
    if (n.is_leaf() == !n.leaf_chunk) throw ValidationError("node \"" + n.id + "\" must be a leaf xor have children");
    return n;
}

const SummaryNode& SummaryTree::node(const std::string& id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw ValidationError("unknown tree node \"" + id + "\"");
    return it->second;
}

std::size_t SummaryTree::depth() const {
    std::size_t d = 0;
    const auto* n = &node(root);
    while (!n->is_leaf()) {
        n = &node(n->children.front());
        ++d;
    }
    return d;
}

std::vector<std::string> SummaryTree::leaves() const {
    std::vector<std::string> out;
    std::vector<std::string> stack{root};
    while (!stack.empty()) {
        auto id = std::move(stack.back());
        stack.pop_back();
        const auto& n = node(id);
        if (n.is_leaf()) {
            out.push_back(id);
        } else {
            for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
        }
    }
    return out;
}

std::string node_id(const std::string& doc_id, std::size_t level, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "/L%zu-%05zu", level, index);
    return doc_id + buf;
}

std::vector<std::size_t> level_sizes(std::size_t leaves, int k) {
    if (k < 2) throw ValidationError("branching factor must be >= 2");
    if (leaves == 0) throw ValidationError("tree needs at least one leaf");
    std::vector<std::size_t> sizes{leaves};
    while (sizes.back() > 1) {
        const auto n = sizes.back();
        sizes.push_back((n + static_cast<std::size_t>(k) - 1) / static_cast<std::size_t>(k));
    }
    return sizes;
}

Summarizer llm_summarizer(const ModelRef& model) {
    return [model](const SummaryInput& input) {
        std::string body = std::string(prompts::kTitleLabel) + " " + input.title + "\n\n";
        for (std::size_t i = 0; i < input.parts.size(); ++i) {
            if (i > 0) body += "\n\n";
            body += input.parts[i];
        }
        auto response = model.chat->chat_complete(
            model.model,
            {provider::ChatMessage::system(std::string(prompts::kSummarize)), provider::ChatMessage::user(body)}, {},
            provider::ToolChoice::none(), false, model.seed);
        auto text = provider::text_of(response);
        if (text.empty()) throw ProviderError("summarizer returned empty text");
        return text;
    };
}

SummaryTree build_tree(const std::vector<Chunk>& chunks, const std::string& title, SourceKind kind,
                       const Summarizer& summarize, const TreeOptions& options) {
    if (chunks.empty()) throw ValidationError("build_tree needs at least one chunk");
    const int k = options.branching;
    const auto sizes = level_sizes(chunks.size(), k);
    const auto& doc_id = chunks.front().doc_id;

    SummaryTree tree;
    tree.branching = k;
    tree.kind = kind;
    tree.doc_id = doc_id;

    std::vector<std::string> level_ids(chunks.size());
    std::vector<std::string> level_summaries(chunks.size());
    parallel_for(chunks.size(), options.jobs, [&](std::size_t i) {
        level_summaries[i] = summarize(SummaryInput{title, {chunks[i].text}, true});
    });
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        level_ids[i] = node_id(doc_id, 0, i);
        tree.nodes.emplace(level_ids[i], SummaryNode{level_ids[i], level_summaries[i], {}, chunks[i].id});
    }

    for (std::size_t level = 1; level < sizes.size(); ++level) {
        const auto groups = sizes[level];
        std::vector<std::string> ids(groups);
        std::vector<std::string> summaries(groups);
        parallel_for(groups, options.jobs, [&](std::size_t g) {
            const auto begin = g * static_cast<std::size_t>(k);
            const auto end = std::min(begin + static_cast<std::size_t>(k), level_ids.size());
            SummaryInput input{title, {}, false};
            for (auto i = begin; i < end; ++i) input.parts.push_back(level_summaries[i]);
            summaries[g] = summarize(input);
        });
        for (std::size_t g = 0; g < groups; ++g) {
            const auto begin = g * static_cast<std::size_t>(k);
            const auto end = std::min(begin + static_cast<std::size_t>(k), level_ids.size());
            ids[g] = node_id(doc_id, level, g);
            SummaryNode node{ids[g], summaries[g], {}, std::nullopt};
            node.children.assign(level_ids.begin() + static_cast<std::ptrdiff_t>(begin),
                                 level_ids.begin() + static_cast<std::ptrdiff_t>(end));
            tree.nodes.emplace(ids[g], std::move(node));
        }
        level_ids = std::move(ids);
        level_summaries = std::move(summaries);
    }
    tree.root = level_ids.front();
    return tree;
}

} // namespace forumqa::retrieval
