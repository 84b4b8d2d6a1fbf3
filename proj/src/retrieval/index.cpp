#include "forumqa/retrieval/index.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "forumqa/error.hpp"

namespace forumqa::retrieval {

using nlohmann::json;

KindIndex::KindIndex(SourceKind kind, int branching, std::string provider_model, std::vector<Chunk> chunks,
                     std::vector<SummaryTree> trees)
    : kind_(kind),
      branching_(branching),
      provider_model_(std::move(provider_model)),
      chunks_(std::move(chunks)),
      trees_(std::move(trees)) {
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        if (!chunk_pos_.emplace(chunks_[i].id, i).second) {
            throw ValidationError("duplicate chunk id \"" + chunks_[i].id + "\"");
        }
    }
    std::set<std::string> leaf_chunks;
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        for (const auto& [id, node] : trees_[t].nodes) {
            if (!node_tree_.emplace(id, t).second) throw ValidationError("duplicate node id \"" + id + "\"");
            if (node.children.size() > static_cast<std::size_t>(trees_[t].branching)) {
                throw ValidationError("node \"" + id + "\" exceeds the branching factor");
            }
            if (node.leaf_chunk) {
                if (!chunk_pos_.contains(*node.leaf_chunk)) {
                    throw ValidationError("leaf \"" + id + "\" references unknown chunk");
                }
                if (!leaf_chunks.insert(*node.leaf_chunk).second) {
                    throw ValidationError("chunk \"" + *node.leaf_chunk + "\" appears in more than one leaf");
                }
            }
        }
    }
    if (leaf_chunks.size() != chunks_.size()) throw ValidationError("some chunks are not in any leaf");
}

const Chunk& KindIndex::chunk(const std::string& id) const {
    auto it = chunk_pos_.find(id);
    if (it == chunk_pos_.end()) throw ValidationError("unknown chunk \"" + id + "\"");
    return chunks_[it->second];
}

const SummaryTree& KindIndex::tree_of(const std::string& node_id) const {
    auto it = node_tree_.find(node_id);
    if (it == node_tree_.end()) throw ValidationError("unknown node \"" + node_id + "\"");
    return trees_[it->second];
}

const SummaryNode& KindIndex::node(const std::string& id) const { return tree_of(id).node(id); }

std::vector<std::string> KindIndex::roots() const {
    std::vector<std::string> out;
    out.reserve(trees_.size());
    for (const auto& t : trees_) out.push_back(t.root);
    return out;
}

KindIndex build_kind_index(const Corpus& corpus, SourceKind kind, const std::string& provider_model,
                           const std::function<std::vector<Chunk>(const Document&)>& chunker,
                           const Summarizer& summarize, const TreeOptions& options) {
    std::vector<Chunk> all_chunks;
    std::vector<SummaryTree> trees;
    for (const auto* doc : corpus.of_kind(kind)) {
        auto chunks = chunker(*doc);
        trees.push_back(build_tree(chunks, doc->title, kind, summarize, options));
        all_chunks.insert(all_chunks.end(), std::make_move_iterator(chunks.begin()),
                          std::make_move_iterator(chunks.end()));
    }
    return KindIndex(kind, options.branching, provider_model, std::move(all_chunks), std::move(trees));
}

KindIndex build_kind_index(const Corpus& corpus, SourceKind kind, const ModelRef& model,
                           const IndexOptions& options) {
    return build_kind_index(
        corpus, kind, model.model,
        [&](const Document& doc) { return structure_chunks(doc, model, options.chunking); },
        llm_summarizer(model), options.tree);
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << text;
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::vector<json> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ValidationError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

} // namespace

void save_index(const KindIndex& index, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["kind"] = to_string(index.kind());
    manifest["branching"] = index.branching();
    manifest["chunk_count"] = index.chunks().size();
    manifest["provider_model"] = index.provider_model();
    manifest["trees"] = json::array();
    std::string nodes;
    for (const auto& tree : index.trees()) {
        manifest["trees"].push_back({{"doc_id", tree.doc_id}, {"root", tree.root}, {"node_count", tree.nodes.size()}});
        for (const auto& [id, node] : tree.nodes) nodes += to_json(node).dump() + "\n";
    }
    std::string chunks;
    for (const auto& c : index.chunks()) chunks += to_json(c).dump() + "\n";
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    write_file(dir / "nodes.jsonl", nodes);
    write_file(dir / "chunks.jsonl", chunks);
}

KindIndex load_index(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw ValidationError("no index manifest in " + dir.string());
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("bad index manifest: " + std::string(e.what()));
    }
    const auto kind = parse_source_kind(manifest.at("kind").get<std::string>());
    const int branching = manifest.at("branching").get<int>();

    std::vector<Chunk> chunks;
    for (const auto& j : read_jsonl(dir / "chunks.jsonl")) chunks.push_back(chunk_from_json(j));
    if (chunks.size() != manifest.at("chunk_count").get<std::size_t>()) {
        throw ValidationError("chunk count does not match manifest in " + dir.string());
    }

    std::unordered_map<std::string, SummaryNode> by_id;
    for (const auto& j : read_jsonl(dir / "nodes.jsonl")) {
        auto n = node_from_json(j);
        auto id = n.id;
        by_id.emplace(std::move(id), std::move(n));
    }
    std::vector<SummaryTree> trees;
    for (const auto& t : manifest.at("trees")) {
        SummaryTree tree;
        tree.root = t.at("root").get<std::string>();
        tree.doc_id = t.at("doc_id").get<std::string>();
        tree.branching = branching;
        tree.kind = kind;
        std::vector<std::string> stack{tree.root};
        while (!stack.empty()) {
            auto id = std::move(stack.back());
            stack.pop_back();
            auto it = by_id.find(id);
            if (it == by_id.end()) throw ValidationError("index references missing node \"" + id + "\"");
            for (const auto& c : it->second.children) stack.push_back(c);
            if (!tree.nodes.emplace(id, std::move(it->second)).second) {
                throw ValidationError("cycle or shared node at \"" + id + "\"");
            }
            by_id.erase(it);
        }
        if (tree.nodes.size() != t.at("node_count").get<std::size_t>()) {
            throw ValidationError("node count mismatch for tree \"" + tree.doc_id + "\"");
        }
        trees.push_back(std::move(tree));
    }
    if (!by_id.empty()) throw ValidationError("index has nodes not reachable from any root");
    return KindIndex(kind, branching, manifest.at("provider_model").get<std::string>(), std::move(chunks),
                     std::move(trees));
}

} // namespace forumqa::retrieval
