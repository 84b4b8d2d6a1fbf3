#include "forumqa/retrieval/chunking.hpp"

#include <algorithm>
#include <cctype>

#include <spdlog/spdlog.h>

#include "forumqa/error.hpp"
#include "forumqa/prompts.hpp"

namespace forumqa::retrieval {

using nlohmann::json;

json to_json(const Chunk& c) {
    json j{{"id", c.id}, {"doc_id", c.doc_id}, {"text", c.text}, {"start", c.span.start}, {"end", c.span.end}};
    j["header"] = c.header ? json(*c.header) : json(nullptr);
    return j;
}

Chunk chunk_from_json(const json& j) {
    Chunk c;
    c.id = j.at("id").get<std::string>();
    c.doc_id = j.at("doc_id").get<std::string>();
    c.text = j.at("text").get<std::string>();
    c.span = {j.at("start").get<std::size_t>(), j.at("end").get<std::size_t>()};
    if (auto it = j.find("header"); it != j.end() && it->is_string()) c.header = *it;
    return c;
}

namespace {

Chunk make_chunk(const Document& doc, std::size_t index, Span span, std::optional<std::string> header) {
    return {doc.id + "#" + std::to_string(index), doc.id, doc.body.substr(span.start, span.length()), span,
            std::move(header)};
}

std::string strip_fence(std::string_view text) {
    auto s = std::string(text);
    s.erase(0, s.find_first_not_of(" \t\r\n"));
    s.erase(s.find_last_not_of(" \t\r\n") + 1);
    if (s.rfind("```", 0) == 0) {
        const auto nl = s.find('\n');
        s = nl == std::string::npos ? "" : s.substr(nl + 1);
        const auto close = s.rfind("```");
        if (close != std::string::npos) s = s.substr(0, close);
    }
    return s;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

} // namespace

std::vector<Chunk> split_fixed(const Document& doc, std::size_t chunk_chars, std::size_t overlap) {
    if (chunk_chars == 0 || overlap >= chunk_chars) {
        throw ValidationError("split_fixed needs chunk_chars > overlap >= 0");
    }
    if (doc.body.empty()) throw ValidationError("document \"" + doc.id + "\" has an empty body");
    std::vector<Chunk> out;
    const auto stride = chunk_chars - overlap;
    const auto len = doc.body.size();
    for (std::size_t start = 0;; start += stride) {
        const auto end = std::min(start + chunk_chars, len);
        out.push_back(make_chunk(doc, out.size(), {start, end}, std::nullopt));
        if (end == len) break;
    }
    return out;
}

HeaderDetection locate_headers(std::string_view body, const std::vector<std::string>& headers) {
    HeaderDetection out;
    std::size_t from = 0;
    for (const auto& raw : headers) {
        auto header = strip_fence(raw);
        if (header.empty()) continue;
        std::size_t found = std::string_view::npos;
        for (auto pos = body.find(header, from); pos != std::string_view::npos; pos = body.find(header, pos + 1)) {
            const auto after = pos + header.size();
            const bool ends_clean = after >= body.size() || !word_char(body[after]) || !word_char(header.back());
            if (ends_clean) {
                found = pos;
                break;
            }
        }
        if (found == std::string_view::npos) {
            spdlog::warn("header \"{}\" not found in text; dropped", header);
            out.dropped.push_back(header);
            continue;
        }
        out.boundaries.push_back({header, found});
        from = found + 1;
    }
    return out;
}

std::vector<std::string> parse_header_list(std::string_view reply) {
    std::vector<std::string> out;
    try {
        auto j = json::parse(strip_fence(reply));
        if (!j.is_array()) return out;
        for (const auto& v : j) {
            if (v.is_string()) out.push_back(v.get<std::string>());
        }
    } catch (const json::exception&) {
        return {};
    }
    return out;
}

HeaderDetection detect_headers_in(std::string_view title, std::string_view text, const ModelRef& model) {
    std::vector<provider::ChatMessage> messages{
        provider::ChatMessage::system(std::string(prompts::kDetectHeaders)),
        provider::ChatMessage::user(std::string(prompts::kTitleLabel) + " " + std::string(title) + "\n\n" +
                                    std::string(text)),
    };
    auto response = model.chat->chat_complete(model.model, std::move(messages), {}, provider::ToolChoice::none(),
                                              false, model.seed);
    return locate_headers(text, parse_header_list(provider::text_of(response)));
}

HeaderDetection detect_headers(const Document& doc, const ModelRef& model) {
    if (doc.kind != SourceKind::assignment && doc.kind != SourceKind::textbook) {
        throw ValidationError("header detection applies to assignment and textbook documents, not " +
                              std::string(to_string(doc.kind)));
    }
    return detect_headers_in(doc.title, doc.body, model);
}

std::vector<Chunk> segment_by_headers(const Document& doc, const std::vector<HeaderBoundary>& boundaries) {
    if (boundaries.empty()) throw ValidationError("segment_by_headers needs at least one boundary");
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        if (boundaries[i].offset >= doc.body.size()) {
            throw ValidationError("header boundary beyond end of \"" + doc.id + "\"");
        }
        if (i > 0 && boundaries[i].offset <= boundaries[i - 1].offset) {
            throw ValidationError("header boundaries of \"" + doc.id + "\" are not strictly increasing");
        }
    }
    std::vector<Chunk> out;
    if (boundaries.front().offset > 0) {
        out.push_back(make_chunk(doc, 0, {0, boundaries.front().offset}, "preamble"));
    }
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        const auto end = i + 1 < boundaries.size() ? boundaries[i + 1].offset : doc.body.size();
        out.push_back(make_chunk(doc, out.size(), {boundaries[i].offset, end}, boundaries[i].header));
    }
    return out;
}

std::vector<Chunk> structure_chunks(const Document& doc, const ModelRef& model, const ChunkingOptions& options) {
    if (doc.kind == SourceKind::qa) {
        return {make_chunk(doc, 0, {0, doc.body.size()}, std::nullopt)};
    }
    if (doc.kind == SourceKind::logistics) return split_fixed(doc, options.chunk_chars, options.overlap);

    std::vector<HeaderBoundary> merged;
    for (const auto& window : split_fixed(doc, options.chunk_chars, options.overlap)) {
        auto found = detect_headers_in(doc.title, window.text, model);
        for (auto& b : found.boundaries) merged.push_back({std::move(b.header), b.offset + window.span.start});
    }
    std::sort(merged.begin(), merged.end(),
              [](const HeaderBoundary& a, const HeaderBoundary& b) { return a.offset < b.offset; });
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](const HeaderBoundary& a, const HeaderBoundary& b) { return a.offset == b.offset; }),
                 merged.end());
    if (merged.empty()) {
        spdlog::warn("no verifiable headers in \"{}\"; using fixed chunks", doc.id);
        return split_fixed(doc, options.chunk_chars, options.overlap);
    }
    return segment_by_headers(doc, merged);
}

} // namespace forumqa::retrieval
