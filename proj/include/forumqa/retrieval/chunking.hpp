#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forumqa/corpus.hpp"
#include "forumqa/provider/client.hpp"

namespace forumqa::retrieval {

/// Half-open byte range [start, end) into a document body.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - start; }
    bool operator==(const Span&) const = default;
};

struct Chunk {
    std::string id;
    std::string doc_id;
    std::string text;
    Span span;
    std::optional<std::string> header;

    bool operator==(const Chunk&) const = default;
};

nlohmann::json to_json(const Chunk& c);
Chunk chunk_from_json(const nlohmann::json& j);

/// Fixed windows of `chunk_chars` bytes advancing by chunk_chars - overlap.
/// The windows cover the body; only the last may be shorter.
std::vector<Chunk> split_fixed(const Document& doc, std::size_t chunk_chars, std::size_t overlap);

struct HeaderBoundary {
    std::string header;
    std::size_t offset = 0;

    bool operator==(const HeaderBoundary&) const = default;
};

struct HeaderDetection {
    std::vector<HeaderBoundary> boundaries;
    /// Headers the model listed that could not be found in the text.
    std::vector<std::string> dropped;

    /// No verifiable headers: callers should fall back to fixed chunks.
    bool fallback() const noexcept { return boundaries.empty(); }
};

/// Verifies model-proposed headers against `body`. Each header is searched
/// forward from the previous boundary, so offsets come out strictly
/// increasing; a match must end at a word boundary. Unfound headers are
/// dropped.
HeaderDetection locate_headers(std::string_view body, const std::vector<std::string>& headers);

/// Parses the model's header list (a JSON array of strings, optionally in a
/// code fence). Returns an empty list if the reply is not such an array.
std::vector<std::string> parse_header_list(std::string_view reply);

struct ModelRef {
    std::shared_ptr<provider::ChatClient> chat;
    std::string model;
    std::int64_t seed = 0;
};

/// Asks the model for the question/section headers of an assignment or
/// textbook document and keeps those that occur in the body.
HeaderDetection detect_headers(const Document& doc, const ModelRef& model);

/// Same, for an arbitrary slice of text (used per fixed window).
HeaderDetection detect_headers_in(std::string_view title, std::string_view text, const ModelRef& model);

/// One chunk per boundary, spanning to the next boundary. Text before the
/// first boundary becomes a chunk with header "preamble".
std::vector<Chunk> segment_by_headers(const Document& doc, const std::vector<HeaderBoundary>& boundaries);

struct ChunkingOptions {
    std::size_t chunk_chars = 1000;
    std::size_t overlap = 0;
};

/// Structure-aware chunking: fixed windows, header detection per window,
/// segmentation on the merged boundaries. qa documents stay whole; logistics
/// documents and documents without verifiable headers get fixed chunks.
std::vector<Chunk> structure_chunks(const Document& doc, const ModelRef& model, const ChunkingOptions& options);

} // namespace forumqa::retrieval
