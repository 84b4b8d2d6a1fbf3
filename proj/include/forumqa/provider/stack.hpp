#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "forumqa/provider/client.hpp"
#include "forumqa/provider/fixtures.hpp"

namespace forumqa::provider {

enum class BackendKind { openai, sim };

BackendKind parse_backend_kind(std::string_view text);

struct ProviderSettings {
    BackendKind backend = BackendKind::sim;
    std::string base_url = "https://api.openai.com/v1";
    std::string embedding_model = "text-embedding-3-small";
    double requests_per_minute = 0.0;
    std::chrono::seconds timeout{120};
    /// Simulated embedder only.
    std::size_t embedding_dim = 256;
    /// Simulated embedder only: ignore numbering and structural words.
    bool blur_structure = false;
    /// Fixture directory holding chat.jsonl and embeddings.jsonl.
    std::optional<std::filesystem::path> fixtures;
    FixtureMode fixture_mode = FixtureMode::replay;
    RetryPolicy retry;
};

/// Clients for one run, plus a counter of requests that reached a live
/// backend (the network for openai, the simulator for sim).
struct ProviderStack {
    std::shared_ptr<ChatClient> chat;
    std::shared_ptr<EmbeddingClient> embedder;
    std::function<std::size_t()> live_requests;
};

/// Builds the clients. In replay mode no live backend is constructed, so no
/// API key is needed and nothing can reach the network. The openai backend
/// without replay requires `api_key`.
ProviderStack make_provider_stack(const ProviderSettings& settings, const std::string& api_key);

/// FORUMQA_API_KEY, falling back to OPENAI_API_KEY; empty when neither is set.
std::string api_key_from_environment();

} // namespace forumqa::provider
