#include "forumqa/provider/stack.hpp"

#include <cstdlib>

#include "forumqa/error.hpp"
#include "forumqa/provider/mock.hpp"
#include "forumqa/provider/openai.hpp"
#include "forumqa/sim.hpp"

namespace forumqa::provider {

BackendKind parse_backend_kind(std::string_view text) {
    if (text == "openai") return BackendKind::openai;
    if (text == "sim") return BackendKind::sim;
    throw ValidationError("unknown provider backend \"" + std::string(text) + "\" (expected openai or sim)");
}

std::string api_key_from_environment() {
    for (const char* name : {"FORUMQA_API_KEY", "OPENAI_API_KEY"}) {
        if (const char* v = std::getenv(name); v != nullptr && *v != '\0') return v;
    }
    return {};
}

ProviderStack make_provider_stack(const ProviderSettings& settings, const std::string& api_key) {
    const bool replay = settings.fixtures && settings.fixture_mode == FixtureMode::replay;

    std::shared_ptr<ChatBackend> chat_live;
    std::shared_ptr<EmbeddingBackend> embed_live;
    std::function<std::size_t()> live_requests = [] { return std::size_t{0}; };
    if (!replay) {
        if (settings.backend == BackendKind::openai) {
            if (api_key.empty()) {
                throw ValidationError("no API key: set FORUMQA_API_KEY or OPENAI_API_KEY, or use --replay");
            }
            auto transport = std::make_shared<CountingTransport>(
                std::make_shared<HttpTransport>(settings.base_url, api_key, settings.timeout));
            chat_live = std::make_shared<OpenAIChat>(transport);
            embed_live = std::make_shared<OpenAIEmbedder>(transport);
            live_requests = [transport] { return transport->count(); };
        } else {
            auto chat = std::make_shared<CountingChat>(std::make_shared<sim::SimulatedCourseModel>());
            auto embed = std::make_shared<CountingEmbedder>(
                std::make_shared<HashingEmbedder>(settings.embedding_dim, settings.blur_structure));
            chat_live = chat;
            embed_live = embed;
            live_requests = [chat, embed] { return chat->count() + embed->count(); };
        }
    }

    std::shared_ptr<ChatBackend> chat_backend = chat_live;
    std::shared_ptr<EmbeddingBackend> embed_backend = embed_live;
    if (settings.fixtures) {
        if (settings.fixture_mode == FixtureMode::record) std::filesystem::create_directories(*settings.fixtures);
        auto chat_store = std::make_shared<FixtureStore>(*settings.fixtures / "chat.jsonl", settings.fixture_mode);
        auto embed_store =
            std::make_shared<FixtureStore>(*settings.fixtures / "embeddings.jsonl", settings.fixture_mode);
        chat_backend = std::make_shared<FixtureChat>(chat_store, chat_live);
        embed_backend = std::make_shared<FixtureEmbedder>(embed_store, embed_live);
    }

    ClientOptions options;
    options.retry = settings.retry;
    options.requests_per_minute = settings.requests_per_minute;
    ProviderStack stack;
    stack.chat = std::make_shared<ChatClient>(chat_backend, options);
    stack.embedder = std::make_shared<EmbeddingClient>(embed_backend, settings.embedding_model, options);
    stack.live_requests = std::move(live_requests);
    return stack;
}

} // namespace forumqa::provider
