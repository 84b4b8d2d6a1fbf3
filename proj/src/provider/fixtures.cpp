#include "forumqa/provider/fixtures.hpp"

#include <array>
#include <fstream>

#include <openssl/evp.h>

#include "forumqa/error.hpp"

namespace forumqa::provider {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw ProviderError("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

namespace {

std::string collapse_whitespace(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

json normalized(const json& j) {
    if (j.is_string()) return collapse_whitespace(j.get<std::string>());
    if (j.is_array()) {
        json out = json::array();
        for (const auto& v : j) out.push_back(normalized(v));
        return out;
    }
    if (j.is_object()) {
        json out = json::object();
        for (const auto& [k, v] : j.items()) out[k] = normalized(v);
        return out;
    }
    return j;
}

} // namespace

json canonical_request(const CompletionRequest& request) {
    // nlohmann::json objects keep keys sorted, so dump() is canonical.
    return normalized(to_json(request));
}

std::string request_hash(const CompletionRequest& request) {
    return sha256_hex("chat\n" + canonical_request(request).dump());
}

std::string embedding_hash(const std::string& model, const std::string& text) {
    return sha256_hex("embed\n" + json{{"model", model}, {"text", collapse_whitespace(text)}}.dump());
}

// ---------------------------------------------------------------------------

FixtureStore::FixtureStore(std::filesystem::path path, FixtureMode mode) : path_(std::move(path)), mode_(mode) {
    std::ifstream in(path_);
    if (!in) {
        if (mode_ == FixtureMode::replay) throw ValidationError("fixture file not found: " + path_.string());
        // Create the file so a later replay finds it even if nothing is recorded.
        std::ofstream touch(path_, std::ios::app);
        if (!touch) throw ValidationError("cannot create fixture file " + path_.string());
        return;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = json::parse(line);
            entries_.emplace(j.at("hash").get<std::string>(), j.at("response"));
        } catch (const json::exception& e) {
            throw ValidationError(path_.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

std::optional<json> FixtureStore::lookup(const std::string& hash) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(hash);
    if (it == entries_.end()) return std::nullopt;
    return std::optional<json>(std::in_place, it->second);
}

void FixtureStore::append(const std::string& hash, const json& request, const json& response) {
    if (mode_ != FixtureMode::record) throw ValidationError("fixture store is read-only in replay mode");
    std::lock_guard lock(mu_);
    if (!entries_.emplace(hash, response).second) return;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw ValidationError("cannot append to fixture file " + path_.string());
    out << json{{"hash", hash}, {"request", request}, {"response", response}}.dump() << "\n";
}

std::size_t FixtureStore::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

// ---------------------------------------------------------------------------

FixtureChat::FixtureChat(std::shared_ptr<FixtureStore> store, std::shared_ptr<ChatBackend> live)
    : store_(std::move(store)), live_(std::move(live)) {
    if (store_->mode() == FixtureMode::record && !live_) {
        throw ValidationError("record mode needs a live chat backend");
    }
}

CompletionResponse FixtureChat::complete(const CompletionRequest& request) {
    const auto hash = request_hash(request);
    if (auto hit = store_->lookup(hash)) return response_from_json(*hit);
    if (store_->mode() == FixtureMode::replay) throw ReplayMiss(hash);
    auto response = live_->complete(request);
    store_->append(hash, canonical_request(request), to_json(response));
    return response;
}

FixtureEmbedder::FixtureEmbedder(std::shared_ptr<FixtureStore> store, std::shared_ptr<EmbeddingBackend> live)
    : store_(std::move(store)), live_(std::move(live)) {
    if (store_->mode() == FixtureMode::record && !live_) {
        throw ValidationError("record mode needs a live embedding backend");
    }
}

std::vector<Embedding> FixtureEmbedder::embed(const std::string& model, const std::vector<std::string>& texts) {
    std::vector<Embedding> out(texts.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        const auto hash = embedding_hash(model, texts[i]);
        if (auto hit = store_->lookup(hash)) {
            out[i] = hit->at("vector").get<Embedding>();
        } else if (store_->mode() == FixtureMode::replay) {
            throw ReplayMiss(hash);
        } else {
            missing.push_back(i);
        }
    }
    if (!missing.empty()) {
        std::vector<std::string> batch;
        for (auto i : missing) batch.push_back(texts[i]);
        auto vectors = live_->embed(model, batch);
        if (vectors.size() != batch.size()) throw ProviderError("embedding backend returned wrong batch size");
        for (std::size_t k = 0; k < missing.size(); ++k) {
            const auto i = missing[k];
            store_->append(embedding_hash(model, texts[i]), json{{"model", model}, {"text", texts[i]}},
                           json{{"vector", vectors[k]}});
            out[i] = std::move(vectors[k]);
        }
    }
    return out;
}

} // namespace forumqa::provider
