#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "forumqa/corpus.hpp"
#include "forumqa/provider/client.hpp"
#include "forumqa/provider/mock.hpp"

namespace testing {

/// Client options that never sleep, so retry paths run instantly.
inline forumqa::provider::ClientOptions no_sleep(int contract_retries = 2) {
    forumqa::provider::ClientOptions o;
    o.sleep = [](std::chrono::milliseconds) {};
    o.retry.contract_retries = contract_retries;
    o.retry.initial_backoff = std::chrono::milliseconds(0);
    return o;
}

inline std::shared_ptr<forumqa::provider::ChatClient> client_for(
    std::shared_ptr<forumqa::provider::ChatBackend> backend, int contract_retries = 2) {
    return std::make_shared<forumqa::provider::ChatClient>(std::move(backend), no_sleep(contract_retries));
}

inline forumqa::Document doc(std::string id, forumqa::SourceKind kind, std::string body, std::string title = "") {
    forumqa::Document d;
    d.id = std::move(id);
    d.kind = kind;
    d.title = title.empty() ? d.id : std::move(title);
    d.body = std::move(body);
    return d;
}

inline forumqa::Document qa_doc(std::string id, std::string question, std::string answer) {
    forumqa::Document d;
    d.id = std::move(id);
    d.kind = forumqa::SourceKind::qa;
    d.title = d.id;
    d.qa = forumqa::QAPair{std::move(question), std::move(answer)};
    d.body = forumqa::render_qa_body(*d.qa);
    return d;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("forumqa_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing
