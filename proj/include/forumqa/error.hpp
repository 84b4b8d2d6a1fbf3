#pragma once

#include <stdexcept>
#include <string>

namespace forumqa {

/// Bad input data or arguments: malformed files, broken invariants, unmet
/// preconditions. The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Anything that went wrong talking to a model backend. CLI exit code 2.
class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Network-level failure (connection refused, 5xx). Retried with backoff.
class TransportError : public ProviderError {
public:
    using ProviderError::ProviderError;
};

/// HTTP 429 or equivalent. Retried with backoff.
class RateLimitError : public TransportError {
public:
    using TransportError::TransportError;
};

/// The backend answered but broke the tool-choice contract, e.g. returned
/// text only when a tool call was required.
class ContractViolation : public ProviderError {
public:
    using ProviderError::ProviderError;
};

/// Replay mode received a request whose hash is not in the fixture file.
class ReplayMiss : public ProviderError {
public:
    explicit ReplayMiss(std::string hash)
        : ProviderError("replay cache miss for request " + hash), hash_(std::move(hash)) {}

    const std::string& hash() const noexcept { return hash_; }

private:
    std::string hash_;
};

} // namespace forumqa
