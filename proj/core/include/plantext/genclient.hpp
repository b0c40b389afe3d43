#pragma once

// Layout generators behind one interface: a remote inference endpoint that
// returns raw completions, and the built-in baseline that samples synthetic
// plans until one satisfies the prompt.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plantext/synthgen.hpp"
#include "plantext/validity.hpp"

namespace plantext {

struct SamplingParams {
    double temperature = 1.0;
    double top_p = 0.9;
    int max_tokens = 512;
    int n = 1;
    /// Makes the baseline reproducible. Not sent to remote endpoints.
    std::optional<std::uint64_t> seed;
};

/// Throws std::invalid_argument when a field is out of range.
void check_params(const SamplingParams& p);

class GeneratorError : public std::runtime_error {
public:
    enum class Kind { transport, timeout, auth, http_status, malformed_response };

    GeneratorError(Kind kind, const std::string& detail, int http_status = 0, int attempts = 1);

    Kind kind() const noexcept { return kind_; }
    /// Message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }
    int http_status() const noexcept { return http_status_; }
    int attempts() const noexcept { return attempts_; }
    /// Whether another attempt could plausibly succeed.
    bool retryable() const noexcept;

private:
    Kind kind_;
    std::string detail_;
    int http_status_;
    int attempts_;
};

std::string_view to_string(GeneratorError::Kind k);

class UnsatisfiableError : public std::runtime_error {
public:
    UnsatisfiableError(const std::string& prompt, int attempts);
    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

class Generator {
public:
    virtual ~Generator() = default;
    /// Returns params.n raw completions in the order produced. No validation.
    virtual std::vector<std::string> generate(std::string_view prompt, const SamplingParams& params) = 0;
    virtual std::string name() const = 0;
};

struct RetryPolicy {
    int max_retries = 4;
    std::chrono::milliseconds initial_backoff{200};
    std::chrono::milliseconds max_backoff{5000};
    double multiplier = 2.0;

    std::chrono::milliseconds backoff(int retry) const;
};

enum class WireSchema { neutral, openai_completions };

struct EndpointConfig {
    std::string base_url = "http://127.0.0.1:8000";
    std::string path = "/generate";
    /// Name of the environment variable holding a bearer token; empty for none.
    std::string auth_env;
    std::chrono::milliseconds timeout{30000};
    int max_in_flight = 4;
    RetryPolicy retry;
    WireSchema schema = WireSchema::neutral;
    std::string model;  // sent only with the openai_completions schema
};

class EndpointGenerator final : public Generator {
public:
    explicit EndpointGenerator(EndpointConfig cfg);

    std::vector<std::string> generate(std::string_view prompt, const SamplingParams& params) override;
    std::string name() const override { return "endpoint"; }

    const EndpointConfig& config() const { return cfg_; }

private:
    std::vector<std::string> attempt(std::string_view prompt, const SamplingParams& params) const;

    EndpointConfig cfg_;
    std::unique_ptr<std::counting_semaphore<1024>> in_flight_;
};

/// Request body for the configured schema.
std::string encode_request(const EndpointConfig& cfg, std::string_view prompt, const SamplingParams& params);
/// Completions from a response body. Throws GeneratorError(malformed_response).
std::vector<std::string> decode_response(WireSchema schema, std::string_view body);

/// Rejection-samples synthetic layouts, biased towards what the prompt asks
/// for, until one carries the prompt's annotation. The returned text is
/// always valid and correct. Throws PromptParseError or UnsatisfiableError.
std::string baseline_generate(std::string_view prompt, std::uint64_t seed, int attempt_cap = 1000,
                              const GenConfig& cfg = {}, const ValidityOptions& opts = {});

class BaselineGenerator final : public Generator {
public:
    explicit BaselineGenerator(GenConfig cfg = {}, int attempt_cap = 1000, ValidityOptions opts = {});

    /// Sample i uses seed derive_seed(params.seed, i); without a seed a fresh
    /// one is drawn per call.
    std::vector<std::string> generate(std::string_view prompt, const SamplingParams& params) override;
    std::string name() const override { return "baseline"; }

private:
    GenConfig cfg_;
    int attempt_cap_;
    ValidityOptions opts_;
};

}  // namespace plantext
