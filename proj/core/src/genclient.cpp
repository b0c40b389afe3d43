#include "plantext/genclient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "httplib.h"
#include "plantext/rng.hpp"
#include "plantext/semantics.hpp"

namespace plantext {

using nlohmann::json;

void check_params(const SamplingParams& p) {
    if (!(p.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (!(p.top_p > 0.0 && p.top_p <= 1.0)) throw std::invalid_argument("top_p must lie in (0, 1]");
    if (p.max_tokens < 1) throw std::invalid_argument("max_tokens must be at least 1");
    if (p.n < 1) throw std::invalid_argument("n must be at least 1");
}

std::string_view to_string(GeneratorError::Kind k) {
    switch (k) {
        case GeneratorError::Kind::transport: return "transport";
        case GeneratorError::Kind::timeout: return "timeout";
        case GeneratorError::Kind::auth: return "auth";
        case GeneratorError::Kind::http_status: return "http_status";
        case GeneratorError::Kind::malformed_response: return "malformed_response";
    }
    return "unknown";
}

GeneratorError::GeneratorError(Kind kind, const std::string& detail, int http_status, int attempts)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail),
      http_status_(http_status),
      attempts_(attempts) {}

bool GeneratorError::retryable() const noexcept {
    switch (kind_) {
        case Kind::transport:
        case Kind::timeout: return true;
        case Kind::http_status: return http_status_ == 408 || http_status_ == 429 || http_status_ >= 500;
        default: return false;
    }
}

UnsatisfiableError::UnsatisfiableError(const std::string& prompt, int attempts)
    : std::runtime_error("no satisfying layout for \"" + prompt + "\" after " + std::to_string(attempts) +
                         " attempts"),
      attempts_(attempts) {}

std::chrono::milliseconds RetryPolicy::backoff(int retry) const {
    const double ms = static_cast<double>(initial_backoff.count()) * std::pow(multiplier, retry);
    return std::chrono::milliseconds(
        static_cast<std::int64_t>(std::min(ms, static_cast<double>(max_backoff.count()))));
}

std::string encode_request(const EndpointConfig& cfg, std::string_view prompt, const SamplingParams& p) {
    json body;
    if (cfg.schema == WireSchema::openai_completions) body["model"] = cfg.model;
    body["prompt"] = std::string(prompt);
    body["temperature"] = p.temperature;
    body["top_p"] = p.top_p;
    body["max_tokens"] = p.max_tokens;
    body["n"] = p.n;
    return body.dump();
}

std::vector<std::string> decode_response(WireSchema schema, std::string_view body) {
    const json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw GeneratorError(GeneratorError::Kind::malformed_response, "response is not a JSON object");
    }
    std::vector<std::string> out;
    if (schema == WireSchema::neutral) {
        const auto it = doc.find("completions");
        if (it == doc.end() || !it->is_array()) {
            throw GeneratorError(GeneratorError::Kind::malformed_response, "missing 'completions' array");
        }
        for (const json& c : *it) {
            if (!c.is_string()) throw GeneratorError(GeneratorError::Kind::malformed_response, "non-string completion");
            out.push_back(c.get<std::string>());
        }
    } else {
        const auto it = doc.find("choices");
        if (it == doc.end() || !it->is_array()) {
            throw GeneratorError(GeneratorError::Kind::malformed_response, "missing 'choices' array");
        }
        for (const json& c : *it) {
            if (!c.is_object() || !c.contains("text") || !c["text"].is_string()) {
                throw GeneratorError(GeneratorError::Kind::malformed_response, "choice without 'text'");
            }
            out.push_back(c["text"].get<std::string>());
        }
    }
    return out;
}

EndpointGenerator::EndpointGenerator(EndpointConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.timeout.count() <= 0) throw std::invalid_argument("endpoint timeout must be positive");
    if (cfg_.max_in_flight < 1 || cfg_.max_in_flight > 1024) {
        throw std::invalid_argument("max_in_flight must be in [1, 1024]");
    }
    if (cfg_.retry.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
    in_flight_ = std::make_unique<std::counting_semaphore<1024>>(cfg_.max_in_flight);
}

std::vector<std::string> EndpointGenerator::attempt(std::string_view prompt, const SamplingParams& params) const {
    httplib::Client client(cfg_.base_url);
    const auto seconds = cfg_.timeout.count() / 1000;
    const auto micros = (cfg_.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    httplib::Headers headers;
    if (!cfg_.auth_env.empty()) {
        const char* token = std::getenv(cfg_.auth_env.c_str());
        if (token == nullptr || *token == '\0') {
            throw GeneratorError(GeneratorError::Kind::auth, "environment variable " + cfg_.auth_env + " is not set");
        }
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    const auto res = client.Post(cfg_.path, headers, encode_request(cfg_, prompt, params), "application/json");
    if (!res) {
        const auto err = res.error();
        const auto kind = err == httplib::Error::ConnectionTimeout ? GeneratorError::Kind::timeout
                                                                   : GeneratorError::Kind::transport;
        throw GeneratorError(kind, httplib::to_string(err));
    }
    if (res->status == 401 || res->status == 403) {
        throw GeneratorError(GeneratorError::Kind::auth, "endpoint rejected credentials", res->status);
    }
    if (res->status < 200 || res->status >= 300) {
        throw GeneratorError(GeneratorError::Kind::http_status, "HTTP " + std::to_string(res->status), res->status);
    }
    auto out = decode_response(cfg_.schema, res->body);
    if (out.size() != static_cast<std::size_t>(params.n)) {
        throw GeneratorError(GeneratorError::Kind::malformed_response,
                             "expected " + std::to_string(params.n) + " completions, got " + std::to_string(out.size()));
    }
    return out;
}

std::vector<std::string> EndpointGenerator::generate(std::string_view prompt, const SamplingParams& params) {
    check_params(params);
    for (int retry = 0;; ++retry) {
        try {
            in_flight_->acquire();
            struct Release {
                std::counting_semaphore<1024>* s;
                ~Release() { s->release(); }
            } release{in_flight_.get()};
            return attempt(prompt, params);
        } catch (const GeneratorError& e) {
            if (!e.retryable() || retry >= cfg_.retry.max_retries) {
                throw GeneratorError(e.kind(), e.detail(), e.http_status(), retry + 1);
            }
        }
        std::this_thread::sleep_for(cfg_.retry.backoff(retry));
    }
}

namespace {

struct CountBounds {
    int lo = 0;
    int hi = 99;
};

void restrict_count(CountBounds& b, bool unique) {
    if (unique) {
        b.lo = std::max(b.lo, 1);
        b.hi = std::min(b.hi, 1);
    } else {
        b.lo = std::max(b.lo, 2);
    }
}

CountBounds* bounds_for(RoomType t, CountBounds& beds, CountBounds& baths, CountBounds& corridors) {
    switch (t) {
        case RoomType::bedroom: return &beds;
        case RoomType::bathroom: return &baths;
        case RoomType::corridor: return &corridors;
        default: return nullptr;
    }
}

template <class T>
const T& pick(const std::vector<T>& items, Rng& rng) {
    return items[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(items.size()) - 1))];
}

// Spec request biased towards the annotation, or nullopt when no synthetic
// layout can ever carry it.
std::optional<SpecRequest> bias_towards(const Annotation& target, Rng& rng) {
    SpecRequest req;
    CountBounds beds;
    CountBounds baths;
    CountBounds corridors{0, 2};

    const auto choose_counts = [&]() -> bool {
        if (beds.lo > beds.hi || baths.lo > baths.hi || corridors.lo > corridors.hi) return false;
        std::vector<CategoryKey> options;
        for (CategoryKey c : kTrainingCategories) {
            if (c.bedrooms >= beds.lo && c.bedrooms <= beds.hi && c.bathrooms >= baths.lo && c.bathrooms <= baths.hi) {
                options.push_back(c);
            }
        }
        if (options.empty()) {
            for (int b = beds.lo; b <= std::min(beds.hi, beds.lo + 3); ++b) {
                for (int t = baths.lo; t <= std::min(baths.hi, baths.lo + 3); ++t) options.push_back({b, t});
            }
        }
        req.category = pick(options, rng);
        if (corridors.lo > 0 || corridors.hi < 2) {
            req.corridors = static_cast<int>(rng.uniform(corridors.lo, corridors.hi));
        }
        return true;
    };

    if (const auto* rc = std::get_if<RoomCount>(&target)) {
        const int extra = rc->rooms - 2;  // living room and kitchen are always present
        if (extra < 0) return std::nullopt;
        std::vector<std::pair<CategoryKey, int>> options;
        for (CategoryKey c : kTrainingCategories) {
            const int corr = extra - c.bedrooms - c.bathrooms;
            if (corr >= 0 && corr <= 2) options.emplace_back(c, corr);
        }
        if (options.empty()) {
            for (int corr = 0; corr <= std::min(2, extra); ++corr) {
                for (int b = 0; b <= extra - corr; ++b) options.emplace_back(CategoryKey{b, extra - corr - b}, corr);
            }
        }
        const auto& [cat, corr] = pick(options, rng);
        req.category = cat;
        req.corridors = corr;
        return req;
    }
    if (const auto* bb = std::get_if<BedBathCount>(&target)) {
        req.category = {bb->bedrooms, bb->bathrooms};
        return req;
    }
    if (const auto* adj = std::get_if<Adjacency>(&target)) {
        if (auto* b = bounds_for(adj->subject, beds, baths, corridors)) {
            restrict_count(*b, adj->subject_unique);
        } else if (!adj->subject_unique) {
            return std::nullopt;  // exactly one living room and one kitchen
        }
        if (auto* b = bounds_for(adj->object, beds, baths, corridors)) b->lo = std::max(b->lo, 1);
        if (!choose_counts()) return std::nullopt;
        if (adj->negated) {
            req.separated_types.emplace_back(adj->subject, adj->object);
        } else {
            req.linked_types.emplace_back(adj->subject, adj->object);
        }
        return req;
    }
    const auto& loc = std::get<Location>(target);
    if (auto* b = bounds_for(loc.subject, beds, baths, corridors)) {
        restrict_count(*b, loc.unique);
    } else if (!loc.unique) {
        return std::nullopt;
    }
    if (!choose_counts()) return std::nullopt;
    return req;
}

}  // namespace

std::string baseline_generate(std::string_view prompt, std::uint64_t seed, int attempt_cap, const GenConfig& cfg,
                              const ValidityOptions& opts) {
    const Annotation target = parse_prompt(prompt);
    Rng rng(seed);
    for (int attempt = 0; attempt < attempt_cap; ++attempt) {
        const auto req = bias_towards(target, rng);
        if (!req) throw UnsatisfiableError(std::string(prompt), attempt);
        Layout layout;
        try {
            layout = generate_layout(sample_spec(*req, rng.next(), cfg), cfg);
        } catch (const GenFailure&) {
            continue;
        }
        // A stricter wall threshold than the generator's can reject its output.
        if (!validate(layout, opts).valid) continue;
        if (extract_annotations(layout, opts).contains(target)) return serialize_layout(layout);
    }
    throw UnsatisfiableError(std::string(prompt), attempt_cap);
}

BaselineGenerator::BaselineGenerator(GenConfig cfg, int attempt_cap, ValidityOptions opts)
    : cfg_(std::move(cfg)), attempt_cap_(attempt_cap), opts_(opts) {
    check_config(cfg_);
    if (attempt_cap_ < 1) throw std::invalid_argument("attempt cap must be at least 1");
}

std::vector<std::string> BaselineGenerator::generate(std::string_view prompt, const SamplingParams& params) {
    check_params(params);
    std::uint64_t base = 0;
    if (params.seed) {
        base = *params.seed;
    } else {
        std::random_device rd;
        base = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(params.n));
    for (int i = 0; i < params.n; ++i) {
        out.push_back(baseline_generate(prompt, derive_seed(base, static_cast<std::uint64_t>(i)), attempt_cap_, cfg_,
                                        opts_));
    }
    return out;
}

}  // namespace plantext
