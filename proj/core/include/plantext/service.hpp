#pragma once

// HTTP/JSON facade over the library plus the SVG rendering it serves.
//
//   POST /api/generate  {"prompt": ..., "n": 3, "sampling": {...}, "seed": 7}
//   GET  /api/prompts
//   POST /api/check     {"layout": ...}
//   GET  /api/health

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "plantext/genclient.hpp"
#include "plantext/metrics.hpp"
#include "plantext/validity.hpp"

namespace plantext {

/// Fill colour per room type, in RoomType order.
inline constexpr std::array<std::string_view, 5> kRoomColors = {"#8ecae6", "#ffb703", "#d9d9d9", "#90be6d",
                                                                "#f4a261"};

/// 256x256 document, y flipped so north is up, one polygon and one label
/// per room. Byte-identical for equal layouts. Throws InvalidLayoutError.
std::string render_svg(const Layout& layout, const ValidityOptions& opts = {});

struct ServiceConfig {
    std::shared_ptr<Generator> generator;
    ReferenceStats stats;
    ValidityOptions validity;
    SamplingParams sampling;  // defaults merged under each request
    int max_samples = 64;
    std::string cors_origin = "*";
};

/// Transport-free request handlers; each returns a status code and body.
class Service {
public:
    struct Response {
        int status = 200;
        nlohmann::json body;
    };

    explicit Service(ServiceConfig cfg);

    Response generate(const std::string& request_body) const;
    Response prompts() const;
    Response check(const std::string& request_body) const;
    Response health() const;

    /// One generation result with every diagnostic the UI shows.
    nlohmann::json describe_completion(const std::string& prompt, const std::string& completion) const;

    const ServiceConfig& config() const { return cfg_; }

private:
    ServiceConfig cfg_;
};

/// Binds a Service to an HTTP listener.
class HttpServer {
public:
    explicit HttpServer(const Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Port 0 picks a free port. Returns the bound port or throws.
    int bind(const std::string& host, int port);
    /// Blocks until stop() is called.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace plantext
