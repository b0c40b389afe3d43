#include "plantext/service.hpp"

#include <sstream>

#include "httplib.h"
#include "plantext/json_io.hpp"
#include "plantext/pipeline.hpp"

namespace plantext {

using nlohmann::json;

std::string render_svg(const Layout& layout, const ValidityOptions& opts) {
    ValidityReport report = validate(layout, opts);
    if (!report.valid) throw InvalidLayoutError(std::move(report));

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"256\" height=\"256\" viewBox=\"0 0 256 256\">\n";
    out << "<rect width=\"256\" height=\"256\" fill=\"#ffffff\"/>\n";
    for (std::size_t i = 0; i < layout.rooms.size(); ++i) {
        const Room& r = layout.rooms[i];
        out << "<polygon data-room=\"" << i << "\" class=\"" << to_label(r.kind) << "\" points=\"";
        for (std::size_t v = 0; v < r.vertices.size(); ++v) {
            if (v) out << ' ';
            out << r.vertices[v].x << ',' << (kGridExtent - r.vertices[v].y);
        }
        out << "\" fill=\"" << kRoomColors[static_cast<std::size_t>(r.kind)]
            << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    }
    for (const Room& r : layout.rooms) {
        const RationalPoint c = room_centroid(r);
        out << "<text x=\"" << format_number(c.x()) << "\" y=\"" << format_number(kGridExtent - c.y())
            << "\" font-family=\"sans-serif\" font-size=\"8\" text-anchor=\"middle\" dominant-baseline=\"middle\">"
            << to_words(r.kind) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

Service::Service(ServiceConfig cfg) : cfg_(std::move(cfg)) {
    if (!cfg_.generator) throw std::invalid_argument("service needs a generator");
}

namespace {

Service::Response error(int status, const std::string& message) {
    return {status, json{{"error", message}}};
}

std::optional<json> parse_body(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    return j;
}

}  // namespace

json Service::describe_completion(const std::string& prompt, const std::string& completion) const {
    json item;
    item["layout"] = completion;
    const ValidityReport report = validate_text(completion, cfg_.validity);
    item["valid"] = report.valid;
    item["violations"] = to_json(report)["violations"];
    item["correct"] = false;
    item["category"] = nullptr;
    item["ood"] = false;
    item["spatial_diversity"] = nullptr;
    item["svg"] = nullptr;
    if (report.valid) {
        const Layout layout = parse_layout(completion);
        try {
            item["correct"] = check_correctness(prompt, layout, cfg_.validity);
        } catch (const PromptParseError&) {
        }
        item["category"] = to_string(category_of(layout));
        item["ood"] = is_ood(layout, cfg_.stats);
        item["spatial_diversity"] = spatial_diversity(layout, cfg_.stats);
        item["svg"] = render_svg(layout, cfg_.validity);
    }
    return item;
}

Service::Response Service::generate(const std::string& request_body) const {
    const auto body = parse_body(request_body);
    if (!body) return error(400, "request body must be a JSON object");
    if (!body->contains("prompt") || !body->at("prompt").is_string()) return error(400, "missing string field 'prompt'");
    const std::string prompt = body->at("prompt").get<std::string>();
    try {
        parse_prompt(prompt);
    } catch (const PromptParseError& e) {
        return error(400, e.what());
    }

    SamplingParams params = cfg_.sampling;
    params.seed.reset();
    try {
        if (body->contains("sampling")) params = sampling_params_from_json(body->at("sampling"), params);
        params.n = body->value("n", 1);
        if (body->contains("seed") && !body->at("seed").is_null()) params.seed = body->at("seed").get<std::uint64_t>();
        check_params(params);
    } catch (const std::exception& e) {
        return error(400, e.what());
    }
    if (params.n > cfg_.max_samples) return error(400, "n exceeds the limit of " + std::to_string(cfg_.max_samples));

    std::vector<std::string> completions;
    try {
        completions = cfg_.generator->generate(prompt, params);
    } catch (const UnsatisfiableError& e) {
        return error(422, e.what());
    } catch (const GeneratorError& e) {
        return error(502, e.what());
    }
    json items = json::array();
    for (const std::string& c : completions) items.push_back(describe_completion(prompt, c));
    return {200, json{{"items", std::move(items)}}};
}

Service::Response Service::prompts() const {
    json list = json::array();
    for (const SuitePrompt& p : prompt_suite()) {
        list.push_back({{"id", p.id}, {"text", p.text}, {"category", std::string(to_string(p.category))}});
    }
    return {200, json{{"prompts", std::move(list)}}};
}

Service::Response Service::check(const std::string& request_body) const {
    const auto body = parse_body(request_body);
    if (!body) return error(400, "request body must be a JSON object");
    if (!body->contains("layout") || !body->at("layout").is_string()) return error(400, "missing string field 'layout'");
    const std::string text = body->at("layout").get<std::string>();
    const ValidityReport report = validate_text(text, cfg_.validity);
    json out = to_json(report);
    out["layout"] = text;
    out["annotations"] = json::array();
    out["category"] = nullptr;
    out["ood"] = false;
    out["spatial_diversity"] = nullptr;
    out["svg"] = nullptr;
    if (report.valid) {
        const Layout layout = parse_layout(text);
        out["layout"] = serialize_layout(layout);
        out["annotations"] = to_json(extract_annotations(layout, cfg_.validity));
        out["category"] = to_string(category_of(layout));
        out["ood"] = is_ood(layout, cfg_.stats);
        out["spatial_diversity"] = spatial_diversity(layout, cfg_.stats);
        out["svg"] = render_svg(layout, cfg_.validity);
    }
    return {200, std::move(out)};
}

Service::Response Service::health() const {
    return {200, json{{"status", "ok"}, {"generator", cfg_.generator->name()}}};
}

struct HttpServer::Impl {
    const Service& service;
    httplib::Server server;

    explicit Impl(const Service& s) : service(s) {
        const std::string origin = s.config().cors_origin;
        server.set_default_headers({{"Access-Control-Allow-Origin", origin},
                                    {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                    {"Access-Control-Allow-Headers", "Content-Type"}});
        const auto reply = [](httplib::Response& res, const Service::Response& r) {
            res.status = r.status;
            res.set_content(r.body.dump(), "application/json");
        };
        server.Post("/api/generate", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.generate(req.body));
        });
        server.Post("/api/check", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.check(req.body));
        });
        server.Get("/api/prompts", [this, reply](const httplib::Request&, httplib::Response& res) {
            reply(res, service.prompts());
        });
        server.Get("/api/health", [this, reply](const httplib::Request&, httplib::Response& res) {
            reply(res, service.health());
        });
        server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        server.set_exception_handler([reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string what = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                what = e.what();
            } catch (...) {
            }
            reply(res, Service::Response{500, json{{"error", what}}});
        });
    }
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw std::runtime_error("cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace plantext
