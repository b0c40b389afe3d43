#include "doctest.h"

#include <regex>
#include <thread>

#include "httplib.h"
#include "oracles.hpp"
#include "plantext/pipeline.hpp"
#include "plantext/service.hpp"

using namespace plantext;
using nlohmann::json;

namespace {

constexpr const char* kBedroom = "bedroom: (13,12),(8,12),(8,9),(13,9)";

class ThrowingGenerator final : public Generator {
public:
    std::vector<std::string> generate(std::string_view, const SamplingParams&) override {
        throw GeneratorError(GeneratorError::Kind::timeout, "no answer", 0, 5);
    }
    std::string name() const override { return "broken"; }
};

Service make_service(std::shared_ptr<Generator> gen) {
    ServiceConfig cfg;
    cfg.generator = std::move(gen);
    cfg.max_samples = 8;
    return Service(std::move(cfg));
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("svg rendering") {
    const std::string svg = render_svg(parse_layout(kBedroom));
    CHECK(svg.find("viewBox=\"0 0 256 256\"") != std::string::npos);
    CHECK(svg.find("points=\"13,244 8,244 8,247 13,247\"") != std::string::npos);
    CHECK(svg.find("fill=\"#ffb703\"") != std::string::npos);
    CHECK(svg.find(">bedroom</text>") != std::string::npos);
    CHECK(svg.find("x=\"10.5\" y=\"245.5\"") != std::string::npos);

    const std::string six = std::string(oracle::kFixture21) + ", corridor: (160,96),(192,96),(192,112),(160,112)";
    const Layout l = parse_layout(six);
    REQUIRE(validate(l).valid);
    const std::string doc = render_svg(l);
    CHECK(count(doc, "<polygon") == 6);
    CHECK(count(doc, "<text") == 6);
    CHECK(count(doc, ">living room</text>") == 1);
    CHECK(count(doc, "class=\"bedroom\"") == 2);
    CHECK(doc == render_svg(parse_layout(six)));
    CHECK_THROWS_AS(render_svg(parse_layout("bedroom: (0,0),(10,0),(10,10)")), InvalidLayoutError);
}

TEST_CASE("generate handler") {
    const Service svc = make_service(std::make_shared<BaselineGenerator>());
    const auto r = svc.generate(R"({"prompt":"a house with two bedrooms and one bathroom","n":3,"seed":4})");
    REQUIRE(r.status == 200);
    REQUIRE(r.body["items"].size() == 3);
    for (const json& item : r.body["items"]) {
        CHECK(item["valid"] == true);
        CHECK(item["correct"] == true);
        CHECK(item["violations"].empty());
        CHECK(item["svg"].get<std::string>().rfind("<svg", 0) == 0);
        CHECK(item["spatial_diversity"].is_number());
        CHECK(item["category"].is_string());
    }
    const auto again = svc.generate(R"({"prompt":"a house with two bedrooms and one bathroom","n":3,"seed":4})");
    CHECK(again.body == r.body);

    CHECK(svc.generate("not json").status == 400);
    CHECK(svc.generate(R"({"n":2})").status == 400);
    CHECK(svc.generate(R"({"prompt":"paint it blue"})").status == 400);
    CHECK(svc.generate(R"({"prompt":"a house with five rooms","n":0})").status == 400);
    CHECK(svc.generate(R"({"prompt":"a house with five rooms","n":9})").status == 400);
    CHECK(svc.generate(R"({"prompt":"a house with five rooms","sampling":{"temperature":-1}})").status == 400);
    const auto unsat = svc.generate(R"({"prompt":"a kitchen is adjacent to the bathroom"})");
    CHECK(unsat.status == 422);
    CHECK(unsat.body.contains("error"));

    const Service broken = make_service(std::make_shared<ThrowingGenerator>());
    const auto bad = broken.generate(R"({"prompt":"a house with five rooms"})");
    CHECK(bad.status == 502);
    CHECK(bad.body["error"].get<std::string>().find("no answer") != std::string::npos);
}

TEST_CASE("invalid completions are described, not rejected") {
    const Service svc = make_service(std::make_shared<oracle::FixedGenerator>("bedroom: (0,0),(10,0)"));
    const auto r = svc.generate(R"({"prompt":"a house with five rooms","n":2})");
    REQUIRE(r.status == 200);
    for (const json& item : r.body["items"]) {
        CHECK(item["valid"] == false);
        CHECK(item["correct"] == false);
        CHECK_FALSE(item["violations"].empty());
        CHECK(item["svg"].is_null());
        CHECK(item["category"].is_null());
    }
}

TEST_CASE("prompts check and health handlers") {
    const Service svc = make_service(std::make_shared<BaselineGenerator>());
    const auto p = svc.prompts();
    CHECK(p.status == 200);
    REQUIRE(p.body["prompts"].size() == 58);
    CHECK(p.body["prompts"][0] == json{{"id", "AN.1"}, {"text", "the bedroom is not adjacent to the living room"},
                                       {"category", "AN"}});

    const auto c = svc.check(json{{"layout", kBedroom}}.dump());
    CHECK(c.status == 200);
    CHECK(c.body["valid"] == true);
    CHECK(c.body["category"] == "1/0");
    REQUIRE(c.body["annotations"].size() == 1);
    CHECK(c.body["annotations"][0]["text"] == "a house with one room");
    CHECK(c.body["svg"].is_string());

    const auto bad = svc.check(json{{"layout", "bedroom: (0,0),(10,0),(10,10),(0,10), bathroom: (40,0),(50,0),(50,10),(40,10)"}}.dump());
    CHECK(bad.status == 200);
    CHECK(bad.body["valid"] == false);
    CHECK(bad.body["annotations"].empty());
    CHECK(svc.check(R"({"layout":3})").status == 400);

    const auto h = svc.health();
    CHECK(h.body == json{{"status", "ok"}, {"generator", "baseline"}});
}

TEST_CASE("http round trip") {
    const Service svc = make_service(std::make_shared<BaselineGenerator>());
    HttpServer server(svc);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread t([&] { server.run(); });

    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);
    httplib::Result h;
    for (int i = 0; i < 50 && !h; ++i) {
        h = client.Get("/api/health");
        if (!h) std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    REQUIRE(h);
    CHECK(h->status == 200);
    CHECK(h->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(json::parse(h->body)["status"] == "ok");

    auto g = client.Post("/api/generate", R"({"prompt":"a house with six rooms","n":2,"seed":1})", "application/json");
    REQUIRE(g);
    CHECK(g->status == 200);
    CHECK(json::parse(g->body)["items"].size() == 2);

    auto c = client.Post("/api/check", json{{"layout", kBedroom}}.dump(), "application/json");
    REQUIRE(c);
    CHECK(json::parse(c->body)["valid"] == true);

    auto p = client.Get("/api/prompts");
    REQUIRE(p);
    CHECK(json::parse(p->body)["prompts"].size() == 58);

    auto bad = client.Post("/api/generate", "{", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto pre = client.Options("/api/generate");
    REQUIRE(pre);
    CHECK(pre->status == 204);

    server.stop();
    t.join();
}
