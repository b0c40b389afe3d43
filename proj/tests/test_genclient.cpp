#include "doctest.h"

#include <cstdlib>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "plantext/genclient.hpp"
#include "plantext/pipeline.hpp"
#include "stub_server.hpp"

using namespace plantext;
using nlohmann::json;

namespace {

EndpointConfig fast_config(const std::string& url) {
    EndpointConfig cfg;
    cfg.base_url = url;
    cfg.timeout = std::chrono::milliseconds(2000);
    cfg.retry.initial_backoff = std::chrono::milliseconds(1);
    cfg.retry.max_backoff = std::chrono::milliseconds(4);
    return cfg;
}

void reply(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

}  // namespace

TEST_CASE("sampling parameter checks") {
    CHECK_NOTHROW(check_params(SamplingParams{}));
    CHECK_THROWS(check_params(SamplingParams{0.0, 0.9, 512, 1, {}}));
    CHECK_THROWS(check_params(SamplingParams{1.0, 0.0, 512, 1, {}}));
    CHECK_THROWS(check_params(SamplingParams{1.0, 1.5, 512, 1, {}}));
    CHECK_THROWS(check_params(SamplingParams{1.0, 0.9, 0, 1, {}}));
    CHECK_THROWS(check_params(SamplingParams{1.0, 0.9, 512, 0, {}}));
}

TEST_CASE("wire format") {
    EndpointConfig cfg;
    const json req = json::parse(encode_request(cfg, "a house with five rooms", SamplingParams{0.7, 0.95, 256, 2, 9}));
    CHECK(req == json{{"prompt", "a house with five rooms"}, {"temperature", 0.7}, {"top_p", 0.95}, {"max_tokens", 256}, {"n", 2}});
    cfg.schema = WireSchema::openai_completions;
    cfg.model = "m";
    CHECK(json::parse(encode_request(cfg, "p", SamplingParams{}))["model"] == "m");

    CHECK(decode_response(WireSchema::neutral, R"({"completions":["a","b"]})") == std::vector<std::string>{"a", "b"});
    CHECK(decode_response(WireSchema::openai_completions, R"({"choices":[{"text":"x","index":0}]})") ==
          std::vector<std::string>{"x"});
    for (const char* bad : {"", "[]", "{}", R"({"completions":"a"})", R"({"completions":[1]})"}) {
        try {
            decode_response(WireSchema::neutral, bad);
            FAIL("expected malformed_response");
        } catch (const GeneratorError& e) {
            CHECK(e.kind() == GeneratorError::Kind::malformed_response);
            CHECK_FALSE(e.retryable());
        }
    }
}

TEST_CASE("backoff doubles up to its cap") {
    RetryPolicy p;
    CHECK(p.backoff(0).count() == 200);
    CHECK(p.backoff(1).count() == 400);
    CHECK(p.backoff(3).count() == 1600);
    CHECK(p.backoff(10).count() == 5000);
}

TEST_CASE("endpoint passes completions through verbatim") {
    StubServer stub([](const httplib::Request&, httplib::Response& res, int) {
        reply(res, {{"completions", {"bedroom: (0,0),(1,0)", "not a layout"}}});
    });
    EndpointGenerator gen(fast_config(stub.url()));
    const auto out = gen.generate("a house with five rooms", SamplingParams{1.0, 0.9, 512, 2, {}});
    CHECK(out == std::vector<std::string>{"bedroom: (0,0),(1,0)", "not a layout"});
    const json sent = json::parse(stub.last_body());
    CHECK(sent["prompt"] == "a house with five rooms");
    CHECK(sent["n"] == 2);
    CHECK(stub.last_auth().empty());
}

TEST_CASE("two server errors, then success") {
    StubServer stub([](const httplib::Request&, httplib::Response& res, int call) {
        if (call < 2) {
            res.status = 500;
            return;
        }
        reply(res, {{"completions", {"ok"}}});
    });
    EndpointGenerator gen(fast_config(stub.url()));
    CHECK(gen.generate("p", SamplingParams{}) == std::vector<std::string>{"ok"});
    CHECK(stub.calls() == 3);
}

TEST_CASE("retry exhaustion reports attempts") {
    StubServer stub([](const httplib::Request&, httplib::Response& res, int) { res.status = 503; });
    EndpointConfig cfg = fast_config(stub.url());
    cfg.retry.max_retries = 2;
    EndpointGenerator gen(cfg);
    try {
        gen.generate("p", SamplingParams{});
        FAIL("expected error");
    } catch (const GeneratorError& e) {
        CHECK(e.kind() == GeneratorError::Kind::http_status);
        CHECK(e.http_status() == 503);
        CHECK(e.attempts() == 3);
        CHECK(std::string(e.what()) == "http_status: HTTP 503");
    }
    CHECK(stub.calls() == 3);
}

TEST_CASE("non-retryable failures stop at once") {
    SUBCASE("client error") {
        StubServer stub([](const httplib::Request&, httplib::Response& res, int) { res.status = 400; });
        EndpointGenerator gen(fast_config(stub.url()));
        CHECK_THROWS_AS(gen.generate("p", SamplingParams{}), GeneratorError);
        CHECK(stub.calls() == 1);
    }
    SUBCASE("rejected credentials") {
        StubServer stub([](const httplib::Request&, httplib::Response& res, int) { res.status = 401; });
        EndpointGenerator gen(fast_config(stub.url()));
        try {
            gen.generate("p", SamplingParams{});
            FAIL("expected error");
        } catch (const GeneratorError& e) {
            CHECK(e.kind() == GeneratorError::Kind::auth);
        }
        CHECK(stub.calls() == 1);
    }
    SUBCASE("wrong completion count") {
        StubServer stub([](const httplib::Request&, httplib::Response& res, int) { reply(res, {{"completions", {"a"}}}); });
        EndpointGenerator gen(fast_config(stub.url()));
        try {
            gen.generate("p", SamplingParams{1.0, 0.9, 512, 3, {}});
            FAIL("expected error");
        } catch (const GeneratorError& e) {
            CHECK(e.kind() == GeneratorError::Kind::malformed_response);
        }
        CHECK(stub.calls() == 1);
    }
    SUBCASE("missing token variable") {
        StubServer stub([](const httplib::Request&, httplib::Response& res, int) { reply(res, {{"completions", {"a"}}}); });
        EndpointConfig cfg = fast_config(stub.url());
        cfg.auth_env = "PLANTEXT_TEST_TOKEN_UNSET";
        ::unsetenv("PLANTEXT_TEST_TOKEN_UNSET");
        EndpointGenerator gen(cfg);
        CHECK_THROWS_AS(gen.generate("p", SamplingParams{}), GeneratorError);
        CHECK(stub.calls() == 0);
    }
}

TEST_CASE("bearer token from the environment") {
    StubServer stub([](const httplib::Request&, httplib::Response& res, int) {
        reply(res, {{"choices", {{{"text", "t"}}}}});
    });
    ::setenv("PLANTEXT_TEST_TOKEN", "s3cret", 1);
    EndpointConfig cfg = fast_config(stub.url());
    cfg.auth_env = "PLANTEXT_TEST_TOKEN";
    cfg.schema = WireSchema::openai_completions;
    EndpointGenerator gen(cfg);
    CHECK(gen.generate("p", SamplingParams{}) == std::vector<std::string>{"t"});
    CHECK(stub.last_auth() == "Bearer s3cret");
}

TEST_CASE("unreachable endpoint is a transport error") {
    EndpointConfig cfg = fast_config("http://127.0.0.1:1");
    cfg.retry.max_retries = 1;
    EndpointGenerator gen(cfg);
    try {
        gen.generate("p", SamplingParams{});
        FAIL("expected error");
    } catch (const GeneratorError& e) {
        CHECK(e.retryable());
        CHECK(e.attempts() == 2);
    }
}

TEST_CASE("in-flight requests stay within the bound") {
    std::atomic<int> active{0}, peak{0};
    StubServer stub([&](const httplib::Request&, httplib::Response& res, int) {
        const int now = ++active;
        int seen = peak.load();
        while (now > seen && !peak.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        --active;
        reply(res, {{"completions", {"x"}}});
    });
    EndpointConfig cfg = fast_config(stub.url());
    cfg.max_in_flight = 2;
    EndpointGenerator gen(cfg);
    std::vector<std::jthread> threads;
    for (int i = 0; i < 6; ++i) threads.emplace_back([&] { gen.generate("p", SamplingParams{}); });
    threads.clear();
    CHECK(stub.calls() == 6);
    CHECK(peak.load() <= 2);
}

TEST_CASE("baseline outputs are valid and correct") {
    BaselineGenerator gen;
    SamplingParams params;
    params.n = 3;
    params.seed = 5;
    const auto a = gen.generate("a house with two bedrooms and one bathroom", params);
    CHECK(a == gen.generate("a house with two bedrooms and one bathroom", params));
    REQUIRE(a.size() == 3);
    for (const std::string& text : a) {
        const Layout l = parse_layout(text);
        CHECK(validate(l).valid);
        CHECK(category_of(l) == CategoryKey{2, 1});
    }
    const std::string s = baseline_generate("the kitchen is not adjacent to the bathroom", 1);
    CHECK(check_correctness("the kitchen is not adjacent to the bathroom", parse_layout(s)));
    CHECK_THROWS_AS(baseline_generate("make me a castle", 1), PromptParseError);
}

TEST_CASE("baseline reports unsatisfiable prompts") {
    // Kitchens are unique by construction, so "a kitchen" can never hold.
    CHECK_THROWS_AS(baseline_generate("a kitchen is adjacent to the bedroom", 1), UnsatisfiableError);
    CHECK_THROWS_AS(baseline_generate("a house with one room", 1), UnsatisfiableError);
    try {
        baseline_generate("a house with ten rooms", 1, 1);
    } catch (const UnsatisfiableError& e) {
        CHECK(e.attempts() == 1);
    }
}

TEST_CASE("baseline covers every suite prompt") {
    BaselineGenerator gen;
    SamplingParams params;
    params.n = 2;
    params.seed = 17;
    for (const SuitePrompt& p : prompt_suite()) {
        INFO(p.id);
        for (const std::string& text : gen.generate(p.text, params)) {
            const Layout l = parse_layout(text);
            CHECK(validate(l).valid);
            CHECK(check_correctness(p.text, l));
        }
    }
}
