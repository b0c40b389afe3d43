#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "plantext");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = plantext::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path = fs::temp_directory_path() / ("plantext_cli_" + std::to_string(::getpid()));
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return (path / name).string();
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"eval", "--bogus"}).code == 2);
    CHECK(run({"eval", "--generator", "oracle"}).code == 2);
    CHECK(run({"serve", "--port", "70000"}).code == 2);
    CHECK(run({"check"}).code == 2);
    const Run s = run({"synth"});
    CHECK(s.code == 2);
    CHECK(s.err.find("--out") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("check") {
    TempDir dir;
    const std::string file = dir.write("layouts.txt",
                                       "bedroom: (13,12),(8,12),(8,9),(13,9)\n\n"
                                       "bedroom: (0,0),(10,0),(10,10),(0,10), bathroom: (10,0),(20,0),(20,10)\n");
    const Run r = run({"check", file});
    CHECK(r.code == 0);
    CHECK(r.out.find("layout 1: valid=true\n") != std::string::npos);
    CHECK(r.out.find("  category 1/0\n") != std::string::npos);
    CHECK(r.out.find("  [RG] a house with one room\n") != std::string::npos);
    CHECK(r.out.find("layout 2: valid=false\n") != std::string::npos);
    CHECK(r.out.find("  violation ") != std::string::npos);

    const Run j = run({"check", file, "--format", "json"});
    REQUIRE(j.code == 0);
    const auto arr = nlohmann::json::parse(j.out);
    REQUIRE(arr.size() == 2);
    CHECK(arr[0]["valid"] == true);
    CHECK(arr[1]["valid"] == false);
    CHECK(arr[1]["line"] == 2);

    CHECK(run({"check", (dir.path / "missing.txt").string()}).code == 1);
}

TEST_CASE("render") {
    TempDir dir;
    const std::string file = dir.write("one.txt", "bedroom: (13,12),(8,12),(8,9),(13,9)\n");
    const Run r = run({"render", file});
    CHECK(r.code == 0);
    CHECK(r.out.find("points=\"13,244 8,244 8,247 13,247\"") != std::string::npos);
    const std::string svg = (dir.path / "one.svg").string();
    CHECK(run({"render", file, "--out", svg}).code == 0);
    CHECK(slurp(svg) == r.out);
    CHECK(run({"render", file, "--index", "2"}).code == 1);
    const std::string bad = dir.write("bad.txt", "bedroom: (0,0),(10,0),(10,10)\n");
    CHECK(run({"render", bad}).code == 1);
}

TEST_CASE("eval with the baseline") {
    const Run r = run({"eval", "--generator", "baseline", "--samples", "5", "--seed", "3"});
    CHECK(r.code == 0);
    std::size_t lines = 0;
    for (char c : r.out) lines += c == '\n';
    CHECK(lines == 65);
    CHECK(r.out.rfind("scope,id,category,status,", 0) == 0);
    CHECK(r.out.find(",generator_error,") == std::string::npos);
    CHECK(run({"eval", "--generator", "baseline", "--samples", "5", "--seed", "3", "--workers", "2"}).out == r.out);

    const Run j = run({"eval", "--samples", "2", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["generator"] == "baseline");
    CHECK(doc["prompts"].size() == 58);
}

TEST_CASE("eval against a dead endpoint reports incomplete") {
    TempDir dir;
    const std::string cfg = dir.write(
        "cfg.json", R"({"endpoint":{"base_url":"http://127.0.0.1:1","retry":{"max_retries":0},"timeout_ms":500}})");
    const Run r = run({"eval", "--config", cfg, "--generator", "endpoint", "--samples", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("incomplete") != std::string::npos);
}

TEST_CASE("synth") {
    TempDir dir;
    const std::string out = (dir.path / "corpus.jsonl").string();
    const Run r = run({"synth", "--samples", "4", "--seed", "2", "--out", out});
    REQUIRE(r.code == 0);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary["layouts"] == 24);
    CHECK(fs::exists(dir.path / "corpus.stats.json"));
    std::ifstream f(out);
    std::size_t lines = 0;
    for (std::string l; std::getline(f, l);) ++lines;
    CHECK(lines == summary["entries"].get<std::size_t>());
}
