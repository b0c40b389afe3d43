#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plantext/json_io.hpp"
#include "plantext/pipeline.hpp"
#include "plantext/service.hpp"

namespace plantext::cli {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config;
    std::uint64_t seed = 0;
    std::optional<std::size_t> samples;
    std::string out;
    std::string format;
    std::string generator = "baseline";
    std::optional<std::size_t> workers;
    std::string file;
    std::size_t index = 1;
    std::optional<int> port;
    std::optional<std::string> host;
};

AppConfig load_config(const Options& o) { return o.config.empty() ? AppConfig{} : load_app_config(o.config); }

ReferenceStats load_stats(const AppConfig& cfg) {
    if (cfg.reference_stats) return load_reference_stats(*cfg.reference_stats);
    return default_reference_stats(100, 0, cfg.synthgen);
}

std::shared_ptr<Generator> make_generator(const Options& o, const AppConfig& cfg) {
    if (o.generator == "endpoint") return std::make_shared<EndpointGenerator>(cfg.endpoint);
    return std::make_shared<BaselineGenerator>(cfg.synthgen, cfg.baseline_attempt_cap, cfg.validity);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(f, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        lines.push_back(line);
    }
    return lines;
}

// Writes to --out when given, otherwise to `out`.
void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << text;
}

int cmd_synth(const Options& o, std::ostream& out) {
    const AppConfig cfg = load_config(o);
    if (o.out.empty()) throw UsageError("synth requires --out <dataset.jsonl>");
    const std::size_t per_category = o.samples.value_or(100);
    const DatasetSummary s = build_dataset(per_category, o.seed, std::filesystem::path(o.out), cfg.synthgen,
                                           cfg.validity);
    json summary = {{"dataset", o.out},
                    {"stats", stats_path_for(o.out).string()},
                    {"layouts", s.layouts},
                    {"entries", s.entries},
                    {"generation_failures", s.generation_failures},
                    {"duplicate_layouts", s.duplicate_layouts},
                    {"annotations_per_layout", s.annotations_per_layout()}};
    out << summary.dump(2) << '\n';
    return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
    const AppConfig cfg = load_config(o);
    const std::string format = o.format.empty() ? "csv" : o.format;
    EvalOptions opts;
    opts.samples_per_prompt = o.samples.value_or(cfg.samples_per_prompt);
    opts.seed = o.seed;
    opts.sampling = cfg.sampling;
    opts.workers = o.workers.value_or(cfg.workers);
    opts.validity = cfg.validity;
    const ReferenceStats ref = load_stats(cfg);
    const std::shared_ptr<Generator> gen = make_generator(o, cfg);
    const EvalReport report = run_eval(*gen, prompt_suite(), opts, ref);
    emit(o, out, format == "json" ? report_to_json(report).dump(2) + "\n" : report_to_csv(report));
    for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
    if (!report.complete) {
        err << "error: report incomplete after generator failures\n";
        return kExitError;
    }
    return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
    const AppConfig cfg = load_config(o);
    const std::string format = o.format.empty() ? "text" : o.format;
    const std::vector<std::string> lines = read_lines(o.file);
    std::ostringstream text;
    json all = json::array();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const ValidityReport report = validate_text(lines[i], cfg.validity);
        json entry = to_json(report);
        entry["line"] = i + 1;
        entry["annotations"] = json::array();
        text << "layout " << i + 1 << ": valid=" << (report.valid ? "true" : "false") << '\n';
        for (const Violation& v : report.violations) text << "  violation " << to_string(v.kind) << ": " << v.detail << '\n';
        if (report.valid) {
            const Layout layout = parse_layout(lines[i]);
            const AnnotationSet annotations = extract_annotations(layout, cfg.validity);
            entry["category"] = to_string(category_of(layout));
            entry["annotations"] = to_json(annotations);
            text << "  category " << to_string(category_of(layout)) << '\n';
            for (const Annotation& a : annotations) {
                text << "  [" << to_string(category_of(a)) << "] " << render_annotation(a) << '\n';
            }
        }
        all.push_back(std::move(entry));
    }
    emit(o, out, format == "json" ? all.dump(2) + "\n" : text.str());
    return kExitOk;
}

int cmd_render(const Options& o, std::ostream& out) {
    const AppConfig cfg = load_config(o);
    const std::vector<std::string> lines = read_lines(o.file);
    if (o.index == 0 || o.index > lines.size()) {
        throw std::runtime_error(o.file + " has no layout at line " + std::to_string(o.index));
    }
    emit(o, out, render_svg(parse_layout(lines[o.index - 1]), cfg.validity));
    return kExitOk;
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const Options& o, std::ostream& out) {
    const AppConfig cfg = load_config(o);
    ServiceConfig sc;
    sc.generator = make_generator(o, cfg);
    sc.stats = load_stats(cfg);
    sc.validity = cfg.validity;
    sc.sampling = cfg.sampling;
    sc.cors_origin = cfg.cors_origin;
    const Service service(std::move(sc));
    HttpServer server(service);
    const std::string host = o.host.value_or(cfg.host);
    const int port = server.bind(host, o.port.value_or(cfg.port));
    out << "listening on http://" << host << ':' << port << std::endl;
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.run();
    g_server = nullptr;
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"plantext: floor-plan layout language toolkit"};
    app.require_subcommand(1);
    Options o;

    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    };
    const auto add_format = [&](CLI::App* sub, std::vector<std::string> allowed) {
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember(std::move(allowed)));
    };

    CLI::App* synth = app.add_subcommand("synth", "Build a synthetic prompt/layout dataset");
    add_config(synth);
    synth->add_option("--seed", o.seed, "Run seed");
    synth->add_option("--samples", o.samples, "Layouts per category (default 100)")->check(CLI::PositiveNumber);
    synth->add_option("--out", o.out, "Dataset path (.jsonl); stats go next to it");

    CLI::App* eval = app.add_subcommand("eval", "Score a generator on the built-in prompt suite");
    add_config(eval);
    eval->add_option("--seed", o.seed, "Run seed");
    eval->add_option("--samples", o.samples, "Samples per prompt")->check(CLI::PositiveNumber);
    eval->add_option("--out", o.out, "Report path (default stdout)");
    add_format(eval, {"csv", "json"});
    eval->add_option("--generator", o.generator, "baseline or endpoint")
        ->check(CLI::IsMember({"baseline", "endpoint"}));
    eval->add_option("--workers", o.workers, "Prompt-level worker threads")->check(CLI::PositiveNumber);

    CLI::App* check = app.add_subcommand("check", "Validate and annotate layouts, one per line");
    add_config(check);
    check->add_option("file", o.file, "Layout file")->required();
    check->add_option("--out", o.out, "Output path (default stdout)");
    add_format(check, {"text", "json"});

    CLI::App* render = app.add_subcommand("render", "Render one layout as SVG");
    add_config(render);
    render->add_option("file", o.file, "Layout file")->required();
    render->add_option("--index", o.index, "1-based layout line to render")->check(CLI::PositiveNumber);
    render->add_option("--out", o.out, "SVG path (default stdout)");

    CLI::App* serve = app.add_subcommand("serve", "Start the HTTP service");
    add_config(serve);
    serve->add_option("--port", o.port, "Listen port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve->add_option("--host", o.host, "Listen address");
    serve->add_option("--generator", o.generator, "baseline or endpoint")
        ->check(CLI::IsMember({"baseline", "endpoint"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*synth) return cmd_synth(o, out);
        if (*eval) return cmd_eval(o, out, err);
        if (*check) return cmd_check(o, out);
        if (*render) return cmd_render(o, out);
        if (*serve) return cmd_serve(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}

}  // namespace plantext::cli
