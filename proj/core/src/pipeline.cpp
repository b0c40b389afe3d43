#include "plantext/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "plantext/json_io.hpp"
#include "plantext/rng.hpp"

namespace plantext {

using nlohmann::json;

json to_json(const DatasetEntry& e) {
    return {{"prompt", e.prompt}, {"layout", e.layout}, {"category", to_string(e.category)}, {"id", e.id}};
}

DatasetEntry dataset_entry_from_json(const json& j) {
    DatasetEntry e;
    e.prompt = j.at("prompt").get<std::string>();
    e.layout = j.at("layout").get<std::string>();
    e.category = category_from_string(j.at("category").get<std::string>());
    e.id = j.at("id").get<std::uint64_t>();
    return e;
}

DatasetSummary build_dataset(std::size_t per_category, std::uint64_t seed, std::ostream& out, const GenConfig& cfg,
                             const ValidityOptions& opts) {
    check_config(cfg);
    DatasetSummary summary;
    std::vector<Layout> corpus;
    corpus.reserve(per_category * cfg.categories.size());
    std::unordered_set<std::string> seen;
    std::uint64_t stream = 0;
    std::size_t attempts = 0;

    for (CategoryKey category : cfg.categories) {
        std::size_t made = 0;
        const std::size_t cap = 20 * per_category + 20;
        for (std::size_t tries = 0; made < per_category; ++tries) {
            if (tries >= cap) {
                throw DatasetBuildError("could not produce " + std::to_string(per_category) +
                                        " distinct layouts for category " + to_string(category));
            }
            ++attempts;
            const std::uint64_t layout_seed = derive_seed(seed, stream++);
            Layout layout;
            try {
                layout = generate_layout(sample_spec(category, layout_seed, cfg), cfg);
            } catch (const GenFailure&) {
                ++summary.generation_failures;
                continue;
            }
            std::string text = serialize_layout(layout);
            if (!seen.insert(text).second) {
                ++summary.duplicate_layouts;
                continue;
            }
            ++made;

            const std::uint64_t id = summary.layouts++;
            std::set<std::string> prompts;
            for (const Annotation& a : extract_annotations(layout, opts)) prompts.insert(render_annotation(a));
            std::vector<std::string> shuffled(prompts.begin(), prompts.end());
            Rng rng(derive_seed(seed ^ 0x5348554646ULL, id));
            rng.shuffle(std::span<std::string>(shuffled));
            for (std::string& p : shuffled) {
                out << to_json(DatasetEntry{std::move(p), text, category, id}).dump() << '\n';
                ++summary.entries;
            }
            corpus.push_back(std::move(layout));
        }
    }

    if (attempts > 0 && summary.generation_failures * 10 > attempts) {
        throw DatasetBuildError(std::to_string(summary.generation_failures) + " of " + std::to_string(attempts) +
                                " generation attempts failed (limit 10%)");
    }
    if (!corpus.empty()) summary.stats = reference_stats(corpus, cfg.categories);
    return summary;
}

std::filesystem::path stats_path_for(const std::filesystem::path& dataset) {
    std::filesystem::path p = dataset;
    p.replace_extension(".stats.json");
    return p;
}

void save_reference_stats(const ReferenceStats& stats, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << to_json(stats).dump(2) << '\n';
}

ReferenceStats load_reference_stats(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    return reference_stats_from_json(json::parse(f));
}

DatasetSummary build_dataset(std::size_t per_category, std::uint64_t seed, const std::filesystem::path& path,
                             const GenConfig& cfg, const ValidityOptions& opts) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    DatasetSummary summary = build_dataset(per_category, seed, f, cfg, opts);
    f.close();
    save_reference_stats(summary.stats, stats_path_for(path));
    return summary;
}

ReferenceStats default_reference_stats(std::size_t per_category, std::uint64_t seed, const GenConfig& cfg) {
    std::vector<Layout> corpus;
    std::uint64_t stream = 0;
    for (CategoryKey category : cfg.categories) {
        for (std::size_t made = 0, tries = 0; made < per_category && tries < 20 * per_category + 20; ++tries) {
            try {
                corpus.push_back(generate_layout(sample_spec(category, derive_seed(seed, stream++), cfg), cfg));
                ++made;
            } catch (const GenFailure&) {
            }
        }
    }
    return reference_stats(corpus, cfg.categories);
}

std::string_view to_string(PromptStatus s) {
    switch (s) {
        case PromptStatus::ok: return "ok";
        case PromptStatus::unsatisfiable: return "unsatisfiable";
        case PromptStatus::generator_error: return "generator_error";
    }
    return "unknown";
}

SampleRecord score_sample(const SuitePrompt& prompt, std::string_view completion, const ReferenceStats& ref,
                          const ValidityOptions& opts) {
    SampleRecord r;
    r.prompt_id = prompt.id;
    r.category = prompt.category;
    Layout layout;
    try {
        layout = parse_layout(completion);
    } catch (const ParseError&) {
        return r;
    }
    if (!validate(layout, opts).valid) return r;
    r.valid = true;
    try {
        r.correct = check_correctness(prompt.text, layout, opts);
    } catch (const PromptParseError&) {
        r.correct = false;
    }
    r.ood = is_ood(layout, ref);
    r.wasserstein = spatial_diversity(layout, ref);
    return r;
}

EvalReport run_eval(Generator& generator, std::span<const SuitePrompt> suite, const EvalOptions& options,
                    const ReferenceStats& ref) {
    EvalReport report;
    report.generator = generator.name();
    report.prompts.resize(suite.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t i = next++; i < suite.size(); i = next++) {
            PromptOutcome& outcome = report.prompts[i];
            outcome.prompt = suite[i];
            SamplingParams params = options.sampling;
            params.n = static_cast<int>(options.samples_per_prompt);
            params.seed = derive_seed(options.seed, fnv1a64(suite[i].id));
            try {
                for (const std::string& c : generator.generate(suite[i].text, params)) {
                    outcome.samples.push_back(score_sample(suite[i], c, ref, options.validity));
                }
            } catch (const UnsatisfiableError& e) {
                outcome.status = PromptStatus::unsatisfiable;
                outcome.error = e.what();
            } catch (const PromptParseError& e) {
                outcome.status = PromptStatus::unsatisfiable;
                outcome.error = e.what();
            } catch (const GeneratorError& e) {
                outcome.status = PromptStatus::generator_error;
                outcome.error = e.what();
            }
            Tally tally;
            for (const SampleRecord& s : outcome.samples) tally.add(s);
            outcome.result = summarize(suite[i].id, suite[i].category, tally);
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, suite.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    std::vector<SampleRecord> all;
    for (const PromptOutcome& o : report.prompts) {
        if (o.status == PromptStatus::generator_error) report.complete = false;
        if (o.status != PromptStatus::ok) report.warnings.push_back(o.prompt.id + ": " + o.error);
        all.insert(all.end(), o.samples.begin(), o.samples.end());
    }
    AggregateReport agg = aggregate(all);
    report.categories = std::move(agg.categories);
    report.warnings.insert(report.warnings.end(), agg.warnings.begin(), agg.warnings.end());
    return report;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

std::string csv_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

void csv_row(std::ostringstream& out, std::string_view scope, const PromptResult& r, std::string_view status) {
    out << scope << ',' << r.id << ',' << to_string(r.category) << ',' << status << ',' << r.n_samples << ','
        << r.n_valid << ',' << (r.n_samples ? format_number(r.validity_rate) : std::string()) << ','
        << csv_optional(r.correctness_rate) << ',' << csv_optional(r.ood_ratio) << ','
        << csv_optional(r.wasserstein_in) << ',' << csv_optional(r.wasserstein_out) << '\n';
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "scope,id,category,status,n_samples,n_valid,validity_rate,correctness_rate,ood_ratio,wasserstein_in,"
           "wasserstein_out\n";
    for (const PromptOutcome& o : report.prompts) csv_row(out, "prompt", o.result, to_string(o.status));
    for (const PromptResult& c : report.categories) csv_row(out, "category", c, "ok");
    return out.str();
}

json report_to_json(const EvalReport& report) {
    json prompts = json::array();
    for (const PromptOutcome& o : report.prompts) {
        json row = to_json(o.result);
        row["text"] = o.prompt.text;
        row["status"] = std::string(to_string(o.status));
        if (!o.error.empty()) row["error"] = o.error;
        prompts.push_back(std::move(row));
    }
    json categories = json::array();
    for (const PromptResult& c : report.categories) categories.push_back(to_json(c));
    return {{"generator", report.generator},
            {"complete", report.complete},
            {"prompts", std::move(prompts)},
            {"categories", std::move(categories)},
            {"warnings", report.warnings}};
}

AppConfig app_config_from_json(const json& j) {
    AppConfig c;
    if (j.contains("synthgen")) c.synthgen = gen_config_from_json(j.at("synthgen"));
    if (j.contains("validity")) c.validity.min_shared_wall = j.at("validity").value("min_shared_wall", c.validity.min_shared_wall);
    if (j.contains("endpoint")) c.endpoint = endpoint_config_from_json(j.at("endpoint"));
    if (j.contains("sampling")) c.sampling = sampling_params_from_json(j.at("sampling"), c.sampling);
    if (j.contains("reference_stats") && !j.at("reference_stats").is_null()) {
        c.reference_stats = j.at("reference_stats").get<std::string>();
    }
    c.samples_per_prompt = j.value("samples_per_prompt", c.samples_per_prompt);
    c.workers = j.value("workers", c.workers);
    c.baseline_attempt_cap = j.value("baseline_attempt_cap", c.baseline_attempt_cap);
    if (j.contains("service")) {
        const json& s = j.at("service");
        c.host = s.value("host", c.host);
        c.port = s.value("port", c.port);
        c.cors_origin = s.value("cors_origin", c.cors_origin);
    }
    check_params(c.sampling);
    return c;
}

AppConfig load_app_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config " + path.string());
    AppConfig c = app_config_from_json(json::parse(f));
    if (c.reference_stats && c.reference_stats->is_relative()) {
        c.reference_stats = path.parent_path() / *c.reference_stats;
    }
    return c;
}

}  // namespace plantext
