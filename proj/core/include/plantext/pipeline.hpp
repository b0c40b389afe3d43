#pragma once

// Batch orchestration: the built-in evaluation prompt suite, synthetic
// training-corpus construction, and the evaluation harness with its CSV/JSON
// report forms.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plantext/genclient.hpp"
#include "plantext/layout.hpp"
#include "plantext/metrics.hpp"
#include "plantext/semantics.hpp"
#include "plantext/synthgen.hpp"
#include "plantext/validity.hpp"

namespace plantext {

struct SuitePrompt {
    std::string id;    // e.g. "AN.1", "RS.2*"
    std::string text;  // verbatim, typos included
    AnnotationCategory category = AnnotationCategory::RG;
};

/// The 58 evaluation prompts, in their published order.
std::span<const SuitePrompt> prompt_suite();

/// FNV-1a over "id\ttext\tcategory\n" for every suite prompt.
std::uint64_t prompt_suite_digest();

struct DatasetEntry {
    std::string prompt;
    std::string layout;  // canonical layout text
    CategoryKey category;
    std::uint64_t id = 0;  // layout id; shared by all entries of one layout
};

nlohmann::json to_json(const DatasetEntry& e);
DatasetEntry dataset_entry_from_json(const nlohmann::json& j);

class DatasetBuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DatasetSummary {
    std::size_t layouts = 0;
    std::size_t entries = 0;
    std::size_t generation_failures = 0;
    std::size_t duplicate_layouts = 0;  // regenerated, not emitted
    ReferenceStats stats;

    double annotations_per_layout() const {
        return layouts ? static_cast<double>(entries) / static_cast<double>(layouts) : 0.0;
    }
};

/// Generates `per_category` distinct layouts for every configured category
/// and writes one JSON line per (annotation, layout) pair to `out`.
/// Deterministic in (per_category, seed, cfg). Throws DatasetBuildError when
/// more than 10% of generation attempts fail.
DatasetSummary build_dataset(std::size_t per_category, std::uint64_t seed, std::ostream& out,
                             const GenConfig& cfg = {}, const ValidityOptions& opts = {});

/// File form: writes the JSONL corpus to `path` and the reference stats to
/// stats_path_for(path).
DatasetSummary build_dataset(std::size_t per_category, std::uint64_t seed, const std::filesystem::path& path,
                             const GenConfig& cfg = {}, const ValidityOptions& opts = {});

/// "corpus.jsonl" -> "corpus.stats.json"
std::filesystem::path stats_path_for(const std::filesystem::path& dataset);

ReferenceStats load_reference_stats(const std::filesystem::path& path);
void save_reference_stats(const ReferenceStats& stats, const std::filesystem::path& path);

/// Reference stats from a freshly generated corpus; used when no stats file
/// is configured.
ReferenceStats default_reference_stats(std::size_t per_category = 100, std::uint64_t seed = 0,
                                       const GenConfig& cfg = {});

struct EvalOptions {
    std::size_t samples_per_prompt = 100;
    std::uint64_t seed = 0;
    SamplingParams sampling;
    std::size_t workers = 1;
    ValidityOptions validity;
};

enum class PromptStatus { ok, unsatisfiable, generator_error };

std::string_view to_string(PromptStatus s);

struct PromptOutcome {
    SuitePrompt prompt;
    PromptStatus status = PromptStatus::ok;
    std::string error;
    PromptResult result;
    std::vector<SampleRecord> samples;
};

struct EvalReport {
    std::string generator;
    std::vector<PromptOutcome> prompts;    // suite order
    std::vector<PromptResult> categories;  // RG, RS, AP, AN, LU, LNU
    bool complete = true;                  // false after a generator failure
    std::vector<std::string> warnings;
};

/// Scores one generator completion against its prompt.
SampleRecord score_sample(const SuitePrompt& prompt, std::string_view completion, const ReferenceStats& ref,
                          const ValidityOptions& opts = {});

/// Per-prompt sampling is seeded with derive_seed(options.seed, fnv1a64(id)).
/// Prompts run on options.workers threads; the report does not depend on the
/// schedule.
EvalReport run_eval(Generator& generator, std::span<const SuitePrompt> suite, const EvalOptions& options,
                    const ReferenceStats& ref);

/// Header: scope,id,category,status,n_samples,n_valid,validity_rate,
/// correctness_rate,ood_ratio,wasserstein_in,wasserstein_out
std::string report_to_csv(const EvalReport& report);
nlohmann::json report_to_json(const EvalReport& report);

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Settings shared by the CLI and the service.
struct AppConfig {
    GenConfig synthgen;
    ValidityOptions validity;
    EndpointConfig endpoint;
    SamplingParams sampling;
    std::optional<std::filesystem::path> reference_stats;
    std::size_t samples_per_prompt = 100;
    std::size_t workers = 1;
    int baseline_attempt_cap = 1000;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string cors_origin = "*";
};

AppConfig app_config_from_json(const nlohmann::json& j);
/// Relative paths inside the file resolve against the file's directory.
AppConfig load_app_config(const std::filesystem::path& path);

}  // namespace plantext
