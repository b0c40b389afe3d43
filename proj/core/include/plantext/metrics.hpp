#pragma once

// Evaluation quantities: validity and correctness rates, out-of-distribution
// ratio and spatial diversity (first Wasserstein distance between a layout's
// per-type floor-area histogram and the training-corpus mean), plus their
// per-prompt and per-category aggregation.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plantext/layout.hpp"
#include "plantext/semantics.hpp"

namespace plantext {

inline constexpr std::size_t kHistogramBins = kAllRoomTypes.size();
using Histogram = std::array<double, kHistogramBins>;

/// Floor area per room type in RoomType order, kept exact as doubled areas.
struct TypeAreaHistogram {
    std::array<std::int64_t, kHistogramBins> doubled_area{};
    std::int64_t doubled_total = 0;

    /// Normalized masses; they sum to one up to rounding.
    Histogram masses() const;
    friend bool operator==(const TypeAreaHistogram&, const TypeAreaHistogram&) = default;
};

TypeAreaHistogram area_histogram(const Layout& layout);

struct ReferenceStats {
    Histogram mean{};
    std::vector<CategoryKey> training_categories{kTrainingCategories.begin(), kTrainingCategories.end()};
    std::size_t layout_count = 0;
};

/// Arithmetic mean of the normalized histograms. Throws on an empty corpus.
ReferenceStats reference_stats(std::span<const Layout> corpus,
                               std::vector<CategoryKey> categories = {kTrainingCategories.begin(),
                                                                       kTrainingCategories.end()});

bool is_ood(const Layout& layout, const ReferenceStats& ref);
bool is_ood(CategoryKey category, const ReferenceStats& ref);

/// Earth mover's distance between two histograms over ordered bins with
/// ground distance |i - j|: the sum of absolute CDF differences.
double wasserstein_1d(const Histogram& p, const Histogram& q);

double spatial_diversity(const Layout& layout, const ReferenceStats& ref);

/// The k layouts farthest from the reference mean; ties go to the smaller
/// canonical serialization.
std::vector<Layout> top_diverse(std::span<const Layout> layouts, std::size_t k, const ReferenceStats& ref);

struct SampleRecord {
    std::string prompt_id;
    AnnotationCategory category = AnnotationCategory::RG;
    bool valid = false;
    bool correct = false;
    bool ood = false;
    double wasserstein = 0.0;  // meaningful only when valid
};

/// Sum-and-count accumulator; merging tallies is associative.
struct Tally {
    std::size_t samples = 0;
    std::size_t valid = 0;
    std::size_t correct = 0;
    std::size_t ood = 0;
    double wasserstein_in_sum = 0.0;
    std::size_t wasserstein_in_count = 0;
    double wasserstein_out_sum = 0.0;
    std::size_t wasserstein_out_count = 0;

    void add(const SampleRecord& r);
    void merge(const Tally& other);
};

struct PromptResult {
    std::string id;  // prompt id, or the category code for roll-up rows
    AnnotationCategory category = AnnotationCategory::RG;
    std::size_t n_samples = 0;
    std::size_t n_valid = 0;
    double validity_rate = 0.0;
    /// Denominator is the valid samples; unset when there are none.
    std::optional<double> correctness_rate;
    std::optional<double> ood_ratio;
    std::optional<double> wasserstein_in;
    std::optional<double> wasserstein_out;
};

PromptResult summarize(std::string id, AnnotationCategory category, const Tally& tally);

struct AggregateReport {
    std::vector<PromptResult> prompts;     // first-appearance order
    std::vector<PromptResult> categories;  // RG, RS, AP, AN, LU, LNU; empty ones omitted
    std::vector<std::string> warnings;
};

AggregateReport aggregate(std::span<const SampleRecord> records);

}  // namespace plantext
