#include "plantext/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace plantext {

Histogram TypeAreaHistogram::masses() const {
    Histogram out{};
    if (doubled_total == 0) return out;
    for (std::size_t i = 0; i < kHistogramBins; ++i) {
        out[i] = static_cast<double>(doubled_area[i]) / static_cast<double>(doubled_total);
    }
    return out;
}

TypeAreaHistogram area_histogram(const Layout& layout) {
    TypeAreaHistogram h;
    for (const Room& r : layout.rooms) {
        const Area a = room_area(r);
        h.doubled_area[static_cast<std::size_t>(r.kind)] += a.doubled;
        h.doubled_total += a.doubled;
    }
    if (h.doubled_total == 0) throw std::invalid_argument("layout has zero total area");
    return h;
}

ReferenceStats reference_stats(std::span<const Layout> corpus, std::vector<CategoryKey> categories) {
    if (corpus.empty()) throw std::invalid_argument("reference corpus is empty");
    if (categories.empty()) throw std::invalid_argument("training category set is empty");
    ReferenceStats ref;
    ref.training_categories = std::move(categories);
    ref.layout_count = corpus.size();
    for (const Layout& l : corpus) {
        const Histogram m = area_histogram(l).masses();
        for (std::size_t i = 0; i < kHistogramBins; ++i) ref.mean[i] += m[i];
    }
    for (double& v : ref.mean) v /= static_cast<double>(corpus.size());
    return ref;
}

bool is_ood(CategoryKey category, const ReferenceStats& ref) {
    return std::find(ref.training_categories.begin(), ref.training_categories.end(), category) ==
           ref.training_categories.end();
}

bool is_ood(const Layout& layout, const ReferenceStats& ref) { return is_ood(category_of(layout), ref); }

double wasserstein_1d(const Histogram& p, const Histogram& q) {
    double cp = 0.0;
    double cq = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < kHistogramBins; ++i) {
        cp += p[i];
        cq += q[i];
        total += std::abs(cp - cq);
    }
    return total;
}

double spatial_diversity(const Layout& layout, const ReferenceStats& ref) {
    return wasserstein_1d(area_histogram(layout).masses(), ref.mean);
}

std::vector<Layout> top_diverse(std::span<const Layout> layouts, std::size_t k, const ReferenceStats& ref) {
    struct Scored {
        double distance;
        std::string text;
        std::size_t index;
    };
    std::vector<Scored> scored;
    scored.reserve(layouts.size());
    for (std::size_t i = 0; i < layouts.size(); ++i) {
        scored.push_back({spatial_diversity(layouts[i], ref), serialize_layout(layouts[i]), i});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.distance != b.distance) return a.distance > b.distance;
        return a.text < b.text;
    });
    std::vector<Layout> out;
    for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) out.push_back(layouts[scored[i].index]);
    return out;
}

void Tally::add(const SampleRecord& r) {
    ++samples;
    if (!r.valid) return;
    ++valid;
    correct += r.correct;
    ood += r.ood;
    if (r.ood) {
        wasserstein_out_sum += r.wasserstein;
        ++wasserstein_out_count;
    } else {
        wasserstein_in_sum += r.wasserstein;
        ++wasserstein_in_count;
    }
}

void Tally::merge(const Tally& o) {
    samples += o.samples;
    valid += o.valid;
    correct += o.correct;
    ood += o.ood;
    wasserstein_in_sum += o.wasserstein_in_sum;
    wasserstein_in_count += o.wasserstein_in_count;
    wasserstein_out_sum += o.wasserstein_out_sum;
    wasserstein_out_count += o.wasserstein_out_count;
}

PromptResult summarize(std::string id, AnnotationCategory category, const Tally& t) {
    PromptResult r;
    r.id = std::move(id);
    r.category = category;
    r.n_samples = t.samples;
    r.n_valid = t.valid;
    const auto ratio = [](double num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return num / static_cast<double>(den);
    };
    r.validity_rate = t.samples ? static_cast<double>(t.valid) / static_cast<double>(t.samples) : 0.0;
    r.correctness_rate = ratio(static_cast<double>(t.correct), t.valid);
    r.ood_ratio = ratio(static_cast<double>(t.ood), t.valid);
    r.wasserstein_in = ratio(t.wasserstein_in_sum, t.wasserstein_in_count);
    r.wasserstein_out = ratio(t.wasserstein_out_sum, t.wasserstein_out_count);
    return r;
}

AggregateReport aggregate(std::span<const SampleRecord> records) {
    AggregateReport report;
    std::vector<std::string> order;
    std::map<std::string, std::pair<AnnotationCategory, Tally>> by_prompt;
    std::map<AnnotationCategory, Tally> by_category;
    for (const SampleRecord& r : records) {
        auto [it, inserted] = by_prompt.try_emplace(r.prompt_id, r.category, Tally{});
        if (inserted) order.push_back(r.prompt_id);
        it->second.second.add(r);
        by_category[r.category].add(r);
    }
    for (const std::string& id : order) {
        const auto& [cat, tally] = by_prompt.at(id);
        report.prompts.push_back(summarize(id, cat, tally));
    }
    for (AnnotationCategory c : kAllCategories) {
        auto it = by_category.find(c);
        if (it == by_category.end() || it->second.samples == 0) {
            report.warnings.push_back("no samples for category " + std::string(to_string(c)));
            continue;
        }
        report.categories.push_back(summarize(std::string(to_string(c)), c, it->second));
    }
    return report;
}

}  // namespace plantext
