#include "doctest.h"

#include <numeric>

#include "oracles.hpp"
#include "plantext/metrics.hpp"
#include "plantext/rng.hpp"
#include "plantext/synthgen.hpp"

using namespace plantext;

namespace {

Room rect(RoomType t, int x0, int y0, int x1, int y1) {
    return Room{t, {{x1, y1}, {x0, y1}, {x0, y0}, {x1, y0}}};
}

Histogram random_histogram(Rng& rng) {
    Histogram h{};
    double total = 0;
    for (double& v : h) {
        v = rng.bernoulli(0.2) ? 0.0 : rng.unit();
        total += v;
    }
    if (total == 0) h[0] = total = 1;
    for (double& v : h) v /= total;
    return h;
}

SampleRecord record(std::string id, AnnotationCategory c, bool valid, bool correct, bool ood, double w) {
    return SampleRecord{std::move(id), c, valid, correct, ood, w};
}

}  // namespace

TEST_CASE("is_ood against the six training categories") {
    const ReferenceStats ref;
    CHECK(is_ood(CategoryKey{3, 3}, ref));
    CHECK_FALSE(is_ood(CategoryKey{2, 1}, ref));
    CHECK(is_ood(CategoryKey{0, 0}, ref));
    const Layout l{{rect(RoomType::bedroom, 0, 0, 4, 4), rect(RoomType::bathroom, 4, 0, 6, 4)}};
    CHECK_FALSE(is_ood(l, ref));
    const Layout r{{l.rooms[1], l.rooms[0]}};
    CHECK(is_ood(r, ref) == is_ood(l, ref));
}

TEST_CASE("area histograms") {
    const Layout four{{rect(RoomType::bathroom, 0, 0, 4, 4), rect(RoomType::bedroom, 4, 0, 8, 4),
                       rect(RoomType::kitchen, 8, 0, 12, 4), rect(RoomType::living_room, 12, 0, 16, 4)}};
    CHECK(area_histogram(four).masses() == Histogram{0.25, 0.25, 0, 0.25, 0.25});
    const Layout bed = parse_layout("bedroom: (13,12),(8,12),(8,9),(13,9)");
    CHECK(area_histogram(bed).masses() == Histogram{0, 1, 0, 0, 0});
    CHECK(area_histogram(bed).doubled_total == 30);
    const Layout coarse{{rect(RoomType::bedroom, 0, 0, 3, 2), rect(RoomType::kitchen, 3, 0, 5, 2)}};
    CHECK(area_histogram(scale_to_bbox(coarse)).masses() == area_histogram(coarse).masses());
}

TEST_CASE("wasserstein examples") {
    const Histogram a{1, 0, 0, 0, 0}, b{0, 1, 0, 0, 0}, e{0, 0, 0, 0, 1};
    CHECK(wasserstein_1d(a, a) == 0.0);
    CHECK(wasserstein_1d(a, b) == 1.0);
    CHECK(wasserstein_1d(a, e) == 4.0);
    const Layout bed = parse_layout("bedroom: (13,12),(8,12),(8,9),(13,9)");
    ReferenceStats ref;
    ref.mean = area_histogram(bed).masses();
    CHECK(spatial_diversity(bed, ref) == 0.0);
}

TEST_CASE("wasserstein matches min-cost flow and is a metric") {
    Rng rng(31);
    for (int t = 0; t < 2000; ++t) {
        const Histogram p = random_histogram(rng), q = random_histogram(rng), r = random_histogram(rng);
        const double d = wasserstein_1d(p, q);
        CHECK(std::abs(d - oracle::emd_min_cost_flow(p, q)) <= 1e-9);
        CHECK(d == wasserstein_1d(q, p));
        CHECK(d >= 0.0);
        CHECK(wasserstein_1d(p, r) <= d + wasserstein_1d(q, r) + 1e-12);
    }
}

TEST_CASE("reference stats and top_diverse") {
    const GenConfig cfg;
    std::vector<Layout> corpus;
    for (std::uint64_t i = 0; i < 60; ++i) {
        corpus.push_back(generate_layout(sample_spec(cfg.categories[i % 6], i, cfg), cfg));
    }
    const ReferenceStats ref = reference_stats(corpus);
    CHECK(ref.layout_count == 60);
    CHECK(std::abs(std::accumulate(ref.mean.begin(), ref.mean.end(), 0.0) - 1.0) < 1e-12);
    CHECK_THROWS(reference_stats(std::span<const Layout>{}));

    const std::span<const Layout> pool(corpus.data(), 10);
    const auto top = top_diverse(pool, 2, ref);
    REQUIRE(top.size() == 2);
    std::vector<double> d;
    for (const Layout& l : pool) d.push_back(spatial_diversity(l, ref));
    std::sort(d.rbegin(), d.rend());
    CHECK(spatial_diversity(top[0], ref) == d[0]);
    CHECK(spatial_diversity(top[1], ref) == d[1]);
    CHECK(top_diverse(pool, 0, ref).empty());
    CHECK(top_diverse(pool, 50, ref).size() == 10);

    // Equal distances fall back to serialization order.
    std::vector<Layout> same{corpus[3], corpus[3]};
    same.push_back(translated(corpus[3], 1, 0));
    const auto tied = top_diverse(same, 3, ref);
    CHECK(serialize_layout(tied[0]) <= serialize_layout(tied[1]));
    CHECK(serialize_layout(tied[1]) <= serialize_layout(tied[2]));
}

TEST_CASE("aggregation accounting") {
    using C = AnnotationCategory;
    std::vector<SampleRecord> recs{
        record("RG.1", C::RG, true, true, false, 0.5),  record("RG.1", C::RG, true, false, false, 0.25),
        record("RG.1", C::RG, true, true, true, 1.0),   record("RG.1", C::RG, false, false, false, 0.0),
        record("AP.1", C::AP, false, false, false, 0.0),
    };
    const AggregateReport rep = aggregate(recs);
    REQUIRE(rep.prompts.size() == 2);
    const PromptResult& rg = rep.prompts[0];
    CHECK(rg.id == "RG.1");
    CHECK(rg.n_samples == 4);
    CHECK(rg.validity_rate == 0.75);
    CHECK(*rg.correctness_rate == doctest::Approx(2.0 / 3.0));
    CHECK(*rg.ood_ratio == doctest::Approx(1.0 / 3.0));
    CHECK(*rg.wasserstein_in == 0.375);
    CHECK(*rg.wasserstein_out == 1.0);
    const PromptResult& ap = rep.prompts[1];
    CHECK(ap.validity_rate == 0.0);
    CHECK_FALSE(ap.correctness_rate);
    CHECK_FALSE(ap.wasserstein_in);
    CHECK(rep.categories.size() == 2);
    CHECK(rep.warnings.size() == 4);

    // Permuting samples does not move the means.
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        rng.shuffle(std::span<SampleRecord>(recs));
        const AggregateReport again = aggregate(recs);
        for (const PromptResult& c : again.categories) {
            const auto it = std::find_if(rep.categories.begin(), rep.categories.end(),
                                         [&](const PromptResult& x) { return x.id == c.id; });
            REQUIRE(it != rep.categories.end());
            CHECK(c.n_samples == it->n_samples);
            CHECK(c.validity_rate == it->validity_rate);
            CHECK(c.wasserstein_in.value_or(-1) == doctest::Approx(it->wasserstein_in.value_or(-1)));
        }
    }
}

TEST_CASE("100 valid samples give validity 1") {
    std::vector<SampleRecord> recs;
    for (int i = 0; i < 100; ++i) recs.push_back(record("RS.1", AnnotationCategory::RS, true, i % 2 == 0, false, 0.1));
    const AggregateReport rep = aggregate(recs);
    CHECK(rep.prompts[0].validity_rate == 1.0);
    CHECK(*rep.prompts[0].correctness_rate == 0.5);
}

TEST_CASE("tallies merge associatively") {
    Tally a, b, all;
    for (int i = 0; i < 10; ++i) {
        const SampleRecord r = record("x", AnnotationCategory::LU, i % 3 != 0, i % 2 == 0, i % 4 == 0, i * 0.125);
        (i < 4 ? a : b).add(r);
        all.add(r);
    }
    a.merge(b);
    CHECK(a.samples == all.samples);
    CHECK(a.valid == all.valid);
    CHECK(a.correct == all.correct);
    CHECK(a.ood == all.ood);
    CHECK(a.wasserstein_in_sum == all.wasserstein_in_sum);
    CHECK(a.wasserstein_out_count == all.wasserstein_out_count);
}
