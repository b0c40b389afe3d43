#include <benchmark/benchmark.h>

#include "plantext/metrics.hpp"
#include "plantext/rng.hpp"
#include "plantext/semantics.hpp"
#include "plantext/synthgen.hpp"
#include "plantext/validity.hpp"

using namespace plantext;

namespace {

const Layout& sample_layout() {
    static const Layout l = [] {
        const GenConfig cfg;
        return generate_layout(sample_spec(CategoryKey{4, 3}, 1, cfg), cfg);
    }();
    return l;
}

void BM_Parse(benchmark::State& state) {
    const std::string text = serialize_layout(sample_layout());
    for (auto _ : state) benchmark::DoNotOptimize(parse_layout(text));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Parse);

void BM_Validate(benchmark::State& state) {
    const Layout& l = sample_layout();
    for (auto _ : state) benchmark::DoNotOptimize(validate(l));
}
BENCHMARK(BM_Validate);

void BM_Extract(benchmark::State& state) {
    const Layout& l = sample_layout();
    for (auto _ : state) benchmark::DoNotOptimize(extract_annotations(l));
}
BENCHMARK(BM_Extract);

void BM_Generate(benchmark::State& state) {
    const GenConfig cfg;
    std::uint64_t i = 0;
    for (auto _ : state) {
        const CategoryKey cat = cfg.categories[i % cfg.categories.size()];
        benchmark::DoNotOptimize(generate_layout(sample_spec(cat, derive_seed(3, i++), cfg), cfg));
    }
}
BENCHMARK(BM_Generate);

void BM_Wasserstein(benchmark::State& state) {
    const Histogram p{0.1, 0.3, 0.2, 0.15, 0.25};
    const Histogram q{0.3, 0.1, 0.05, 0.35, 0.2};
    for (auto _ : state) benchmark::DoNotOptimize(wasserstein_1d(p, q));
}
BENCHMARK(BM_Wasserstein);

}  // namespace
BENCHMARK_MAIN();
