#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "gapfill/capture_io.hpp"
#include "gapfill/gap_detection.hpp"
#include "gapfill/knn_imputer.hpp"
#include "gapfill/pipeline.hpp"
#include "gapfill/segmentation.hpp"

namespace {

using namespace gapfill;

Capture make_capture(int rows, int missing_tail) {
    Capture c{Activity::walking, SensorKind::of(Sensor::accelerometer), (rows + 99) / 100, {}};
    for (int i = 0; i < rows - missing_tail; ++i)
        c.samples.push_back(Sample::observed(1493996698893 + std::int64_t(i) * 10,
                                             std::sin(i * 0.13), std::cos(i * 0.07) - 9.0,
                                             std::sin(i * 0.05) + 3.5));
    return c;
}

std::vector<KnownRow> make_known(int n) {
    std::vector<KnownRow> rows;
    for (int i = 0; i < n; ++i) rows.push_back({std::size_t(i), std::int64_t(i) * 10});
    return rows;
}

void BM_KnnNeighbors(benchmark::State& state) {
    const auto known = make_known(int(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(knn_neighbors(state.range(0) * 5, known, 5));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KnnNeighbors)->Arg(90)->Arg(500);

void BM_ImputeChunk(benchmark::State& state) {
    Capture c = make_capture(100, 0);
    Chunk chunk;
    for (std::size_t i = 0; i < 90; ++i) chunk.known_indices.push_back(i);
    for (std::size_t i = 90; i < 100; ++i) {
        c.samples[i] = Sample::placeholder(c.samples[i].timestamp_ms);
        chunk.target_indices.push_back(i);
    }
    const ImputationConfig config{int(state.range(0)), Weighting::uniform, 1.5};
    for (auto _ : state) benchmark::DoNotOptimize(impute_chunk(c, chunk, config));
    state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_ImputeChunk)->Arg(1)->Arg(5)->Arg(10);

void BM_ImputeCapture(benchmark::State& state) {
    const Capture c = make_capture(500, int(state.range(0)));
    const ImputationConfig config{};
    for (auto _ : state) {
        auto result = impute_capture(c, config);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ImputeCapture)->Arg(10)->Arg(50)->Arg(100);

void BM_ParseCapture(benchmark::State& state) {
    const std::string text = serialize_capture(make_capture(500, 0), false);
    const SensorKind kind = SensorKind::of(Sensor::accelerometer);
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_capture(text, kind, Activity::walking, 5));
    state.SetBytesProcessed(state.iterations() * std::int64_t(text.size()));
}
BENCHMARK(BM_ParseCapture);

}  // namespace

BENCHMARK_MAIN();
