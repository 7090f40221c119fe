#include "gapfill/segmentation.hpp"

#include <algorithm>

#include "gapfill/errors.hpp"

namespace gapfill {

namespace {

bool is_missing(const Sample& s) { return s.wholly(AxisState::missing); }

/// Earliest missing block capped at the quota, plus up to (T - Q) known
/// rows taken from immediately before the block, then after it.
Chunk first_block_chunk(const Capture& capture, std::size_t first_missing, int threshold,
                        int quota) {
    const auto& samples = capture.samples;
    const std::size_t n = samples.size();

    Chunk chunk;
    std::size_t t = first_missing;
    while (t < n && is_missing(samples[t]) &&
           chunk.target_indices.size() < static_cast<std::size_t>(quota))
        chunk.target_indices.push_back(t++);

    const std::size_t context = static_cast<std::size_t>(threshold - quota);
    const std::size_t before = std::min(first_missing, context);
    for (std::size_t i = first_missing - before; i < first_missing; ++i)
        chunk.known_indices.push_back(i);

    std::size_t deficit = context - before;
    for (std::size_t i = t; i < n && deficit > 0; ++i) {
        if (is_missing(samples[i])) continue;
        chunk.known_indices.push_back(i);
        --deficit;
    }

    if (chunk.known_indices.empty())
        fail(ErrorCode::no_neighbors, "window around row " + std::to_string(first_missing) +
                                          " contains no known rows");
    chunk.capture_offset = std::min(chunk.known_indices.front(), chunk.target_indices.front());
    return chunk;
}

}  // namespace

std::optional<Chunk> next_chunk(const Capture& capture) {
    const auto& samples = capture.samples;
    const std::size_t n = samples.size();

    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < n; ++i)
        if (is_missing(samples[i])) missing.push_back(i);
    if (missing.empty()) return std::nullopt;

    const int threshold = capture.sensor.discard_threshold();
    const int quota = capture.sensor.fill_quota();
    const std::size_t m = missing.size();

    if (m <= static_cast<std::size_t>(quota)) {
        // Final-pass window: the last second of samples, provided every
        // remaining missing row sits inside it as one contiguous block.
        const std::size_t window_start = n > static_cast<std::size_t>(threshold)
                                             ? n - static_cast<std::size_t>(threshold)
                                             : 0;
        const bool contiguous = missing.back() - missing.front() + 1 == m;
        if (contiguous && missing.front() >= window_start) {
            Chunk chunk;
            chunk.capture_offset = window_start;
            for (std::size_t i = window_start; i < n; ++i) {
                if (is_missing(samples[i]))
                    chunk.target_indices.push_back(i);
                else
                    chunk.known_indices.push_back(i);
            }
            if (chunk.known_indices.empty())
                fail(ErrorCode::no_neighbors, "capture tail contains no known rows");
            return chunk;
        }
    }

    return first_block_chunk(capture, missing.front(), threshold, quota);
}

}  // namespace gapfill
