#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gapfill/capture.hpp"
#include "gapfill/segmentation.hpp"

namespace gapfill {

enum class Weighting { uniform, inverse_distance };

const char* to_string(Weighting weighting);

struct ImputationConfig {
    int k = 5;
    Weighting weighting = Weighting::uniform;
    double gap_threshold = 1.5;
};

/// Throws invalid_config unless k >= 1 and gap_threshold > 1.
void validate(const ImputationConfig& config);

struct Neighbor {
    std::size_t row_index = 0;
    std::int64_t distance_ms = 0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NeighborSet {
    std::vector<Neighbor> entries;  // ascending by (distance, timestamp)
};

struct KnownRow {
    std::size_t index = 0;
    std::int64_t timestamp_ms = 0;
};

/// The min(k, |known|) known rows closest in time to the target. Exact
/// distance ties prefer the earlier timestamp, so the result is
/// deterministic.
NeighborSet knn_neighbors(std::int64_t target_timestamp_ms, std::span<const KnownRow> known,
                          int k);

struct ImputedRow {
    std::size_t row_index = 0;
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Fills every target row of the chunk from its k nearest known rows,
/// per axis: plain mean under uniform weighting, 1/distance weighted mean
/// otherwise (a zero-distance neighbor is copied outright). Targets of the
/// same pass never feed each other.
std::vector<ImputedRow> impute_chunk(const Capture& capture, const Chunk& chunk,
                                     const ImputationConfig& config);

}  // namespace gapfill
