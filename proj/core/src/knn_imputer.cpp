#include "gapfill/knn_imputer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "gapfill/errors.hpp"

namespace gapfill {

const char* to_string(Weighting weighting) {
    return weighting == Weighting::uniform ? "uniform" : "inverse_distance";
}

void validate(const ImputationConfig& config) {
    if (config.k < 1) fail(ErrorCode::invalid_config, "k must be at least 1");
    if (config.gap_threshold <= 1.0)
        fail(ErrorCode::invalid_config, "gap threshold must exceed 1");
}

NeighborSet knn_neighbors(std::int64_t target_timestamp_ms, std::span<const KnownRow> known,
                          int k) {
    if (known.empty()) fail(ErrorCode::no_neighbors, "known row set is empty");
    if (k < 1) fail(ErrorCode::invalid_config, "k must be at least 1");

    struct Candidate {
        std::int64_t distance;
        std::int64_t timestamp;
        std::size_t index;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(known.size());
    for (const KnownRow& row : known)
        candidates.push_back(
            {std::llabs(row.timestamp_ms - target_timestamp_ms), row.timestamp_ms, row.index});

    const std::size_t take = std::min(static_cast<std::size_t>(k), candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end(),
                      [](const Candidate& a, const Candidate& b) {
                          if (a.distance != b.distance) return a.distance < b.distance;
                          return a.timestamp < b.timestamp;
                      });

    NeighborSet set;
    set.entries.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
        set.entries.push_back({candidates[i].index, candidates[i].distance});
    return set;
}

namespace {

double axis_of(const Sample& s, int axis) {
    const AxisValue& v = axis == 0 ? s.x : axis == 1 ? s.y : s.z;
    return v.value;
}

}  // namespace

std::vector<ImputedRow> impute_chunk(const Capture& capture, const Chunk& chunk,
                                     const ImputationConfig& config) {
    validate(config);

    std::vector<KnownRow> known;
    known.reserve(chunk.known_indices.size());
    for (std::size_t idx : chunk.known_indices)
        known.push_back({idx, capture.samples[idx].timestamp_ms});

    std::vector<ImputedRow> out;
    out.reserve(chunk.target_indices.size());

    for (std::size_t target : chunk.target_indices) {
        const NeighborSet neighbors =
            knn_neighbors(capture.samples[target].timestamp_ms, known, config.k);

        ImputedRow row;
        row.row_index = target;
        double* axes[3] = {&row.x, &row.y, &row.z};

        for (int axis = 0; axis < 3; ++axis) {
            // Accumulate deltas against the nearest neighbor's value, so a
            // set of identical neighbors reproduces the value bit-exactly.
            const double anchor =
                axis_of(capture.samples[neighbors.entries.front().row_index], axis);
            double value = 0.0;
            if (config.weighting == Weighting::uniform) {
                double sum = 0.0;
                for (const Neighbor& nb : neighbors.entries)
                    sum += axis_of(capture.samples[nb.row_index], axis) - anchor;
                value = anchor + sum / static_cast<double>(neighbors.entries.size());
            } else if (neighbors.entries.front().distance_ms == 0) {
                value = anchor;  // exact copy, the weighting's limit
            } else {
                double weighted = 0.0, weight_sum = 0.0;
                for (const Neighbor& nb : neighbors.entries) {
                    const double w = 1.0 / static_cast<double>(nb.distance_ms);
                    weighted += w * (axis_of(capture.samples[nb.row_index], axis) - anchor);
                    weight_sum += w;
                }
                value = anchor + weighted / weight_sum;
            }
            if (!std::isfinite(value))
                fail(ErrorCode::invalid_config, "imputed value is not finite");
            *axes[axis] = value;
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace gapfill
