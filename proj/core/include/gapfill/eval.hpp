#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gapfill/capture.hpp"
#include "gapfill/knn_imputer.hpp"

namespace gapfill {

enum class GapMode { trailing, internal_at, random };

const char* to_string(GapMode mode);

/// Describes one synthetic gap: a contiguous block of rows to remove.
/// `position` applies to internal_at; `seed` drives random placement.
struct GapSpec {
    GapMode mode = GapMode::trailing;
    int count = 0;
    std::size_t position = 0;
    std::uint64_t seed = 0;
};

struct InjectionResult {
    Capture degraded;
    std::vector<Sample> ground_truth;  // the removed rows, in order
};

/// Removes spec.count rows from a complete capture and returns them as
/// ground truth. Random placement is seeded and always reproducible; the
/// block never starts at row zero, since a gap with no preceding sample
/// cannot be located afterwards.
InjectionResult inject_gaps(const Capture& capture, const GapSpec& spec);

struct AxisScore {
    double rmse = 0.0;
    double mae = 0.0;
    /// Peak-to-peak of imputed rows over peak-to-peak of ground truth;
    /// empty when the ground truth is flat.
    std::optional<double> amplitude_ratio;
};

struct ScoreReport {
    AxisScore x, y, z;
    int n_scored = 0;
};

/// Scores the imputed rows found at exactly the ground-truth timestamps.
ScoreReport score(const Capture& imputed, std::span<const Sample> ground_truth);

enum class FillMethod { knn, linear_interpolation, last_observation_carried_forward, global_mean };

const char* to_string(FillMethod method);

inline constexpr FillMethod kAllFillMethods[] = {
    FillMethod::knn, FillMethod::linear_interpolation,
    FillMethod::last_observation_carried_forward, FillMethod::global_mean};

/// Fills the placeholder rows of a degraded capture with one baseline
/// method (knn delegates to the pipeline kernel; the discard rule does
/// not apply here).
Capture fill_with_method(const Capture& degraded, FillMethod method,
                         const ImputationConfig& config);

/// Injects one gap, fills it with every method, and scores each against
/// the same ground truth. Deterministic for a fixed spec seed.
std::vector<std::pair<FillMethod, ScoreReport>> compare_baselines(const Capture& capture,
                                                                  const GapSpec& spec,
                                                                  const ImputationConfig& config);

}  // namespace gapfill
