#include "gapfill/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "gapfill/errors.hpp"
#include "gapfill/gap_detection.hpp"
#include "gapfill/pipeline.hpp"

namespace gapfill {

const char* to_string(GapMode mode) {
    switch (mode) {
        case GapMode::trailing: return "trailing";
        case GapMode::internal_at: return "internal_at";
        case GapMode::random: return "random";
    }
    return "?";
}

const char* to_string(FillMethod method) {
    switch (method) {
        case FillMethod::knn: return "knn";
        case FillMethod::linear_interpolation: return "linear_interpolation";
        case FillMethod::last_observation_carried_forward:
            return "last_observation_carried_forward";
        case FillMethod::global_mean: return "global_mean";
    }
    return "?";
}

InjectionResult inject_gaps(const Capture& capture, const GapSpec& spec) {
    const std::size_t n = capture.samples.size();
    for (const Sample& s : capture.samples)
        if (!s.wholly(AxisState::observed) && !s.wholly(AxisState::imputed))
            fail(ErrorCode::missing_rows_present, "capture is not complete");

    if (spec.count < 1 || static_cast<std::size_t>(spec.count) > n - 1)
        fail(ErrorCode::invalid_gap_spec,
             "count must be in [1, " + std::to_string(n - 1) + "], got " +
                 std::to_string(spec.count));
    const std::size_t count = static_cast<std::size_t>(spec.count);

    std::size_t start = 0;
    switch (spec.mode) {
        case GapMode::trailing:
            start = n - count;
            break;
        case GapMode::internal_at:
            start = spec.position;
            if (start < 1 || start + count > n - 1)
                fail(ErrorCode::invalid_gap_spec,
                     "internal gap at " + std::to_string(start) + " of length " +
                         std::to_string(count) + " is out of bounds for " + std::to_string(n) +
                         " rows");
            break;
        case GapMode::random: {
            std::mt19937_64 rng(spec.seed);
            std::uniform_int_distribution<std::size_t> dist(1, n - count);
            start = dist(rng);
            break;
        }
    }

    InjectionResult result;
    result.degraded = Capture{capture.activity, capture.sensor, capture.duration_s, {}};
    result.degraded.samples.reserve(n - count);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= start && i < start + count)
            result.ground_truth.push_back(capture.samples[i]);
        else
            result.degraded.samples.push_back(capture.samples[i]);
    }
    return result;
}

namespace {

struct AxisAccumulator {
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double imp_min = std::numeric_limits<double>::infinity();
    double imp_max = -std::numeric_limits<double>::infinity();
    double ref_min = std::numeric_limits<double>::infinity();
    double ref_max = -std::numeric_limits<double>::infinity();

    void add(double imputed, double reference) {
        const double err = imputed - reference;
        abs_sum += std::abs(err);
        sq_sum += err * err;
        imp_min = std::min(imp_min, imputed);
        imp_max = std::max(imp_max, imputed);
        ref_min = std::min(ref_min, reference);
        ref_max = std::max(ref_max, reference);
    }

    AxisScore finish(int n) const {
        AxisScore score;
        score.mae = abs_sum / n;
        score.rmse = std::sqrt(sq_sum / n);
        const double ref_ptp = ref_max - ref_min;
        if (ref_ptp > 0.0) score.amplitude_ratio = (imp_max - imp_min) / ref_ptp;
        return score;
    }
};

double axis_value(const Sample& s, int axis) {
    return axis == 0 ? s.x.value : axis == 1 ? s.y.value : s.z.value;
}

}  // namespace

ScoreReport score(const Capture& imputed, std::span<const Sample> ground_truth) {
    if (ground_truth.empty()) fail(ErrorCode::invalid_gap_spec, "no ground truth rows");

    std::unordered_map<std::int64_t, const Sample*> by_timestamp;
    by_timestamp.reserve(imputed.samples.size());
    for (const Sample& s : imputed.samples) by_timestamp[s.timestamp_ms] = &s;

    AxisAccumulator acc[3];
    for (const Sample& truth : ground_truth) {
        auto it = by_timestamp.find(truth.timestamp_ms);
        if (it == by_timestamp.end())
            fail(ErrorCode::timestamp_mismatch,
                 "no imputed row at timestamp " + std::to_string(truth.timestamp_ms));
        const Sample& filled = *it->second;
        if (!filled.wholly(AxisState::imputed))
            fail(ErrorCode::timestamp_mismatch,
                 "row at timestamp " + std::to_string(truth.timestamp_ms) + " is not imputed");
        for (int axis = 0; axis < 3; ++axis)
            acc[axis].add(axis_value(filled, axis), axis_value(truth, axis));
    }

    ScoreReport report;
    report.n_scored = static_cast<int>(ground_truth.size());
    report.x = acc[0].finish(report.n_scored);
    report.y = acc[1].finish(report.n_scored);
    report.z = acc[2].finish(report.n_scored);
    return report;
}

namespace {

bool is_known(const Sample& s) { return !s.wholly(AxisState::missing); }

/// Linear interpolation between the nearest known anchors; one-sided gaps
/// hold the boundary value. Evaluated as v0 + ((v1-v0)*u)/d so ramps over
/// integer grids reproduce exactly.
void fill_linear(Capture& working) {
    const auto& samples = working.samples;
    const std::size_t n = samples.size();
    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < n; ++i)
        if (is_known(samples[i])) known.push_back(i);
    if (known.empty()) fail(ErrorCode::no_neighbors, "no known rows to interpolate from");

    std::vector<Sample> filled = working.samples;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_known(samples[i])) continue;
        auto after = std::lower_bound(known.begin(), known.end(), i);
        const Sample* next = after == known.end() ? nullptr : &samples[*after];
        const Sample* prev = after == known.begin() ? nullptr : &samples[*(after - 1)];

        double values[3];
        for (int axis = 0; axis < 3; ++axis) {
            if (prev != nullptr && next != nullptr) {
                const double v0 = axis_value(*prev, axis);
                const double v1 = axis_value(*next, axis);
                const auto u = static_cast<double>(samples[i].timestamp_ms - prev->timestamp_ms);
                const auto d = static_cast<double>(next->timestamp_ms - prev->timestamp_ms);
                values[axis] = v0 + ((v1 - v0) * u) / d;
            } else {
                const Sample* anchor = prev != nullptr ? prev : next;
                values[axis] = axis_value(*anchor, axis);
            }
        }
        filled[i] = Sample::imputed(samples[i].timestamp_ms, values[0], values[1], values[2]);
    }
    working.samples = std::move(filled);
}

void fill_locf(Capture& working) {
    const auto& samples = working.samples;
    const std::size_t n = samples.size();
    std::vector<Sample> filled = working.samples;

    const Sample* last_known = nullptr;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_known(samples[i])) {
            last_known = &samples[i];
            continue;
        }
        const Sample* anchor = last_known;
        if (anchor == nullptr) {
            for (std::size_t j = i + 1; j < n; ++j)
                if (is_known(samples[j])) { anchor = &samples[j]; break; }
        }
        if (anchor == nullptr) fail(ErrorCode::no_neighbors, "no known rows to carry forward");
        filled[i] = Sample::imputed(samples[i].timestamp_ms, anchor->x.value, anchor->y.value,
                                    anchor->z.value);
    }
    working.samples = std::move(filled);
}

void fill_global_mean(Capture& working) {
    double sums[3] = {0.0, 0.0, 0.0};
    std::size_t count = 0;
    for (const Sample& s : working.samples) {
        if (!is_known(s)) continue;
        for (int axis = 0; axis < 3; ++axis) sums[axis] += axis_value(s, axis);
        ++count;
    }
    if (count == 0) fail(ErrorCode::no_neighbors, "no known rows to average");
    const double means[3] = {sums[0] / count, sums[1] / count, sums[2] / count};

    for (Sample& s : working.samples)
        if (!is_known(s))
            s = Sample::imputed(s.timestamp_ms, means[0], means[1], means[2]);
}

}  // namespace

Capture fill_with_method(const Capture& degraded, FillMethod method,
                         const ImputationConfig& config) {
    const GapReport report = detect_gaps(degraded, config.gap_threshold);
    Capture working = insert_placeholders(degraded, report);
    switch (method) {
        case FillMethod::knn:
            return fill_placeholders(std::move(working), config);
        case FillMethod::linear_interpolation:
            fill_linear(working);
            return working;
        case FillMethod::last_observation_carried_forward:
            fill_locf(working);
            return working;
        case FillMethod::global_mean:
            fill_global_mean(working);
            return working;
    }
    fail(ErrorCode::invalid_config, "unknown fill method");
}

std::vector<std::pair<FillMethod, ScoreReport>> compare_baselines(const Capture& capture,
                                                                  const GapSpec& spec,
                                                                  const ImputationConfig& config) {
    validate(config);
    const InjectionResult injection = inject_gaps(capture, spec);

    std::vector<std::pair<FillMethod, ScoreReport>> table;
    table.reserve(std::size(kAllFillMethods));
    for (FillMethod method : kAllFillMethods) {
        const Capture filled = fill_with_method(injection.degraded, method, config);
        table.emplace_back(method, score(filled, injection.ground_truth));
    }
    return table;
}

}  // namespace gapfill
