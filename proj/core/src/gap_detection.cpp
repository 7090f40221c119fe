#include "gapfill/gap_detection.hpp"

#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "gapfill/errors.hpp"

namespace gapfill {

const char* to_string(Bucket bucket) {
    switch (bucket) {
        case Bucket::none: return "none";
        case Bucket::small: return "small";
        case Bucket::medium: return "medium";
        case Bucket::large: return "large";
    }
    return "?";
}

const char* to_string(GapKind kind) {
    return kind == GapKind::internal ? "internal" : "trailing";
}

int GapReport::span_total() const {
    return std::accumulate(spans.begin(), spans.end(), 0,
                           [](int acc, const GapSpan& s) { return acc + s.count; });
}

int expected_sample_count(SensorKind sensor, int duration_s) {
    if (duration_s < 0) fail(ErrorCode::invalid_config, "negative duration");
    return duration_s * sensor.nominal_rate_hz;
}

GapReport detect_gaps(const Capture& capture, double gap_threshold) {
    if (gap_threshold <= 1.0)
        fail(ErrorCode::invalid_config, "gap threshold must exceed 1");
    for (std::size_t i = 0; i < capture.samples.size(); ++i) {
        const Sample& s = capture.samples[i];
        if (!s.uniform_state())
            fail(ErrorCode::mixed_row, "row " + std::to_string(i) + " has mixed axis states");
        if (s.row_state() == AxisState::missing)
            fail(ErrorCode::missing_rows_present,
                 "row " + std::to_string(i) + " is a placeholder; detect_gaps wants raw rows");
    }

    GapReport report;
    report.expected_count = expected_sample_count(capture.sensor, capture.duration_s);
    report.observed_count = static_cast<int>(capture.samples.size());
    if (report.observed_count > report.expected_count)
        fail(ErrorCode::over_complete_capture,
             std::to_string(report.observed_count) + " rows exceed expected " +
                 std::to_string(report.expected_count));
    report.missing_count = report.expected_count - report.observed_count;

    const int period = capture.sensor.nominal_period_ms;
    const double delta_limit = gap_threshold * period;

    for (std::size_t i = 0; i + 1 < capture.samples.size(); ++i) {
        const std::int64_t delta =
            capture.samples[i + 1].timestamp_ms - capture.samples[i].timestamp_ms;
        if (static_cast<double>(delta) <= delta_limit) continue;
        const int count =
            static_cast<int>(std::llround(static_cast<double>(delta) / period)) - 1;
        if (count < 1) continue;
        GapSpan span{GapKind::internal, i, count, {}};
        span.timestamps.reserve(static_cast<std::size_t>(count));
        for (int j = 1; j <= count; ++j)
            span.timestamps.push_back(capture.samples[i].timestamp_ms + std::int64_t(j) * period);
        report.spans.push_back(std::move(span));
    }

    const int internal_total = report.span_total();
    if (internal_total < report.missing_count) {
        const int count = report.missing_count - internal_total;
        const std::size_t last = capture.samples.size() - 1;
        GapSpan span{GapKind::trailing, last, count, {}};
        span.timestamps.reserve(static_cast<std::size_t>(count));
        for (int j = 1; j <= count; ++j)
            span.timestamps.push_back(capture.samples[last].timestamp_ms +
                                      std::int64_t(j) * period);
        report.spans.push_back(std::move(span));
    } else if (internal_total > report.missing_count) {
        // Timestamp evidence claims more rows than the count shortfall.
        // Internal spans win; no trailing span is added.
        report.warnings.push_back(
            "internal spans explain " + std::to_string(internal_total) +
            " rows but the count shortfall is only " + std::to_string(report.missing_count));
    }

    report.bucket = classify_missing_count(report.missing_count, capture.sensor);
    return report;
}

Capture insert_placeholders(const Capture& capture, const GapReport& report) {
    Capture out{capture.activity, capture.sensor, capture.duration_s, {}};
    out.samples.reserve(capture.samples.size() + static_cast<std::size_t>(report.span_total()));

    auto append = [&out](const Sample& s) {
        if (!out.samples.empty() && s.timestamp_ms <= out.samples.back().timestamp_ms)
            fail(ErrorCode::grid_conflict,
                 "placeholder grid timestamp " + std::to_string(s.timestamp_ms) +
                     " does not exceed predecessor " +
                     std::to_string(out.samples.back().timestamp_ms));
        out.samples.push_back(s);
    };

    std::size_t next_span = 0;
    for (std::size_t i = 0; i < capture.samples.size(); ++i) {
        append(capture.samples[i]);
        while (next_span < report.spans.size() &&
               report.spans[next_span].insert_after_index == i) {
            for (std::int64_t ts : report.spans[next_span].timestamps)
                append(Sample::placeholder(ts));
            ++next_span;
        }
    }
    if (next_span != report.spans.size())
        fail(ErrorCode::grid_conflict, "span insert point beyond capture end");

    if (report.warnings.empty() &&
        out.samples.size() != static_cast<std::size_t>(report.expected_count))
        fail(ErrorCode::grid_conflict,
             "placeholder insertion produced " + std::to_string(out.samples.size()) +
                 " rows, expected " + std::to_string(report.expected_count));
    return out;
}

Bucket classify_missing_count(int missing, SensorKind sensor) {
    const int threshold = sensor.discard_threshold();
    const int quota = sensor.fill_quota();
    if (missing <= 0) return Bucket::none;
    if (missing <= quota) return Bucket::small;
    if (missing <= threshold) return Bucket::medium;
    return Bucket::large;
}

Classification classify_capture(const GapReport& report, SensorKind sensor) {
    const Bucket bucket = classify_missing_count(report.missing_count, sensor);
    return {bucket, bucket == Bucket::large};
}

void to_json(nlohmann::json& j, const GapSpan& span) {
    j = nlohmann::json{{"kind", to_string(span.kind)},
                       {"insert_after_index", span.insert_after_index},
                       {"count", span.count},
                       {"timestamps", span.timestamps}};
}

void to_json(nlohmann::json& j, const GapReport& report) {
    j = nlohmann::json{{"expected", report.expected_count},
                       {"observed", report.observed_count},
                       {"missing", report.missing_count},
                       {"bucket", to_string(report.bucket)},
                       {"spans", report.spans}};
    if (!report.warnings.empty()) j["warnings"] = report.warnings;
}

}  // namespace gapfill
