#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gapfill/capture.hpp"

namespace gapfill {

/// A delta counts as a gap only above this multiple of the nominal period;
/// benign jitter stays below it.
inline constexpr double kDefaultGapThreshold = 1.5;

enum class GapKind { internal, trailing };

/// A run of missing rows, located by the sample it follows. Placeholder
/// timestamps are anchor + i * nominal_period_ms for i = 1..count.
struct GapSpan {
    GapKind kind = GapKind::trailing;
    std::size_t insert_after_index = 0;
    int count = 0;
    std::vector<std::int64_t> timestamps;

    friend bool operator==(const GapSpan&, const GapSpan&) = default;
};

enum class Bucket { none, small, medium, large };

const char* to_string(Bucket bucket);
const char* to_string(GapKind kind);

/// Diagnosis of one capture: counts, located spans, and the Table-style
/// bucket. Whenever `warnings` is empty, span counts sum to missing_count.
struct GapReport {
    int expected_count = 0;
    int observed_count = 0;
    int missing_count = 0;
    std::vector<GapSpan> spans;
    Bucket bucket = Bucket::none;
    std::vector<std::string> warnings;

    int span_total() const;
    bool over_explained() const { return span_total() > missing_count; }
};

struct Classification {
    Bucket bucket = Bucket::none;
    bool discard = false;
};

int expected_sample_count(SensorKind sensor, int duration_s);

/// Locates missing samples: internal spans from timestamp deltas above
/// gap_threshold x nominal period, and a trailing span for whatever count
/// shortfall the internal spans do not explain. Rows may be observed or
/// previously imputed; missing rows are rejected.
GapReport detect_gaps(const Capture& capture, double gap_threshold = kDefaultGapThreshold);

/// Returns a new capture with all-missing placeholder rows inserted at each
/// span's timestamps. Input rows are copied untouched.
Capture insert_placeholders(const Capture& capture, const GapReport& report);

Bucket classify_missing_count(int missing, SensorKind sensor);
Classification classify_capture(const GapReport& report, SensorKind sensor);

void to_json(nlohmann::json& j, const GapSpan& span);
void to_json(nlohmann::json& j, const GapReport& report);

}  // namespace gapfill
