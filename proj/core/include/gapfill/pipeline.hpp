#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gapfill/capture.hpp"
#include "gapfill/gap_detection.hpp"
#include "gapfill/knn_imputer.hpp"

namespace gapfill {

enum class CaptureStatus { complete, discarded, failed };

const char* to_string(CaptureStatus status);

struct PassRecord {
    std::size_t chunk_first_row = 0;
    std::size_t chunk_last_row = 0;
    std::vector<std::size_t> targets;
};

struct ImputationLog {
    int passes = 0;
    std::vector<PassRecord> pass_records;
    GapReport report;
    CaptureStatus status = CaptureStatus::complete;
    ImputationConfig config;
    std::string error;
};

/// Runs the per-capture loop: detect gaps, apply the discard rule, insert
/// placeholders, then impute chunk by chunk until none remain. Errors are
/// recorded in the log (status failed), never thrown; the input rows are
/// never modified in any outcome.
std::pair<Capture, ImputationLog> impute_capture(const Capture& capture,
                                                 const ImputationConfig& config);

/// The chunk loop alone, for callers that bring their own placeholder
/// capture and want no discard policy. Throws on module errors.
Capture fill_placeholders(Capture working, const ImputationConfig& config,
                          ImputationLog* log = nullptr);

struct BucketCounts {
    int total = 0;  // classified records: complete + small + medium + large
    int complete = 0;
    int small = 0;
    int medium = 0;
    int large = 0;
    int failed = 0;  // unreadable or unclassifiable, tallied separately

    friend bool operator==(const BucketCounts&, const BucketCounts&) = default;
};

/// Per (activity, sensor) bucket counts. Merging is commutative and
/// associative, so partials from parallel workers combine in any order.
struct DatasetStats {
    std::map<std::pair<Activity, Sensor>, BucketCounts> groups;
    int unattributed_failures = 0;

    void add_bucket(Activity activity, Sensor sensor, Bucket bucket);
    void add_failure(std::optional<Activity> activity, std::optional<Sensor> sensor);
    void merge(const DatasetStats& other);
    BucketCounts totals() const;

    friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

struct ScanEntry {
    std::string path;
    std::optional<Capture> capture;  // nullopt marks an unreadable capture
    std::optional<Activity> activity;
    std::optional<Sensor> sensor;
};

/// Classifies every entry; captures that cannot be diagnosed (parse or
/// detection failure) land in the failed tally rather than being dropped.
DatasetStats scan_dataset(std::span<const ScanEntry> entries,
                          double gap_threshold = kDefaultGapThreshold);

struct PipelineOptions {
    std::filesystem::path input_dir;
    std::filesystem::path output_dir;
    ImputationConfig config;
    bool provenance = true;
    int jobs = 0;  // 0 = all available processors
    int duration_s = 5;
    std::optional<Sensor> sensor_override;
    std::optional<Activity> activity_override;
};

struct CaptureFile {
    std::filesystem::path absolute;
    std::filesystem::path relative;
    std::optional<Activity> activity;
    std::optional<Sensor> sensor;
};

/// Lists the .csv captures under input_dir in sorted relative-path order,
/// with activity/sensor taken from the directory layout unless overridden.
std::vector<CaptureFile> discover_captures(const std::filesystem::path& input_dir,
                                           std::optional<Activity> activity_override = {},
                                           std::optional<Sensor> sensor_override = {});

struct FileResult {
    std::string path;  // relative to the input directory
    CaptureStatus status = CaptureStatus::complete;
    std::optional<Activity> activity;
    std::optional<Sensor> sensor;
    Bucket bucket = Bucket::none;
    int missing_before = 0;
    int missing_after = 0;
    int passes = 0;
    std::string error;
    std::optional<GapReport> report;  // absent when the capture never parsed
};

struct PipelineSummary {
    std::vector<FileResult> results;  // sorted by path
    DatasetStats before;
    DatasetStats after;  // over written files only
    int written = 0;
    int discarded = 0;
    int failed = 0;
};

/// Imputes every keepable capture under input_dir (layout
/// `<activity>/<sensor>/<name>.csv` unless overridden) into output_dir,
/// preserving relative paths, and writes summary.json alongside the
/// outputs. Captures are processed in parallel; per-file failures are
/// recorded and do not stop the run.
PipelineSummary run_pipeline(const PipelineOptions& options);

void to_json(nlohmann::json& j, const BucketCounts& counts);
void to_json(nlohmann::json& j, const DatasetStats& stats);
void to_json(nlohmann::json& j, const FileResult& result);
void to_json(nlohmann::json& j, const PipelineSummary& summary);

}  // namespace gapfill
