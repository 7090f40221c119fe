#include "gapfill/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "gapfill/capture_io.hpp"
#include "gapfill/errors.hpp"
#include "gapfill/segmentation.hpp"

namespace gapfill {

const char* to_string(CaptureStatus status) {
    switch (status) {
        case CaptureStatus::complete: return "complete";
        case CaptureStatus::discarded: return "discarded";
        case CaptureStatus::failed: return "failed";
    }
    return "?";
}

Capture fill_placeholders(Capture working, const ImputationConfig& config, ImputationLog* log) {
    validate(config);
    while (auto chunk = next_chunk(working)) {
        const auto values = impute_chunk(working, *chunk, config);
        for (const ImputedRow& row : values) {
            Sample& s = working.samples[row.row_index];
            s.x = AxisValue::imputed(row.x);
            s.y = AxisValue::imputed(row.y);
            s.z = AxisValue::imputed(row.z);
        }
        if (log != nullptr) {
            PassRecord record;
            record.chunk_first_row = chunk->capture_offset;
            record.chunk_last_row =
                std::max(chunk->known_indices.back(), chunk->target_indices.back());
            record.targets = chunk->target_indices;
            log->pass_records.push_back(std::move(record));
            ++log->passes;
        }
    }
    return working;
}

std::pair<Capture, ImputationLog> impute_capture(const Capture& capture,
                                                 const ImputationConfig& config) {
    ImputationLog log;
    log.config = config;
    try {
        validate(config);
        log.report = detect_gaps(capture, config.gap_threshold);
        if (classify_capture(log.report, capture.sensor).discard) {
            log.status = CaptureStatus::discarded;
            return {capture, std::move(log)};
        }
        Capture working = insert_placeholders(capture, log.report);
        working = fill_placeholders(std::move(working), config, &log);
        log.status = CaptureStatus::complete;
        return {std::move(working), std::move(log)};
    } catch (const Error& e) {
        log.status = CaptureStatus::failed;
        log.error = e.what();
        return {capture, std::move(log)};
    }
}

void DatasetStats::add_bucket(Activity activity, Sensor sensor, Bucket bucket) {
    BucketCounts& counts = groups[{activity, sensor}];
    ++counts.total;
    switch (bucket) {
        case Bucket::none: ++counts.complete; break;
        case Bucket::small: ++counts.small; break;
        case Bucket::medium: ++counts.medium; break;
        case Bucket::large: ++counts.large; break;
    }
}

void DatasetStats::add_failure(std::optional<Activity> activity, std::optional<Sensor> sensor) {
    if (activity && sensor)
        ++groups[{*activity, *sensor}].failed;
    else
        ++unattributed_failures;
}

void DatasetStats::merge(const DatasetStats& other) {
    for (const auto& [key, counts] : other.groups) {
        BucketCounts& mine = groups[key];
        mine.total += counts.total;
        mine.complete += counts.complete;
        mine.small += counts.small;
        mine.medium += counts.medium;
        mine.large += counts.large;
        mine.failed += counts.failed;
    }
    unattributed_failures += other.unattributed_failures;
}

BucketCounts DatasetStats::totals() const {
    BucketCounts sum;
    for (const auto& [key, counts] : groups) {
        sum.total += counts.total;
        sum.complete += counts.complete;
        sum.small += counts.small;
        sum.medium += counts.medium;
        sum.large += counts.large;
        sum.failed += counts.failed;
    }
    sum.failed += unattributed_failures;
    return sum;
}

DatasetStats scan_dataset(std::span<const ScanEntry> entries, double gap_threshold) {
    DatasetStats stats;
    for (const ScanEntry& entry : entries) {
        if (!entry.capture) {
            stats.add_failure(entry.activity, entry.sensor);
            continue;
        }
        const Capture& capture = *entry.capture;
        try {
            const GapReport report = detect_gaps(capture, gap_threshold);
            stats.add_bucket(capture.activity, capture.sensor.name,
                             classify_capture(report, capture.sensor).bucket);
        } catch (const Error&) {
            stats.add_failure(capture.activity, capture.sensor.name);
        }
    }
    return stats;
}

std::vector<CaptureFile> discover_captures(const std::filesystem::path& input_dir,
                                           std::optional<Activity> activity_override,
                                           std::optional<Sensor> sensor_override) {
    if (!std::filesystem::is_directory(input_dir))
        fail(ErrorCode::io_error, "input directory not found: " + input_dir.string());
    std::vector<CaptureFile> items;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(input_dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".csv") continue;
        CaptureFile item;
        item.absolute = entry.path();
        item.relative = std::filesystem::relative(entry.path(), input_dir);
        item.activity = activity_override;
        item.sensor = sensor_override;
        // Layout is <activity>/<sensor>/<name>.csv; explicit overrides win.
        std::vector<std::string> parts;
        for (const auto& part : item.relative.parent_path()) parts.push_back(part.string());
        if (!item.sensor && !parts.empty()) item.sensor = parse_sensor(parts.back());
        if (!item.activity && parts.size() >= 2)
            item.activity = parse_activity(parts[parts.size() - 2]);
        items.push_back(std::move(item));
    }
    std::sort(items.begin(), items.end(),
              [](const CaptureFile& a, const CaptureFile& b) { return a.relative < b.relative; });
    return items;
}

namespace {

struct WorkerState {
    DatasetStats before;
    DatasetStats after;
};

FileResult process_capture(const CaptureFile& item, const PipelineOptions& options,
                           WorkerState& state) {
    FileResult result;
    result.path = item.relative.generic_string();

    const CaptureFile& labels = item;
    result.activity = labels.activity;
    result.sensor = labels.sensor;
    if (!labels.activity || !labels.sensor) {
        result.status = CaptureStatus::failed;
        result.error = "cannot resolve activity/sensor from path; pass --activity/--sensor";
        state.before.add_failure(labels.activity, labels.sensor);
        return result;
    }

    Capture capture;
    try {
        capture = load_capture_file(item.absolute, SensorKind::of(*labels.sensor),
                                    *labels.activity, options.duration_s);
    } catch (const Error& e) {
        result.status = CaptureStatus::failed;
        result.error = e.what();
        state.before.add_failure(labels.activity, labels.sensor);
        return result;
    }

    auto [imputed, log] = impute_capture(capture, options.config);
    result.status = log.status;
    result.passes = log.passes;
    result.error = log.error;

    if (log.status == CaptureStatus::failed) {
        state.before.add_failure(labels.activity, labels.sensor);
        return result;
    }

    result.report = log.report;
    result.bucket = log.report.bucket;
    result.missing_before = log.report.missing_count;
    state.before.add_bucket(*labels.activity, *labels.sensor, log.report.bucket);

    if (log.status == CaptureStatus::discarded) {
        result.missing_after = log.report.missing_count;
        return result;
    }

    result.missing_after = static_cast<int>(imputed.count_state(AxisState::missing));
    try {
        const auto out_path = options.output_dir / item.relative;
        std::filesystem::create_directories(out_path.parent_path());
        write_capture_file(out_path, imputed, options.provenance);
    } catch (const std::exception& e) {
        result.status = CaptureStatus::failed;
        result.error = e.what();
        state.before.add_failure(labels.activity, labels.sensor);
        return result;
    }

    const GapReport after_report = detect_gaps(imputed, options.config.gap_threshold);
    state.after.add_bucket(*labels.activity, *labels.sensor,
                           classify_capture(after_report, imputed.sensor).bucket);
    return result;
}

}  // namespace

PipelineSummary run_pipeline(const PipelineOptions& options) {
    validate(options.config);
    const std::vector<CaptureFile> items = discover_captures(
        options.input_dir, options.activity_override, options.sensor_override);
    std::filesystem::create_directories(options.output_dir);

    PipelineSummary summary;
    summary.results.resize(items.size());

    unsigned jobs = options.jobs > 0 ? static_cast<unsigned>(options.jobs)
                                     : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, std::max<std::size_t>(items.size(), 1));

    std::vector<WorkerState> states(jobs);
    std::atomic<std::size_t> next{0};

    auto worker = [&](unsigned worker_id) {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size()) break;
            summary.results[i] = process_capture(items[i], options, states[worker_id]);
        }
    };

    if (jobs <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
        for (auto& t : threads) t.join();
    }

    for (const WorkerState& state : states) {
        summary.before.merge(state.before);
        summary.after.merge(state.after);
    }
    for (const FileResult& r : summary.results) {
        switch (r.status) {
            case CaptureStatus::complete: ++summary.written; break;
            case CaptureStatus::discarded: ++summary.discarded; break;
            case CaptureStatus::failed: ++summary.failed; break;
        }
    }

    nlohmann::json j = summary;
    std::ofstream out(options.output_dir / "summary.json", std::ios::trunc);
    out << j.dump(2) << '\n';

    return summary;
}

void to_json(nlohmann::json& j, const BucketCounts& counts) {
    j = nlohmann::json{{"total", counts.total},   {"complete", counts.complete},
                       {"small", counts.small},   {"medium", counts.medium},
                       {"large", counts.large},   {"failed", counts.failed}};
}

void to_json(nlohmann::json& j, const DatasetStats& stats) {
    auto rows = nlohmann::json::array();
    for (const auto& [key, counts] : stats.groups) {
        nlohmann::json row = counts;
        row["activity"] = to_string(key.first);
        row["sensor"] = to_string(key.second);
        rows.push_back(std::move(row));
    }
    j = nlohmann::json{{"groups", std::move(rows)},
                       {"unattributed_failures", stats.unattributed_failures}};
}

void to_json(nlohmann::json& j, const FileResult& result) {
    j = nlohmann::json{{"path", result.path},
                       {"status", to_string(result.status)},
                       {"bucket", to_string(result.bucket)},
                       {"missing_before", result.missing_before},
                       {"missing_after", result.missing_after},
                       {"passes", result.passes}};
    if (result.activity) j["activity"] = to_string(*result.activity);
    if (result.sensor) j["sensor"] = to_string(*result.sensor);
    if (result.report) j["report"] = *result.report;
    if (!result.error.empty()) j["error"] = result.error;
}

void to_json(nlohmann::json& j, const PipelineSummary& summary) {
    j = nlohmann::json{{"captures", summary.results}, {"before", summary.before},
                       {"after", summary.after},      {"written", summary.written},
                       {"discarded", summary.discarded}, {"failed", summary.failed}};
}

}  // namespace gapfill
