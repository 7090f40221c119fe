#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gapfill/capture_io.hpp"
#include "gapfill/errors.hpp"
#include "gapfill/eval.hpp"
#include "gapfill/gap_detection.hpp"
#include "gapfill/pipeline.hpp"

namespace {

using namespace gapfill;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
    std::string input;
    std::optional<Sensor> sensor;
    std::optional<Activity> activity;
    int duration_s = 5;
    ImputationConfig config;
};

void add_common_flags(CLI::App& cmd, CommonFlags& flags, bool with_kernel_flags) {
    cmd.add_option("--input", flags.input, "Input directory of capture files")
        ->required()
        ->check(CLI::ExistingDirectory);
    cmd.add_option_function<std::string>(
           "--sensor",
           [&flags](const std::string& name) {
               auto sensor = parse_sensor(name);
               if (!sensor) throw CLI::ValidationError("--sensor", "unknown sensor " + name);
               flags.sensor = *sensor;
           },
           "Sensor kind (accelerometer|gyroscope|magnetometer); otherwise from the path layout");
    cmd.add_option_function<std::string>(
           "--activity",
           [&flags](const std::string& name) {
               auto activity = parse_activity(name);
               if (!activity) throw CLI::ValidationError("--activity", "unknown activity " + name);
               flags.activity = *activity;
           },
           "Activity label; otherwise from the path layout");
    cmd.add_option("--duration-s", flags.duration_s, "Capture duration in seconds")
        ->default_val(5)
        ->check(CLI::PositiveNumber);
    cmd.add_option("--gap-threshold", flags.config.gap_threshold,
                   "Delta counts as a gap above this multiple of the nominal period")
        ->default_val(1.5)
        ->check(CLI::Range(1.000001, 1e6));
    if (with_kernel_flags) {
        cmd.add_option("--k", flags.config.k, "Neighbor count")
            ->default_val(5)
            ->check(CLI::PositiveNumber);
        cmd.add_option_function<std::string>(
               "--weighting",
               [&flags](const std::string& name) {
                   if (name == "uniform")
                       flags.config.weighting = Weighting::uniform;
                   else if (name == "inverse-distance")
                       flags.config.weighting = Weighting::inverse_distance;
                   else
                       throw CLI::ValidationError("--weighting", "unknown weighting " + name);
               },
               "Neighbor weighting (uniform|inverse-distance)");
    }
}

void print_stats_table(const DatasetStats& stats, std::FILE* out) {
    std::fprintf(out, "%-20s %-14s %8s %8s %8s %8s %8s %8s\n", "activity", "sensor", "total",
                 "complete", "small", "medium", "large", "failed");
    for (const auto& [key, c] : stats.groups)
        std::fprintf(out, "%-20s %-14s %8d %8d %8d %8d %8d %8d\n", to_string(key.first),
                     to_string(key.second), c.total, c.complete, c.small, c.medium, c.large,
                     c.failed);
    const BucketCounts t = stats.totals();
    std::fprintf(out, "%-20s %-14s %8d %8d %8d %8d %8d %8d\n", "TOTAL", "", t.total, t.complete,
                 t.small, t.medium, t.large, t.failed);
    if (stats.unattributed_failures > 0)
        std::fprintf(out, "unattributed failures: %d\n", stats.unattributed_failures);
}

int cmd_scan(const CommonFlags& flags) {
    const auto files = discover_captures(flags.input, flags.activity, flags.sensor);

    std::vector<ScanEntry> entries;
    entries.reserve(files.size());
    bool any_failure = false;

    for (const CaptureFile& file : files) {
        ScanEntry entry;
        entry.path = file.relative.generic_string();
        entry.activity = file.activity;
        entry.sensor = file.sensor;
        if (!file.activity || !file.sensor) {
            std::printf("FILE %s ERROR cannot resolve activity/sensor from path\n",
                        entry.path.c_str());
            any_failure = true;
            entries.push_back(std::move(entry));
            continue;
        }
        try {
            Capture capture = load_capture_file(file.absolute, SensorKind::of(*file.sensor),
                                                *file.activity, flags.duration_s);
            const GapReport report = detect_gaps(capture, flags.config.gap_threshold);
            std::printf("FILE %s bucket=%s missing=%d\n", entry.path.c_str(),
                        to_string(report.bucket), report.missing_count);
            entry.capture = std::move(capture);
        } catch (const Error& e) {
            std::printf("FILE %s ERROR %s\n", entry.path.c_str(), e.what());
            any_failure = true;
        }
        entries.push_back(std::move(entry));
    }

    const DatasetStats stats = scan_dataset(entries, flags.config.gap_threshold);
    std::printf("\n");
    print_stats_table(stats, stdout);
    return any_failure ? kExitFailure : kExitOk;
}

int cmd_impute(const CommonFlags& flags, const std::string& output, bool provenance, int jobs) {
    PipelineOptions options;
    options.input_dir = flags.input;
    options.output_dir = output;
    options.config = flags.config;
    options.provenance = provenance;
    options.jobs = jobs;
    options.duration_s = flags.duration_s;
    options.sensor_override = flags.sensor;
    options.activity_override = flags.activity;

    const PipelineSummary summary = run_pipeline(options);

    for (const FileResult& r : summary.results) {
        if (r.status == CaptureStatus::failed)
            std::printf("FILE %s status=failed error=\"%s\"\n", r.path.c_str(), r.error.c_str());
        else
            std::printf("FILE %s status=%s bucket=%s missing_before=%d missing_after=%d passes=%d\n",
                        r.path.c_str(), to_string(r.status), to_string(r.bucket),
                        r.missing_before, r.missing_after, r.passes);
    }
    std::printf("\nbefore:\n");
    print_stats_table(summary.before, stdout);
    std::printf("\nafter (written files):\n");
    print_stats_table(summary.after, stdout);
    std::printf("\nwritten=%d discarded=%d failed=%d\n", summary.written, summary.discarded,
                summary.failed);
    return summary.failed > 0 ? kExitFailure : kExitOk;
}

std::string format_score_field(const std::optional<double>& value) {
    return value ? format_double(*value) : "nan";
}

int cmd_eval(const CommonFlags& flags, GapMode mode, int count, std::size_t position,
             std::uint64_t seed) {
    const auto files = discover_captures(flags.input, flags.activity, flags.sensor);

    int complete_seen = 0;
    bool any_failure = false;
    std::printf("path,method,axis,rmse,mae,amplitude_ratio,n_scored\n");

    for (const CaptureFile& file : files) {
        const std::string path = file.relative.generic_string();
        if (!file.activity || !file.sensor) {
            std::fprintf(stderr, "%s: cannot resolve activity/sensor from path\n", path.c_str());
            any_failure = true;
            continue;
        }
        try {
            const Capture capture = load_capture_file(
                file.absolute, SensorKind::of(*file.sensor), *file.activity, flags.duration_s);
            const GapReport report = detect_gaps(capture, flags.config.gap_threshold);
            if (report.missing_count != 0) {
                std::fprintf(stderr, "%s: skipped, %d samples missing\n", path.c_str(),
                             report.missing_count);
                continue;
            }
            ++complete_seen;

            GapSpec spec;
            spec.mode = mode;
            spec.count = count > 0 ? count : capture.sensor.fill_quota();
            spec.position = position;
            spec.seed = seed;

            const auto table = compare_baselines(capture, spec, flags.config);
            for (const auto& [method, scorecard] : table) {
                const AxisScore* axes[3] = {&scorecard.x, &scorecard.y, &scorecard.z};
                const char* names[3] = {"x", "y", "z"};
                for (int a = 0; a < 3; ++a)
                    std::printf("%s,%s,%s,%s,%s,%s,%d\n", path.c_str(), to_string(method),
                                names[a], format_double(axes[a]->rmse).c_str(),
                                format_double(axes[a]->mae).c_str(),
                                format_score_field(axes[a]->amplitude_ratio).c_str(),
                                scorecard.n_scored);
            }
        } catch (const Error& e) {
            std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
            any_failure = true;
        }
    }

    if (complete_seen == 0) {
        std::fprintf(stderr, "no complete captures found under %s\n", flags.input.c_str());
        return kExitFailure;
    }
    return any_failure ? kExitFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Missing-sample detection and KNN imputation for inertial sensor captures"};
    app.require_subcommand(1);

    CommonFlags scan_flags;
    CLI::App* scan = app.add_subcommand("scan", "Diagnose gaps and print dataset statistics");
    add_common_flags(*scan, scan_flags, false);

    CommonFlags impute_flags;
    std::string impute_output;
    bool provenance = true;
    int jobs = 0;
    CLI::App* impute = app.add_subcommand("impute", "Fill missing samples and write outputs");
    add_common_flags(*impute, impute_flags, true);
    impute->add_option("--output", impute_output, "Output directory")->required();
    impute->add_flag("--provenance,!--no-provenance", provenance,
                     "Append an observed/imputed column to outputs (default on)");
    impute->add_option("--jobs", jobs, "Worker threads (0 = all processors)")
        ->default_val(0)
        ->check(CLI::NonNegativeNumber);

    CommonFlags eval_flags;
    GapMode mode = GapMode::trailing;
    int count = 0;
    std::size_t position = 0;
    std::uint64_t seed = 0;
    CLI::App* eval = app.add_subcommand("eval", "Inject synthetic gaps and score fill methods");
    add_common_flags(*eval, eval_flags, true);
    eval->add_option_function<std::string>(
            "--mode",
            [&mode](const std::string& name) {
                if (name == "trailing")
                    mode = GapMode::trailing;
                else if (name == "internal-at")
                    mode = GapMode::internal_at;
                else if (name == "random")
                    mode = GapMode::random;
                else
                    throw CLI::ValidationError("--mode", "unknown mode " + name);
            },
            "Gap placement (trailing|internal-at|random), default trailing");
    eval->add_option("--count", count, "Rows to remove (default: one fill quota)")
        ->check(CLI::NonNegativeNumber);
    eval->add_option("--position", position, "Start row for internal-at mode");
    eval->add_option("--seed", seed, "Seed for random mode")->default_val(0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (scan->parsed()) return cmd_scan(scan_flags);
        if (impute->parsed()) return cmd_impute(impute_flags, impute_output, provenance, jobs);
        return cmd_eval(eval_flags, mode, count, position, seed);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
}
