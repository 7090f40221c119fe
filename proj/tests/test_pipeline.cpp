#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "fixture_util.hpp"
#include "gapfill/capture_io.hpp"
#include "gapfill/errors.hpp"
#include "gapfill/pipeline.hpp"

using namespace gapfill;
using fixtures::grid_capture;
using fixtures::remove_tail;
using fixtures::sine_signal;
using fixtures::TempDir;

namespace {

const ImputationConfig kDefaultConfig{};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

Capture golden_capture() {
    return load_capture_file(fixtures::test_data_dir() / "accel_450_trailing50.csv",
                             SensorKind::of(Sensor::accelerometer), Activity::moving_downstairs,
                             5);
}

}  // namespace

TEST_CASE("golden capture completes in exactly 5 passes") {
    const Capture c = golden_capture();
    const auto [imputed, log] = impute_capture(c, kDefaultConfig);
    CHECK(log.status == CaptureStatus::complete);
    CHECK(log.passes == 5);
    CHECK(log.pass_records.size() == 5);
    CHECK(imputed.samples.size() == 500);
    CHECK(imputed.count_state(AxisState::missing) == 0);
    CHECK(imputed.count_state(AxisState::imputed) == 50);

    SUBCASE("observed rows are conserved bit-for-bit") {
        for (std::size_t i = 0; i < c.samples.size(); ++i)
            CHECK(imputed.samples[i] == c.samples[i]);
    }
    SUBCASE("pass records advance one quota at a time") {
        for (int p = 0; p < 5; ++p) {
            REQUIRE(log.pass_records[p].targets.size() == 10);
            CHECK(log.pass_records[p].targets.front() == 450 + std::size_t(p) * 10);
        }
    }
}

TEST_CASE("complete captures pass through untouched") {
    const Capture c = grid_capture(Sensor::accelerometer, 5, sine_signal());
    const auto [imputed, log] = impute_capture(c, kDefaultConfig);
    CHECK(log.status == CaptureStatus::complete);
    CHECK(log.passes == 0);
    CHECK(imputed == c);
}

TEST_CASE("discard boundary sits at one second of missing samples") {
    const Capture accel = grid_capture(Sensor::accelerometer, 5, sine_signal());
    SUBCASE("accelerometer 100 kept") {
        const auto [imputed, log] = impute_capture(remove_tail(accel, 100), kDefaultConfig);
        CHECK(log.status == CaptureStatus::complete);
        CHECK(imputed.samples.size() == 500);
    }
    SUBCASE("accelerometer 101 discarded") {
        const Capture degraded = remove_tail(accel, 101);
        const auto [imputed, log] = impute_capture(degraded, kDefaultConfig);
        CHECK(log.status == CaptureStatus::discarded);
        CHECK(log.passes == 0);
        CHECK(imputed == degraded);  // returned unmodified
    }
    const Capture mag = grid_capture(Sensor::magnetometer, 5, sine_signal());
    SUBCASE("magnetometer 10 kept, 11 discarded") {
        CHECK(impute_capture(remove_tail(mag, 10), kDefaultConfig).second.status ==
              CaptureStatus::complete);
        CHECK(impute_capture(remove_tail(mag, 11), kDefaultConfig).second.status ==
              CaptureStatus::discarded);
    }
}

TEST_CASE("pass count is ceil(missing / quota) for trailing gaps") {
    std::mt19937_64 rng(17);
    const Capture accel = grid_capture(Sensor::accelerometer, 5, sine_signal());
    std::uniform_int_distribution<int> gap_dist(1, 100);
    for (int trial = 0; trial < 25; ++trial) {
        const int gap = gap_dist(rng);
        const auto [imputed, log] = impute_capture(remove_tail(accel, gap), kDefaultConfig);
        CHECK(log.status == CaptureStatus::complete);
        CHECK(log.passes == (gap + 9) / 10);
        CHECK(log.report.missing_count == gap);
    }
}

TEST_CASE("errors are recorded, never thrown, and inputs stay intact") {
    Capture with_placeholder = grid_capture(Sensor::magnetometer, 1, sine_signal());
    with_placeholder.samples[3] = Sample::placeholder(with_placeholder.samples[3].timestamp_ms);
    const Capture before = with_placeholder;

    const auto [result, log] = impute_capture(with_placeholder, kDefaultConfig);
    CHECK(log.status == CaptureStatus::failed);
    CHECK(!log.error.empty());
    CHECK(result == before);

    SUBCASE("invalid config also fails cleanly") {
        const auto [r2, log2] =
            impute_capture(grid_capture(Sensor::magnetometer, 1, sine_signal()),
                           ImputationConfig{0, Weighting::uniform, 1.5});
        CHECK(log2.status == CaptureStatus::failed);
    }
}

TEST_CASE("scan_dataset classifies and never drops entries") {
    SUBCASE("empty input gives all-zero stats") {
        const DatasetStats stats = scan_dataset({});
        CHECK(stats.groups.empty());
        CHECK(stats.totals() == BucketCounts{});
    }

    SUBCASE("missing 0 / 5 / 150 split into complete, small, large") {
        const Capture base = grid_capture(Sensor::accelerometer, 5, sine_signal());
        std::vector<ScanEntry> entries;
        for (const int gap : {0, 5, 150}) {
            ScanEntry e;
            e.path = "gap" + std::to_string(gap);
            e.capture = gap == 0 ? base : remove_tail(base, std::size_t(gap));
            entries.push_back(std::move(e));
        }
        const DatasetStats stats = scan_dataset(entries);
        const BucketCounts t = stats.totals();
        CHECK(t.total == 3);
        CHECK(t.complete == 1);
        CHECK(t.small == 1);
        CHECK(t.medium == 0);
        CHECK(t.large == 1);
        CHECK(t.failed == 0);
        CHECK(t.complete + t.small + t.medium + t.large == t.total);
    }

    SUBCASE("unreadable entries land in the failed tally") {
        std::vector<ScanEntry> entries(2);
        entries[0].path = "bad1";
        entries[0].activity = Activity::walking;
        entries[0].sensor = Sensor::accelerometer;
        entries[1].path = "bad2";  // no labels either
        const DatasetStats stats = scan_dataset(entries);
        CHECK(stats.totals().failed == 2);
        CHECK(stats.unattributed_failures == 1);
    }
}

TEST_CASE("stats merge over a partition equals the whole") {
    std::mt19937_64 rng(23);
    const Capture base = grid_capture(Sensor::accelerometer, 5, sine_signal());
    std::uniform_int_distribution<int> gap_dist(0, 120);
    std::uniform_int_distribution<int> act_dist(0, 4);

    std::vector<ScanEntry> entries;
    for (int i = 0; i < 60; ++i) {
        ScanEntry e;
        e.path = "cap" + std::to_string(i);
        Capture c = remove_tail(base, std::size_t(gap_dist(rng)));
        c.activity = static_cast<Activity>(act_dist(rng));
        e.capture = std::move(c);
        entries.push_back(std::move(e));
    }

    const DatasetStats whole = scan_dataset(entries);
    std::uniform_int_distribution<std::size_t> cut_dist(0, entries.size());
    const std::size_t cut = cut_dist(rng);
    DatasetStats left = scan_dataset(std::span(entries).subspan(0, cut));
    const DatasetStats right = scan_dataset(std::span(entries).subspan(cut));
    left.merge(right);
    CHECK(left == whole);

    DatasetStats reversed = scan_dataset(std::span(entries).subspan(cut));
    reversed.merge(scan_dataset(std::span(entries).subspan(0, cut)));
    CHECK(reversed == whole);
}

namespace {

struct TreeFixture {
    TempDir input{"pipe_in"};
    TempDir output{"pipe_out"};

    void add(const std::string& rel, const Capture& capture) {
        const auto path = input.path() / rel;
        std::filesystem::create_directories(path.parent_path());
        write_capture_file(path, capture, false);
    }

    PipelineOptions options() const {
        PipelineOptions o;
        o.input_dir = input.path();
        o.output_dir = output.path();
        o.jobs = 1;
        return o;
    }
};

}  // namespace

TEST_CASE("run_pipeline writes completed captures and a summary") {
    TreeFixture tree;
    const Capture complete = grid_capture(Sensor::accelerometer, 5, sine_signal());
    tree.add("walking/accelerometer/c1.csv", complete);
    tree.add("walking/accelerometer/c2.csv", complete);
    tree.add("running/accelerometer/c3.csv", remove_tail(complete, 7));

    const PipelineSummary summary = run_pipeline(tree.options());
    CHECK(summary.written == 3);
    CHECK(summary.discarded == 0);
    CHECK(summary.failed == 0);
    REQUIRE(summary.results.size() == 3);
    CHECK(summary.results[0].path == "running/accelerometer/c3.csv");  // sorted
    CHECK(summary.results[0].passes == 1);

    const BucketCounts after = summary.after.totals();
    CHECK(after.total == 3);
    CHECK(after.complete == 3);

    SUBCASE("outputs parse back complete, observed rows conserved") {
        const Capture out = load_capture_file(tree.output.path() / "running/accelerometer/c3.csv",
                                              SensorKind::of(Sensor::accelerometer),
                                              Activity::running, 5);
        REQUIRE(out.samples.size() == 500);
        CHECK(out.count_state(AxisState::missing) == 0);
        CHECK(out.count_state(AxisState::imputed) == 7);
        for (std::size_t i = 0; i < 493; ++i) CHECK(out.samples[i] == complete.samples[i]);
    }

    SUBCASE("summary.json mirrors the run") {
        const nlohmann::json j = nlohmann::json::parse(slurp(tree.output.path() / "summary.json"));
        CHECK(j["written"] == 3);
        CHECK(j["captures"].size() == 3);
        CHECK(j["captures"][0]["path"] == "running/accelerometer/c3.csv");
        CHECK(j["captures"][0]["report"]["missing"] == 7);
        CHECK(j["captures"][0]["report"]["spans"][0]["kind"] == "trailing");
        CHECK(j["after"]["groups"].size() == 2);
    }
}

TEST_CASE("discarded captures produce no output file") {
    TreeFixture tree;
    const Capture complete = grid_capture(Sensor::accelerometer, 5, sine_signal());
    tree.add("walking/accelerometer/keep.csv", complete);
    tree.add("walking/accelerometer/drop.csv", remove_tail(complete, 150));

    const PipelineSummary summary = run_pipeline(tree.options());
    CHECK(summary.written == 1);
    CHECK(summary.discarded == 1);
    CHECK(summary.failed == 0);
    CHECK(std::filesystem::exists(tree.output.path() / "walking/accelerometer/keep.csv"));
    CHECK(!std::filesystem::exists(tree.output.path() / "walking/accelerometer/drop.csv"));

    const FileResult& dropped = summary.results[0];
    CHECK(dropped.path == "walking/accelerometer/drop.csv");
    CHECK(dropped.status == CaptureStatus::discarded);
    CHECK(dropped.bucket == Bucket::large);
}

TEST_CASE("unparsable and unlabeled files fail without stopping the run") {
    TreeFixture tree;
    tree.add("walking/accelerometer/good.csv", grid_capture(Sensor::accelerometer, 5, sine_signal()));
    std::ofstream(tree.input.path() / "walking/accelerometer/junk.csv") << "not,a,capture\n";
    std::filesystem::create_directories(tree.input.path() / "stray");
    std::ofstream(tree.input.path() / "stray/orphan.csv") << "1,100,1,2,3\n";

    const PipelineSummary summary = run_pipeline(tree.options());
    CHECK(summary.written == 1);
    CHECK(summary.failed == 2);
    CHECK(summary.before.totals().failed == 2);
    // junk.csv keeps its path-derived labels; the stray file has none
    const auto group = summary.before.groups.find({Activity::walking, Sensor::accelerometer});
    REQUIRE(group != summary.before.groups.end());
    CHECK(group->second.failed == 1);
    CHECK(summary.before.unattributed_failures == 1);
}

TEST_CASE("golden fixture run marks rows 451..500 imputed in the output") {
    TreeFixture tree;
    std::filesystem::create_directories(tree.input.path() / "moving_downstairs/accelerometer");
    std::filesystem::copy_file(fixtures::test_data_dir() / "accel_450_trailing50.csv",
                               tree.input.path() /
                                   "moving_downstairs/accelerometer/excerpt.csv");

    const PipelineSummary summary = run_pipeline(tree.options());
    REQUIRE(summary.written == 1);
    CHECK(summary.results[0].passes == 5);

    const std::string text =
        slurp(tree.output.path() / "moving_downstairs/accelerometer/excerpt.csv");
    std::size_t imputed_rows = 0;
    std::size_t pos = 0;
    while ((pos = text.find(",imputed\n", pos)) != std::string::npos) {
        ++imputed_rows;
        pos += 9;
    }
    CHECK(imputed_rows == 50);
    CHECK(text.find("451,1493996702682,") != std::string::npos);
    CHECK(text.find("500,1493996703172,") != std::string::npos);
}

TEST_CASE("pipeline output is a fixed point: second run changes nothing") {
    TreeFixture tree;
    const Capture complete = grid_capture(Sensor::accelerometer, 5, sine_signal());
    tree.add("walking/accelerometer/a.csv", remove_tail(complete, 23));
    tree.add("walking/accelerometer/b.csv", complete);

    const PipelineSummary first = run_pipeline(tree.options());
    REQUIRE(first.written == 2);

    TempDir second_out("pipe_out2");
    PipelineOptions opts;
    opts.input_dir = tree.output.path();
    opts.output_dir = second_out.path();
    opts.jobs = 1;
    const PipelineSummary second = run_pipeline(opts);
    REQUIRE(second.written == 2);
    for (const FileResult& r : second.results) CHECK(r.passes == 0);

    for (const char* name : {"walking/accelerometer/a.csv", "walking/accelerometer/b.csv"})
        CHECK(slurp(tree.output.path() / name) == slurp(second_out.path() / name));
}

TEST_CASE("parallel execution matches single-threaded results") {
    TreeFixture tree;
    std::mt19937_64 rng(29);
    const Capture base = grid_capture(Sensor::accelerometer, 5, sine_signal());
    std::uniform_int_distribution<int> gap_dist(0, 120);
    for (int i = 0; i < 24; ++i)
        tree.add("walking/accelerometer/c" + std::to_string(i) + ".csv",
                 remove_tail(base, std::size_t(gap_dist(rng))));

    PipelineOptions serial = tree.options();
    const PipelineSummary one = run_pipeline(serial);

    TempDir out2("pipe_par");
    PipelineOptions parallel = tree.options();
    parallel.output_dir = out2.path();
    parallel.jobs = 4;
    const PipelineSummary many = run_pipeline(parallel);

    CHECK(one.written == many.written);
    CHECK(one.discarded == many.discarded);
    CHECK(one.before == many.before);
    CHECK(one.after == many.after);
    REQUIRE(one.results.size() == many.results.size());
    for (std::size_t i = 0; i < one.results.size(); ++i) {
        CHECK(one.results[i].path == many.results[i].path);
        CHECK(one.results[i].passes == many.results[i].passes);
        if (one.results[i].status == CaptureStatus::complete)
            CHECK(slurp(tree.output.path() / one.results[i].path) ==
                  slurp(out2.path() / many.results[i].path));
    }
}

TEST_CASE("missing input directory is an i/o error") {
    PipelineOptions opts;
    opts.input_dir = "/nonexistent/gapfill_input";
    opts.output_dir = std::filesystem::temp_directory_path() / "gapfill_never";
    try {
        run_pipeline(opts);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io_error);
    }
}
