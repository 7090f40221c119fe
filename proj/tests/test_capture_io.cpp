#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "fixture_util.hpp"
#include "gapfill/capture_io.hpp"
#include "gapfill/errors.hpp"

using namespace gapfill;

namespace {

const SensorKind kAccel = SensorKind::of(Sensor::accelerometer);

Capture parse(std::string_view text) {
    return parse_capture(text, kAccel, Activity::moving_downstairs, 5);
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::io_error;
}

}  // namespace

TEST_CASE("sensor kinds carry the dataset rates") {
    CHECK(SensorKind::of(Sensor::accelerometer).nominal_rate_hz == 100);
    CHECK(SensorKind::of(Sensor::gyroscope).nominal_rate_hz == 100);
    CHECK(SensorKind::of(Sensor::magnetometer).nominal_rate_hz == 10);
    for (Sensor s : {Sensor::accelerometer, Sensor::gyroscope, Sensor::magnetometer}) {
        const SensorKind kind = SensorKind::of(s);
        CHECK(kind.nominal_period_ms * kind.nominal_rate_hz == 1000);
        CHECK(kind.fill_quota() * 10 == kind.discard_threshold());
    }
}

TEST_CASE("parses published excerpt rows") {
    const Capture c = parse(
        "1,1493996698893,-2.145,-9.174,3.802\n"
        "2,1493996698902,-0.612,-9.625,3.984\n");
    REQUIRE(c.samples.size() == 2);
    CHECK(c.samples[0].timestamp_ms == 1493996698893);
    CHECK(c.samples[0].x.value == -2.145);
    CHECK(c.samples[0].y.value == -9.174);
    CHECK(c.samples[0].z.value == 3.802);
    CHECK(c.samples[0].wholly(AxisState::observed));
    CHECK(c.samples[1].timestamp_ms == 1493996698902);
    CHECK(c.samples[1].wholly(AxisState::observed));
}

TEST_CASE("accepts header, tabs, CRLF, and seq-less rows") {
    SUBCASE("header line is skipped") {
        const Capture c = parse("seq,timestamp_ms,x,y,z\n1,100,1,2,3\n");
        CHECK(c.samples.size() == 1);
    }
    SUBCASE("paper-style header") {
        const Capture c = parse("Sr.#,Timestamp,Ax,Ay,Az\n1,100,1,2,3\n");
        CHECK(c.samples.size() == 1);
    }
    SUBCASE("tab delimited") {
        const Capture c = parse("1\t100\t1\t2\t3\n2\t110\t4\t5\t6\n");
        REQUIRE(c.samples.size() == 2);
        CHECK(c.samples[1].x.value == 4.0);
    }
    SUBCASE("CRLF") {
        const Capture c = parse("1,100,1,2,3\r\n2,110,4,5,6\r\n");
        CHECK(c.samples.size() == 2);
    }
    SUBCASE("no sequence column") {
        const Capture c = parse("100,1,2,3\n110,4,5,6\n");
        REQUIRE(c.samples.size() == 2);
        CHECK(c.samples[0].timestamp_ms == 100);
    }
    SUBCASE("sequence values are not trusted") {
        const Capture c = parse("7,100,1,2,3\n3,110,4,5,6\n");
        CHECK(c.samples.size() == 2);
    }
}

TEST_CASE("parse rejects invalid inputs") {
    CHECK(code_of([] { parse(""); }) == ErrorCode::empty_input);
    CHECK(code_of([] { parse("\n\n"); }) == ErrorCode::empty_input);
    CHECK(code_of([] { parse("seq,timestamp_ms,x,y,z\n"); }) == ErrorCode::empty_input);
    CHECK(code_of([] { parse("1,100,1,2,3\n2,100,4,5,6\n"); }) ==
          ErrorCode::non_increasing_timestamps);
    CHECK(code_of([] { parse("1,110,1,2,3\n2,100,4,5,6\n"); }) ==
          ErrorCode::non_increasing_timestamps);
    CHECK(code_of([] { parse("1,100,1\n"); }) == ErrorCode::malformed_row);
    CHECK(code_of([] { parse("1,100,1,2,3,observed,extra\n"); }) == ErrorCode::malformed_row);
    CHECK(code_of([] { parse("1,100,abc,2,3\n"); }) == ErrorCode::malformed_row);
    CHECK(code_of([] { parse("1,100.5,1,2,3\n"); }) == ErrorCode::malformed_row);
    CHECK(code_of([] { parse("x,100,1,2,3\n"); }) == ErrorCode::malformed_row);
    CHECK(code_of([] { parse("1,100,nan,2,3\n"); }) == ErrorCode::malformed_row);
    CHECK(code_of([] { parse("1,100,inf,2,3\n"); }) == ErrorCode::malformed_row);
    CHECK(code_of([] { parse("1,100,1,Null,3\n"); }) == ErrorCode::mixed_row);
    CHECK(code_of([] { parse("1,100,Null,Null,3\n"); }) == ErrorCode::mixed_row);
    SUBCASE("header is only recognized on the first line") {
        CHECK(code_of([] { parse("1,100,1,2,3\nseq,timestamp_ms,x,y,z\n"); }) ==
              ErrorCode::malformed_row);
    }
}

TEST_CASE("wholly-missing rows parse as placeholders") {
    const Capture c = parse("450,1493996702672,-0.526,-8.322,3.39\n451,1493996702682,Null,Null,Null\n");
    REQUIRE(c.samples.size() == 2);
    CHECK(c.samples[1].wholly(AxisState::missing));
}

TEST_CASE("provenance column round-trips imputed state") {
    const Capture c = parse(
        "1,100,1,2,3,observed\n"
        "2,110,4,5,6,imputed\n");
    REQUIRE(c.samples.size() == 2);
    CHECK(c.samples[0].wholly(AxisState::observed));
    CHECK(c.samples[1].wholly(AxisState::imputed));

    CHECK(code_of([] { parse("1,100,1,2,3,bogus\n"); }) == ErrorCode::malformed_row);
    CHECK(code_of([] { parse("1,100,1,2,3,missing\n"); }) == ErrorCode::malformed_row);
    CHECK(code_of([] { parse("1,100,Null,Null,Null,observed\n"); }) == ErrorCode::malformed_row);
}

TEST_CASE("serializes the row layout with regenerated sequence numbers") {
    Capture c{Activity::walking, kAccel, 5, {}};
    c.samples.push_back(Sample::observed(1493996698893, -2.145, -9.174, 3.802));
    c.samples.push_back(Sample::observed(1493996698902, -0.612, -9.625, 3.984));

    CHECK(serialize_capture(c, false) ==
          "seq,timestamp_ms,x,y,z\n"
          "1,1493996698893,-2.145,-9.174,3.802\n"
          "2,1493996698902,-0.612,-9.625,3.984\n");

    SUBCASE("provenance flag appends per-row state") {
        c.samples.push_back(Sample::imputed(1493996698912, 1.0, 2.0, 3.0));
        const std::string text = serialize_capture(c, true);
        CHECK(text.find("1,1493996698893,-2.145,-9.174,3.802,observed\n") != std::string::npos);
        CHECK(text.find("3,1493996698912,1,2,3,imputed\n") != std::string::npos);
    }
}

TEST_CASE("serialize refuses placeholders unless in debug mode") {
    Capture c{Activity::walking, kAccel, 5, {}};
    c.samples.push_back(Sample::observed(100, 1, 2, 3));
    c.samples.push_back(Sample::placeholder(110));

    CHECK(code_of([&] { serialize_capture(c, false); }) == ErrorCode::missing_rows_present);
    const std::string text = serialize_capture(c, true, SerializeMode::debug);
    CHECK(text.find("2,110,Null,Null,Null,missing\n") != std::string::npos);
}

TEST_CASE("round-trip preserves timestamps and values exactly") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> value(-40.0, 40.0);
    std::uniform_int_distribution<int> step(1, 1000);
    std::uniform_int_distribution<int> len(1, 120);

    for (int trial = 0; trial < 200; ++trial) {
        Capture c{Activity::running, kAccel, 5, {}};
        std::int64_t ts = fixtures::kEpochBase + trial;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            // stress the shortest-round-trip rendering with awkward reals
            const double scale = std::pow(10.0, trial % 7 - 3);
            if (trial % 3 == 0)
                c.samples.push_back(Sample::imputed(ts, value(rng) * scale, value(rng),
                                                    value(rng) / 3.0));
            else
                c.samples.push_back(Sample::observed(ts, value(rng) * scale, value(rng),
                                                     value(rng) / 7.0));
            ts += step(rng);
        }
        const bool provenance = trial % 2 == 0;
        Capture back = parse_capture(serialize_capture(c, provenance), kAccel,
                                     Activity::running, 5);
        if (!provenance)  // without the column, imputed state is not representable
            for (auto& s : c.samples)
                s = Sample::observed(s.timestamp_ms, s.x.value, s.y.value, s.z.value);
        REQUIRE(back == c);
    }
}

TEST_CASE("format_double emits shortest form that reparses identically") {
    CHECK(format_double(3.39) == "3.39");
    CHECK(format_double(-8.322) == "-8.322");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1e300) == "1e+300");
}

TEST_CASE("file i/o reports missing paths") {
    CHECK(code_of([] {
              load_capture_file("/nonexistent/file.csv", kAccel, Activity::walking, 5);
          }) == ErrorCode::io_error);

    fixtures::TempDir dir("io");
    Capture c{Activity::walking, kAccel, 5, {}};
    c.samples.push_back(Sample::observed(100, 1.5, 2.5, 3.5));
    write_capture_file(dir.path() / "a.csv", c, false);
    CHECK(load_capture_file(dir.path() / "a.csv", kAccel, Activity::walking, 5) == c);
}
