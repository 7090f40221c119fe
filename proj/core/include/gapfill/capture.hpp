#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gapfill {

enum class Sensor { accelerometer, gyroscope, magnetometer };

enum class Activity { walking, running, standing, moving_upstairs, moving_downstairs };

const char* to_string(Sensor sensor);
const char* to_string(Activity activity);
std::optional<Sensor> parse_sensor(std::string_view name);
std::optional<Activity> parse_activity(std::string_view name);

/// Sampling characteristics of one sensor type. Rates are fixed properties
/// of the dataset hardware: 100 Hz for accelerometer and gyroscope, 10 Hz
/// for magnetometer.
struct SensorKind {
    Sensor name;
    int nominal_rate_hz;
    int nominal_period_ms;

    static SensorKind of(Sensor sensor);

    /// Missing-count bound above which a capture is dropped: one second
    /// of samples (100 at 100 Hz, 10 at 10 Hz).
    int discard_threshold() const { return nominal_rate_hz; }

    /// Maximum rows imputed per pass: a tenth of the discard threshold.
    int fill_quota() const { return discard_threshold() / 10; }

    friend bool operator==(const SensorKind&, const SensorKind&) = default;
};

enum class AxisState { observed, missing, imputed };

/// One axis reading. `value` is meaningful only when state != missing
/// (it is normalized to 0.0 for missing so that value equality is total).
struct AxisValue {
    AxisState state = AxisState::missing;
    double value = 0.0;

    static AxisValue observed(double v) { return {AxisState::observed, v}; }
    static AxisValue imputed(double v) { return {AxisState::imputed, v}; }
    static AxisValue missing() { return {AxisState::missing, 0.0}; }

    friend bool operator==(const AxisValue&, const AxisValue&) = default;
};

/// One row: a millisecond timestamp plus the three axis readings.
/// The pipeline only ever produces rows whose axes share one state.
struct Sample {
    std::int64_t timestamp_ms = 0;
    AxisValue x, y, z;

    bool wholly(AxisState state) const {
        return x.state == state && y.state == state && z.state == state;
    }
    bool uniform_state() const { return x.state == y.state && y.state == z.state; }

    /// State shared by all three axes; callers must know the row is uniform.
    AxisState row_state() const { return x.state; }

    static Sample observed(std::int64_t ts, double x, double y, double z) {
        return {ts, AxisValue::observed(x), AxisValue::observed(y), AxisValue::observed(z)};
    }
    static Sample imputed(std::int64_t ts, double x, double y, double z) {
        return {ts, AxisValue::imputed(x), AxisValue::imputed(y), AxisValue::imputed(z)};
    }
    static Sample placeholder(std::int64_t ts) {
        return {ts, AxisValue::missing(), AxisValue::missing(), AxisValue::missing()};
    }

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// One fixed-duration recording of one sensor during one activity.
struct Capture {
    Activity activity = Activity::walking;
    SensorKind sensor;
    int duration_s = 0;
    std::vector<Sample> samples;

    std::size_t count_state(AxisState state) const;

    friend bool operator==(const Capture&, const Capture&) = default;
};

}  // namespace gapfill
