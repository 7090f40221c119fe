#include "gapfill/capture.hpp"

#include <algorithm>

#include "gapfill/errors.hpp"

namespace gapfill {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::empty_input: return "empty input";
        case ErrorCode::malformed_row: return "malformed row";
        case ErrorCode::mixed_row: return "mixed row";
        case ErrorCode::non_increasing_timestamps: return "non-increasing timestamps";
        case ErrorCode::over_complete_capture: return "over-complete capture";
        case ErrorCode::missing_rows_present: return "missing rows present";
        case ErrorCode::grid_conflict: return "grid conflict";
        case ErrorCode::no_neighbors: return "no neighbors available";
        case ErrorCode::timestamp_mismatch: return "timestamp mismatch";
        case ErrorCode::invalid_gap_spec: return "invalid gap spec";
        case ErrorCode::invalid_config: return "invalid config";
        case ErrorCode::io_error: return "i/o error";
    }
    return "unknown error";
}

const char* to_string(Sensor sensor) {
    switch (sensor) {
        case Sensor::accelerometer: return "accelerometer";
        case Sensor::gyroscope: return "gyroscope";
        case Sensor::magnetometer: return "magnetometer";
    }
    return "?";
}

const char* to_string(Activity activity) {
    switch (activity) {
        case Activity::walking: return "walking";
        case Activity::running: return "running";
        case Activity::standing: return "standing";
        case Activity::moving_upstairs: return "moving_upstairs";
        case Activity::moving_downstairs: return "moving_downstairs";
    }
    return "?";
}

std::optional<Sensor> parse_sensor(std::string_view name) {
    if (name == "accelerometer") return Sensor::accelerometer;
    if (name == "gyroscope") return Sensor::gyroscope;
    if (name == "magnetometer") return Sensor::magnetometer;
    return std::nullopt;
}

std::optional<Activity> parse_activity(std::string_view name) {
    if (name == "walking") return Activity::walking;
    if (name == "running") return Activity::running;
    if (name == "standing") return Activity::standing;
    if (name == "moving_upstairs") return Activity::moving_upstairs;
    if (name == "moving_downstairs") return Activity::moving_downstairs;
    return std::nullopt;
}

SensorKind SensorKind::of(Sensor sensor) {
    switch (sensor) {
        case Sensor::accelerometer: return {Sensor::accelerometer, 100, 10};
        case Sensor::gyroscope: return {Sensor::gyroscope, 100, 10};
        case Sensor::magnetometer: return {Sensor::magnetometer, 10, 100};
    }
    fail(ErrorCode::invalid_config, "unknown sensor kind");
}

std::size_t Capture::count_state(AxisState state) const {
    return static_cast<std::size_t>(std::count_if(
        samples.begin(), samples.end(), [state](const Sample& s) { return s.wholly(state); }));
}

}  // namespace gapfill
