#pragma once

#include <stdexcept>
#include <string>

namespace gapfill {

enum class ErrorCode {
    empty_input,
    malformed_row,
    mixed_row,
    non_increasing_timestamps,
    over_complete_capture,
    missing_rows_present,
    grid_conflict,
    no_neighbors,
    timestamp_mismatch,
    invalid_gap_spec,
    invalid_config,
    io_error,
};

const char* to_string(ErrorCode code);

/// Library-wide exception; code() identifies the failure class for callers
/// that dispatch on it (the pipeline records it per file).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace gapfill
