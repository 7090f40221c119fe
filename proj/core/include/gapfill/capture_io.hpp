#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gapfill/capture.hpp"

namespace gapfill {

/// strict refuses captures that still contain missing rows; debug renders
/// them as Null placeholders for inspection of intermediate state.
enum class SerializeMode { strict, debug };

/// Parses the delimited capture format: optional header, then rows
/// `seq,timestamp_ms,x,y,z[,provenance]` (the seq column may be absent).
/// Comma and tab delimiters are accepted; axis fields may be `Null` only
/// as a whole row. Timestamps must be integral milliseconds and strictly
/// increasing.
Capture parse_capture(std::string_view text, SensorKind sensor, Activity activity,
                      int duration_s);

/// Emits rows as `seq,timestamp_ms,x,y,z[,provenance]` with a header line,
/// LF endings, sequence numbers regenerated from 1, and axis values in the
/// shortest decimal form that reparses to the identical double.
std::string serialize_capture(const Capture& capture, bool include_provenance,
                              SerializeMode mode = SerializeMode::strict);

Capture load_capture_file(const std::filesystem::path& path, SensorKind sensor,
                          Activity activity, int duration_s);

void write_capture_file(const std::filesystem::path& path, const Capture& capture,
                        bool include_provenance, SerializeMode mode = SerializeMode::strict);

/// Shortest decimal rendering that round-trips to the same double.
std::string format_double(double value);

}  // namespace gapfill
