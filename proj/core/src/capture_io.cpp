#include "gapfill/capture_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "gapfill/errors.hpp"

namespace gapfill {

namespace {

bool is_null_token(std::string_view field) {
    if (field.empty()) return true;
    if (field.size() != 4) return false;
    return (field[0] == 'n' || field[0] == 'N') && (field[1] == 'u' || field[1] == 'U') &&
           (field[2] == 'l' || field[2] == 'L') && (field[3] == 'l' || field[3] == 'L');
}

bool parse_int64(std::string_view field, std::int64_t& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !field.empty();
}

bool parse_axis(std::string_view field, double& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

struct RowLayout {
    bool has_seq = false;
    bool has_provenance = false;
};

RowLayout layout_for(std::size_t field_count, std::size_t line_no) {
    switch (field_count) {
        case 4: return {false, false};
        case 5: return {true, false};
        case 6: return {true, true};
        default:
            fail(ErrorCode::malformed_row,
                 "line " + std::to_string(line_no) + ": expected 4-6 fields, got " +
                     std::to_string(field_count));
    }
}

}  // namespace

Capture parse_capture(std::string_view text, SensorKind sensor, Activity activity,
                      int duration_s) {
    Capture capture{activity, sensor, duration_s, {}};

    std::size_t line_no = 0;
    bool first_content_line = true;
    char delimiter = ',';

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            (eol == std::string_view::npos) ? text.substr(pos) : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;

        if (first_content_line) {
            delimiter = line.find('\t') != std::string_view::npos ? '\t' : ',';
        }

        auto raw = split_fields(line, delimiter);
        std::vector<std::string_view> fields;
        fields.reserve(raw.size());
        for (auto f : raw) fields.push_back(trim(f));

        RowLayout layout = layout_for(fields.size(), line_no);

        if (first_content_line) {
            first_content_line = false;
            // Header heuristic: the timestamp position starts with a letter
            // (e.g. "Timestamp", "timestamp_ms"). Numeric-looking fields fall
            // through to row parsing so malformed first rows still error.
            std::string_view ts_field = fields[layout.has_seq ? 1 : 0];
            const bool numeric_start =
                !ts_field.empty() &&
                (std::isdigit(static_cast<unsigned char>(ts_field.front())) != 0 ||
                 ts_field.front() == '-' || ts_field.front() == '+');
            if (!numeric_start && !is_null_token(ts_field)) continue;
        }

        std::size_t i = 0;
        if (layout.has_seq) {
            std::int64_t seq = 0;
            if (!parse_int64(fields[i], seq))
                fail(ErrorCode::malformed_row,
                     "line " + std::to_string(line_no) + ": non-integer sequence number '" +
                         std::string(fields[i]) + "'");
            ++i;  // value is derived data, never trusted
        }

        std::int64_t ts = 0;
        if (!parse_int64(fields[i], ts))
            fail(ErrorCode::malformed_row, "line " + std::to_string(line_no) +
                                               ": non-integer timestamp '" +
                                               std::string(fields[i]) + "'");
        ++i;

        AxisValue axes[3];
        int missing_axes = 0;
        for (int a = 0; a < 3; ++a, ++i) {
            if (is_null_token(fields[i])) {
                axes[a] = AxisValue::missing();
                ++missing_axes;
            } else {
                double v = 0.0;
                if (!parse_axis(fields[i], v))
                    fail(ErrorCode::malformed_row, "line " + std::to_string(line_no) +
                                                       ": non-numeric axis value '" +
                                                       std::string(fields[i]) + "'");
                axes[a] = AxisValue::observed(v);
            }
        }
        if (missing_axes != 0 && missing_axes != 3)
            fail(ErrorCode::mixed_row,
                 "line " + std::to_string(line_no) + ": row mixes numeric and Null axes");

        if (layout.has_provenance) {
            std::string_view prov = fields[i];
            if (prov == "observed") {
                if (missing_axes != 0)
                    fail(ErrorCode::malformed_row, "line " + std::to_string(line_no) +
                                                       ": observed provenance on a Null row");
            } else if (prov == "imputed") {
                if (missing_axes != 0)
                    fail(ErrorCode::malformed_row, "line " + std::to_string(line_no) +
                                                       ": imputed provenance on a Null row");
                for (auto& axis : axes) axis.state = AxisState::imputed;
            } else if (prov == "missing") {
                if (missing_axes != 3)
                    fail(ErrorCode::malformed_row, "line " + std::to_string(line_no) +
                                                       ": missing provenance on a numeric row");
            } else {
                fail(ErrorCode::malformed_row, "line " + std::to_string(line_no) +
                                                   ": unknown provenance '" + std::string(prov) +
                                                   "'");
            }
        }

        if (!capture.samples.empty() && ts <= capture.samples.back().timestamp_ms)
            fail(ErrorCode::non_increasing_timestamps,
                 "line " + std::to_string(line_no) + ": timestamp " + std::to_string(ts) +
                     " does not exceed predecessor " +
                     std::to_string(capture.samples.back().timestamp_ms));

        capture.samples.push_back({ts, axes[0], axes[1], axes[2]});
    }

    if (capture.samples.empty()) fail(ErrorCode::empty_input, "no data rows");
    return capture;
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string serialize_capture(const Capture& capture, bool include_provenance,
                              SerializeMode mode) {
    std::string out;
    out.reserve(capture.samples.size() * 40 + 32);
    out += "seq,timestamp_ms,x,y,z";
    if (include_provenance) out += ",provenance";
    out += '\n';

    std::int64_t seq = 1;
    for (const Sample& s : capture.samples) {
        if (!s.uniform_state())
            fail(ErrorCode::mixed_row, "row " + std::to_string(seq) + " has mixed axis states");
        const AxisState state = s.row_state();
        if (state == AxisState::missing && mode != SerializeMode::debug)
            fail(ErrorCode::missing_rows_present,
                 "row " + std::to_string(seq) + " is a placeholder; use debug mode to emit it");

        out += std::to_string(seq);
        out += ',';
        out += std::to_string(s.timestamp_ms);
        if (state == AxisState::missing) {
            out += ",Null,Null,Null";
        } else {
            for (const AxisValue* axis : {&s.x, &s.y, &s.z}) {
                out += ',';
                out += format_double(axis->value);
            }
        }
        if (include_provenance) {
            out += ',';
            out += state == AxisState::observed ? "observed"
                 : state == AxisState::imputed  ? "imputed"
                                                : "missing";
        }
        out += '\n';
        ++seq;
    }
    return out;
}

Capture load_capture_file(const std::filesystem::path& path, SensorKind sensor,
                          Activity activity, int duration_s) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) fail(ErrorCode::io_error, "read failed for " + path.string());
    return parse_capture(buffer.str(), sensor, activity, duration_s);
}

void write_capture_file(const std::filesystem::path& path, const Capture& capture,
                        bool include_provenance, SerializeMode mode) {
    const std::string text = serialize_capture(capture, include_provenance, mode);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io_error, "cannot create " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) fail(ErrorCode::io_error, "write failed for " + path.string());
}

}  // namespace gapfill
