#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gapfill/capture.hpp"

namespace gapfill {

/// One imputation window over a working capture. Indices point into the
/// capture's sample vector; targets form one contiguous run of missing
/// rows (at most one fill quota), knowns are observed or previously
/// imputed rows, and |knowns| + |targets| never exceeds one second of
/// samples.
struct Chunk {
    std::vector<std::size_t> known_indices;
    std::vector<std::size_t> target_indices;
    std::size_t capture_offset = 0;

    std::size_t size() const { return known_indices.size() + target_indices.size(); }
};

/// Builds the next imputation window, or nullopt once no missing rows
/// remain. With more than a quota missing, the window is the earliest
/// missing block (quota-capped) plus the known rows immediately before it,
/// extending forward past the block when too few precede. With at most a
/// quota missing in one block inside the capture tail, the window is the
/// last second of samples.
std::optional<Chunk> next_chunk(const Capture& capture);

}  // namespace gapfill
