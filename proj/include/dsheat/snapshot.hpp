#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "dsheat/field.hpp"

namespace dsheat {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_real(double x);

/// CSV with header `coord_1,...,coord_d,value`, one row per nonzero site in
/// row-major order.
void write_snapshot_csv(std::ostream& out, const Field& f);
/// JSON sidecar {"offset": [...], "extents": [...], "tau": N}.
std::string snapshot_sidecar_json(const Field& f, std::int64_t tau);

/// Writes `<stem>.csv` and `<stem>.json`; returns the two paths.
std::pair<std::filesystem::path, std::filesystem::path> write_snapshot(const std::filesystem::path& stem,
                                                                         const Field& f, std::int64_t tau);

/// Parses a snapshot CSV. Throws DomainError on malformed input.
Field read_snapshot_csv(std::istream& in);
Field read_snapshot(const std::filesystem::path& csv_path);

}  // namespace dsheat
