#pragma once

// Per-prime cycle scans of a map and their on-disk cache.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dynobs/dynamics.hpp"
#include "dynobs/variety.hpp"

namespace dynobs {

enum class RowStatus { ok, overrun, bad_reduction };

struct ScanRow {
    std::uint64_t prime = 0;
    std::uint64_t tail = 0;   // meaningful only for RowStatus::ok
    std::uint64_t cycle = 0;  // meaningful only for RowStatus::ok
    RowStatus status = RowStatus::ok;

    std::uint64_t rho() const { return tail + cycle; }
    bool operator==(const ScanRow&) const = default;
};

/// The per-prime orbit data of one (map, point) pair, rows ascending by
/// prime with no duplicates.
struct CycleScan {
    std::uint64_t map_digest = 0;
    std::string point;    // canonical text of the start point
    std::string ambient;  // e.g. "projective 1"
    std::vector<ScanRow> rows;

    bool operator==(const CycleScan&) const = default;
};

/// Orbit shape of `point` modulo each prime, computed on `workers` threads.
/// Rows come back in the order of `primes`; an orbit that exhausts
/// `budget` yields an overrun row, a projective bad reduction a
/// bad_reduction row.
std::vector<ScanRow> scan_primes(const PolyMap& map, const IntPoint& point, std::span<const std::uint64_t> primes,
                                 std::uint64_t budget, unsigned workers);

// ---- cache file -----------------------------------------------------------
//
//   # dynobs-scan v1
//   # map_digest=<16 hex digits>
//   # point=<comma-separated integers>
//   # ambient=<affine|projective> <n>
//   prime,tail,cycle,overrun
//   2,1,2,0
//   ...
//
// `overrun` is 0 for a measured orbit, 1 when the budget ran out (tail and
// cycle left empty), and `bad` for a prime of bad reduction.

inline constexpr const char* kScanFormat = "dynobs-scan v1";

std::string format_digest(std::uint64_t digest);

/// Full file text for a scan.
std::string scan_to_text(const CycleScan& scan);

/// Parses cache text; rows are sorted by prime on read. Throws ParseError.
CycleScan scan_from_text(std::string_view text);

CycleScan read_scan(const std::filesystem::path& path);
void write_scan(const std::filesystem::path& path, const CycleScan& scan);

/// Appends rows (already ascending and above every cached prime) to an
/// existing cache file.
void append_scan_rows(const std::filesystem::path& path, std::span<const ScanRow> rows);

/// Rows in CSV form without the comment header.
std::string scan_rows_csv(const CycleScan& scan);

} // namespace dynobs
