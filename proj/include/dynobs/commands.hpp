#pragma once

// Command implementations behind the dynobs executable. Each returns the
// process exit code (0 success or found, 2 not_found) and throws on error.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dynobs/experiment.hpp"
#include "dynobs/heuristics.hpp"
#include "dynobs/smoothness.hpp"

namespace dynobs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotFound = 2;

unsigned default_workers();

/// Whole file as a string; throws Error when unreadable.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// One point per non-blank line, '#' starts a comment.
std::vector<IntPoint> parse_point_list(std::string_view text);

struct CycleScanArgs {
    std::filesystem::path map_file;
    std::string point;
    std::uint64_t bound = 0;
    std::uint64_t budget = kDefaultOrbitBudget;
    unsigned workers = 1;
    std::filesystem::path cache;
    std::optional<std::filesystem::path> out;  // rows for primes <= bound as plain CSV
};

/// Scans every prime <= bound missing from the cache. New rows above the
/// cached range are appended; a gap below it forces a sorted rewrite.
int cmd_cycle_scan(const CycleScanArgs& args, std::ostream& log);

struct SmoothFigureArgs {
    std::filesystem::path cache;
    Rational alpha{1, 3};
    unsigned d1 = 1;
    std::string out_prefix;  // writes <prefix>.csv and <prefix>.svg
    std::uint64_t stride = 1;
    bool fixed_top = false;
};

struct SmoothFigureResult {
    std::string csv;
    std::string svg;
    double fitted_slope = 0;     // log_S over the upper half of the x-range
    double predicted_slope = 0;  // rho(d1 / (2 alpha))
};

/// Pure part of smooth-figure: CSV `x,log_S,predicted` (every stride-th
/// sample plus the last) and the SVG.
SmoothFigureResult smooth_figure(const CycleScan& scan, Rational alpha, unsigned d1, std::uint64_t stride, ThresholdMode mode);

int cmd_smooth_figure(const SmoothFigureArgs& args, std::ostream& log);

struct ObstructArgs {
    std::filesystem::path map_file;
    std::filesystem::path variety_file;
    std::string point;
    std::uint64_t bound = 1000;
    Strategy strategy = Strategy::all;
    std::optional<std::filesystem::path> integral_points_file;
    SearchOptions search;
    std::optional<std::filesystem::path> out;
};

/// search_modulus, then (on not_found with integral points supplied) the
/// integral-point check at each prime <= bound.
ObstructionReport run_obstruct(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t bound, Strategy strategy,
                               const std::vector<IntPoint>* integral_points, const SearchOptions& options);

int cmd_obstruct(const ObstructArgs& args, std::ostream& out);

struct ExperimentArgs {
    ExperimentOptions options;
    std::optional<std::filesystem::path> out;  // <out> gets the rows, <out stem>_summary.csv the aggregate
};

int cmd_experiment(const ExperimentArgs& args, std::ostream& out);

struct HeuristicArgs {
    HeuristicParams params;
    std::uint64_t T_max = 10'000;
    std::optional<std::filesystem::path> cache;
    std::optional<std::filesystem::path> exponent_out;  // prime,exponent table from the cache
};

int cmd_heuristic(const HeuristicArgs& args, std::ostream& out);

struct BaselineArgs {
    std::uint64_t n = 1'000'000;
    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::optional<std::filesystem::path> out;
};

int cmd_baseline(const BaselineArgs& args, std::ostream& out);

int cmd_dickman(const std::vector<double>& us, std::ostream& out);

} // namespace dynobs
