#pragma once

// Batch obstruction search over seeded random self-maps of A^n against the
// unit sphere.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynobs/obstruction.hpp"

namespace dynobs {

struct ExperimentOptions {
    unsigned n = 5;
    unsigned degree = 2;
    std::int64_t coeff_bound = 10;
    std::uint64_t count = 500;
    std::uint64_t bound = 2000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    IntPoint point;                 // empty means (1, ..., 1)
    bool include_identity = false;  // prepend the identity map as row 0
    SearchOptions search;
};

struct ExperimentRow {
    std::uint64_t index = 0;
    std::uint64_t map_seed = 0;  // 0 for the injected identity
    std::uint64_t map_digest = 0;
    std::optional<std::uint64_t> prime_power_m;   // smallest prime power q <= bound that works
    std::optional<std::uint64_t> any_m;           // smallest m <= bound that works
    Outcome any_outcome = Outcome::not_found;
    std::optional<std::uint64_t> integral_prime;  // first prime p <= bound passing the integral-point check
    std::uint64_t tried = 0;
};

struct ExperimentSummary {
    ExperimentOptions options;
    std::vector<ExperimentRow> rows;

    std::uint64_t prime_power_found() const;
    std::uint64_t any_found() const;
    std::uint64_t integral_found() const;  // rows with no m but an integral-point prime
    double fraction_prime_power() const;
    double fraction_any() const;
    std::vector<std::uint64_t> unresolved() const;  // no m and no integral-point prime

    /// index,map_seed,map_digest,prime_power_m,any_m,any_outcome,integral_prime,tried
    std::string rows_csv() const;
    /// maps,bound,prime_power_found,any_found,integral_found,fraction_prime_power,fraction_any,unresolved
    std::string summary_csv() const;
};

/// Map k (k = 0..count-1) is random_map(n, degree, coeff_bound,
/// derive_seed(seed, k)). Maps run on `workers` threads; rows come back in
/// map order.
ExperimentSummary run_experiment(const ExperimentOptions& options);

/// Runs the per-map pipeline: search all m <= bound, then prime powers,
/// then (if nothing was found) the integral-point check over primes.
ExperimentRow analyze_map(const PolyMap& phi, const IntPoint& P, std::uint64_t bound, const SearchOptions& options);

/// Decimal with 12 significant digits.
std::string fmt_real(double v);

} // namespace dynobs
