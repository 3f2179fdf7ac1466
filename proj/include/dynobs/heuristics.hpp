#pragma once

// Calculators for the random-map probability model of orbit/subvariety
// intersections, plus empirical checks of its assumptions. All o(1) terms
// of the model are dropped.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dynobs/modarith.hpp"
#include "dynobs/scan.hpp"
#include "dynobs/smoothness.hpp"
#include "dynobs/variety.hpp"

namespace dynobs {

/// d1 = dim X, d2 = dim V, smoothness exponent alpha, prime threshold T.
struct HeuristicParams {
    unsigned d1 = 2;
    unsigned d2 = 1;
    Rational alpha{1, 3};
    std::uint64_t T = 2;

    /// Throws DomainError unless d1 >= 1 and d2 < d1.
    void validate() const;
};

/// (1 - p^(d2 - d1))^orbit_len, evaluated as exp(len * log1p(-p^(d2-d1))).
double prob_orbit_misses_V(std::uint64_t p, std::uint64_t orbit_len, const HeuristicParams& params);

struct LargePrimeHit {
    double probability = 1.0;      // product over T < p <= T_max
    double log_probability = 0.0;
    /// sum over primes p > T_max of exp(-p^(d2 - d1/2)): the model's
    /// estimate of the probability mass lost by truncating the product.
    double remainder_estimate = 0.0;
    std::uint64_t primes_used = 0;
    bool model_lengths = false;  // true when |O_p| = p^(d1/2) was used
    bool regime_ok = true;       // d2 > d1/2
    std::string warning;
};

/// Truncated product over primes T < p <= T_max of
/// 1 - (1 - p^(d2-d1))^len(p). len(p) is tail + cycle from `scan` when
/// given (primes missing from the scan or not ok are skipped), else
/// p^(d1/2). Outside d2 > d1/2 the raw product is still returned with a
/// warning.
LargePrimeHit prob_all_large_primes_hit(std::uint64_t T, std::uint64_t T_max, const HeuristicParams& params,
                                        const CycleScan* scan = nullptr);

struct SmoothModulus {
    std::vector<std::uint64_t> primes;
    long double log_m = 0;
    FactoredInt cycle_lcm;  // |C_m| = lcm of the qualifying cycle lengths
};

/// m = product of scanned primes p <= x whose cycle length is x^alpha-smooth.
SmoothModulus build_smooth_modulus(const CycleScan& scan, std::uint64_t x, Rational alpha);

/// exp(-|C_m| / m^(d1 - d2)), in log space.
double prob_empty_composite(long double log_m, long double log_cycle_lcm, const HeuristicParams& params);
double prob_empty_composite(long double log_m, const FactoredInt& cycle_lcm, const HeuristicParams& params);

struct ExponentFit {
    double mean_exponent = 0;
    std::vector<std::pair<std::uint64_t, double>> per_prime;  // (p, log rho / log p)
};

/// Per-prime log(tail + cycle) / log p over ok rows and its mean.
/// Throws DomainError with fewer than 10 ok rows.
ExponentFit orbit_exponent_fit(const CycleScan& scan);

/// Tail and cycle of `start` under the function i -> table[i].
CycleShape measure_rho(std::span<const std::uint32_t> table, std::uint32_t start);

struct BaselineStats {
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    double mean_tail = 0;
    double mean_cycle = 0;
    double mean_rho = 0;
    double rho_over_sqrt_n = 0;
};

/// Trial t draws a uniform function on {0..N-1} and a uniform start from
/// SplitMix64(derive_seed(seed, t)): N table entries, then the start.
/// Statistics do not depend on the worker count.
BaselineStats random_endofunction_baseline(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

struct IndependenceRates {
    double empirical_rate = 0;  // distinct orbit points on V / distinct orbit points
    double expected_rate = 0;   // |V(F_p)| / |X(F_p)|
    std::uint64_t orbit_points = 0;
    std::uint64_t orbit_points_on_v = 0;
    PointCounts counts;
};

IndependenceRates independence_check(const PolyMap& phi, const IntPoint& start, const Subvariety& v, std::uint64_t p,
                                     std::uint64_t budget = kDefaultCountBudget);

/// Joint membership counts of the first `iterates` orbit points in V mod p
/// and V mod q, for comparing joint and product frequencies.
struct CrossPrimeTable {
    std::uint64_t total = 0;
    std::uint64_t on_v_p = 0;
    std::uint64_t on_v_q = 0;
    std::uint64_t on_both = 0;

    double joint_frequency() const { return total ? static_cast<double>(on_both) / static_cast<double>(total) : 0.0; }
    double product_frequency() const {
        if (!total) return 0.0;
        const double t = static_cast<double>(total);
        return (static_cast<double>(on_v_p) / t) * (static_cast<double>(on_v_q) / t);
    }
};

CrossPrimeTable cross_prime_table(const PolyMap& phi, const IntPoint& start, const Subvariety& v, std::uint64_t p,
                                  std::uint64_t q, std::uint64_t iterates);

} // namespace dynobs
