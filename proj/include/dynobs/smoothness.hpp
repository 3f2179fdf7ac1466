#pragma once

// Smooth numbers: the y-smooth predicate, psi(x, y), Dickman's rho, and the
// S(x) ledger built from a cycle scan.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dynobs/scan.hpp"

namespace dynobs {

/// Positive rational num/den, used for the smoothness exponent alpha so
/// thresholds can be compared exactly.
struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 3;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
    bool operator==(const Rational&) const = default;

    /// "1/3", "0.25" (decimal input is converted exactly), "2".
    static Rational parse(std::string_view text);
};

/// Largest prime factor of n (1 for n = 1).
std::uint64_t largest_prime_factor(std::uint64_t n);

/// True iff every prime factor of n is <= y. n = 1 is smooth.
bool is_smooth(std::uint64_t n, double y);

/// Exact test of "n is x^alpha-smooth": every prime factor q of n satisfies
/// q^den <= x^num.
bool is_smooth_pow(std::uint64_t n, std::uint64_t x, Rational alpha);

inline constexpr std::uint64_t kDefaultPsiBudget = 10'000'000;

/// |{1 <= n <= x : n is y-smooth}| via a smallest-prime-factor sieve.
std::uint64_t psi_count(std::uint64_t x, double y, std::uint64_t budget = kDefaultPsiBudget);

inline constexpr double kRhoMaxU = 20.0;
inline constexpr double kRhoStep = 1e-3;

/// Dickman's rho on [0, 20]: rho = 1 on [0, 1], u rho'(u) = -rho(u - 1)
/// beyond. Tabulated once by classical RK4 with step 1e-3; the delayed
/// term and off-grid queries use cubic Hermite interpolation on the table
/// (values and derivatives are both known at every node).
/// Throws DomainError outside [0, 20].
double dickman_rho(double u);

enum class ThresholdMode {
    running,    // at sample x, |C_p| must be x^alpha-smooth
    fixed_top,  // every sample uses x_max^alpha
};

struct LedgerSample {
    std::uint64_t x = 0;
    long double log_S = 0;
};

struct SmoothLedger {
    Rational alpha;
    ThresholdMode mode = ThresholdMode::running;
    std::uint64_t x_max = 0;
    std::vector<LedgerSample> samples;           // one per scan row, ascending
    std::vector<std::uint64_t> qualifying_primes;  // the set at x = x_max
};

/// log S(x) = sum of log p over scanned primes p <= x whose cycle length is
/// smooth for the threshold in force at x. Overrun rows never qualify.
/// Throws DomainError on an empty scan or one containing bad-reduction rows.
SmoothLedger accumulate_S(const CycleScan& scan, Rational alpha, ThresholdMode mode = ThresholdMode::running);

/// x * rho(d1 / (2 alpha)); the o(1) correction is dropped.
double predicted_logS(double x, Rational alpha, unsigned d1);

/// Least-squares slope of log_S against x over the samples with
/// x >= x_max / 2. Throws DomainError with fewer than two such samples.
double upper_half_slope(const std::vector<LedgerSample>& samples);

/// Least-squares slope through arbitrary (x, y) pairs.
double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace dynobs
