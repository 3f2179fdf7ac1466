#pragma once

// Exact integer and residue arithmetic: primes, factorization, CRT, lcm of
// factored integers, modular inversion.

#include <compare>
#include <numeric>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dynobs {

using BigInt = boost::multiprecision::cpp_int;
using u128 = unsigned __int128;

inline constexpr std::uint64_t kSieveLimit = std::uint64_t{1} << 32;

struct PrimePower {
    std::uint64_t prime = 0;
    unsigned exponent = 0;

    auto operator<=>(const PrimePower&) const = default;
};

/// A positive integer with its prime factorization. The value is kept as a
/// big integer because lcms of many cycle lengths overflow 64 bits.
class FactoredInt {
public:
    FactoredInt();  // the integer 1

    /// Builds from (prime, exponent) pairs. Pairs may arrive in any order and
    /// with repeated primes (exponents add); zero exponents are dropped.
    /// Throws DomainError on a non-prime base.
    static FactoredInt from_factors(std::vector<PrimePower> factors);

    const BigInt& value() const { return value_; }
    std::span<const PrimePower> factors() const { return factors_; }

    bool is_one() const { return factors_.empty(); }
    bool is_prime() const { return factors_.size() == 1 && factors_[0].exponent == 1; }
    bool is_prime_power() const { return factors_.size() == 1; }
    bool is_squarefree() const;

    /// Exponent of p in the factorization (0 if absent).
    unsigned exponent_of(std::uint64_t p) const;

    std::optional<std::uint64_t> to_u64() const;

    /// Natural logarithm of the value, from the factorization.
    long double log() const;

    /// "1", "7", "2^2*3".
    std::string to_string() const;

    bool operator==(const FactoredInt& other) const { return factors_ == other.factors_; }

private:
    BigInt value_;
    std::vector<PrimePower> factors_;
};

// ---- word-sized residue arithmetic -------------------------------------

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    if (m <= (std::uint64_t{1} << 32)) return (a * b) % m;
    return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    const std::uint64_t s = a + b;
    return (s >= m || s < a) ? s - m : s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return a >= b ? a - b : a + (m - b);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Least nonnegative representative of v mod m (m >= 1).
std::uint64_t reduce(const BigInt& v, std::uint64_t m);
std::uint64_t reduce(std::int64_t v, std::uint64_t m);

/// base^exp if it fits in 64 bits.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp);

// ---- primes and factorization ------------------------------------------

/// All primes in [2, bound], ascending (segmented sieve of Eratosthenes).
/// Throws BudgetExceeded above kSieveLimit.
std::vector<std::uint64_t> sieve_primes(std::uint64_t bound);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Trial division by primes below 2^16, then Pollard rho (Brent variant,
/// polynomial x^2 + c with c = 1, 2, ... and start 2) on the cofactor.
/// Throws DomainError for n = 0.
FactoredInt factorize(std::uint64_t n);

// ---- CRT, lcm, inversion -----------------------------------------------

/// Unique r in [0, m1*m2) with r = r1 (mod m1), r = r2 (mod m2).
/// Throws DomainError when gcd(m1, m2) != 1, a residue is unreduced, or
/// m1*m2 overflows 64 bits.
std::uint64_t crt_pair(std::uint64_t r1, std::uint64_t m1, std::uint64_t r2, std::uint64_t m2);

FactoredInt lcm_factored(const FactoredInt& a, const FactoredInt& b);

/// Inverse of a modulo q. Throws NotInvertible when gcd(a, q) != 1.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t q);

/// A modulus with its prime-power structure cached: prime() is the prime
/// when value() is a prime power, 0 otherwise.
class Modulus {
public:
    explicit Modulus(std::uint64_t m);  // m >= 2
    static Modulus prime_power(std::uint64_t p, unsigned e);

    std::uint64_t value() const { return value_; }
    std::uint64_t prime() const { return prime_; }
    unsigned exponent() const { return exponent_; }
    bool is_prime_power() const { return prime_ != 0; }
    bool is_prime() const { return prime_ != 0 && exponent_ == 1; }

    /// True if gcd(r, value) = 1.
    bool is_unit(std::uint64_t r) const { return prime_ ? r % prime_ != 0 : std::gcd(r, value_) == 1; }

    bool operator==(const Modulus& o) const { return value_ == o.value_; }

private:
    Modulus(std::uint64_t v, std::uint64_t p, unsigned e) : value_(v), prime_(p), exponent_(e) {}
    std::uint64_t value_;
    std::uint64_t prime_;
    unsigned exponent_;
};

} // namespace dynobs
