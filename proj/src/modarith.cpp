#include "dynobs/modarith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dynobs/error.hpp"

namespace dynobs {

namespace {

constexpr std::uint64_t kTrialBound = 1u << 16;

const std::vector<std::uint64_t>& small_primes() {
    static const std::vector<std::uint64_t> primes = sieve_primes(kTrialBound);
    return primes;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
std::uint64_t pollard_rho(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        auto f = [&](std::uint64_t x) { return addmod(mulmod(x, x, n), c, n); };
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        const std::uint64_t batch = 128;
        for (std::uint64_t r = 1; g == 1; r <<= 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
                ys = y;
                const std::uint64_t lim = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
            }
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(std::uint64_t n, std::vector<PrimePower>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back({n, 1});
        return;
    }
    const std::uint64_t d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

// ---- FactoredInt ---------------------------------------------------------

FactoredInt::FactoredInt() : value_(1) {}

FactoredInt FactoredInt::from_factors(std::vector<PrimePower> factors) {
    std::sort(factors.begin(), factors.end());
    FactoredInt out;
    for (const auto& f : factors) {
        if (f.exponent == 0) continue;
        if (!dynobs::is_prime(f.prime)) throw DomainError("FactoredInt: non-prime base " + std::to_string(f.prime));
        if (!out.factors_.empty() && out.factors_.back().prime == f.prime) {
            out.factors_.back().exponent += f.exponent;
        } else {
            out.factors_.push_back(f);
        }
    }
    for (const auto& f : out.factors_) out.value_ *= boost::multiprecision::pow(BigInt(f.prime), f.exponent);
    return out;
}

bool FactoredInt::is_squarefree() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const PrimePower& f) { return f.exponent == 1; });
}

unsigned FactoredInt::exponent_of(std::uint64_t p) const {
    for (const auto& f : factors_)
        if (f.prime == p) return f.exponent;
    return 0;
}

std::optional<std::uint64_t> FactoredInt::to_u64() const {
    if (value_ > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return value_.convert_to<std::uint64_t>();
}

long double FactoredInt::log() const {
    long double s = 0;
    for (const auto& f : factors_) s += f.exponent * std::log(static_cast<long double>(f.prime));
    return s;
}

std::string FactoredInt::to_string() const {
    if (factors_.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << '*';
        os << factors_[i].prime;
        if (factors_[i].exponent > 1) os << '^' << factors_[i].exponent;
    }
    return os.str();
}

// ---- residue arithmetic --------------------------------------------------

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::uint64_t reduce(const BigInt& v, std::uint64_t m) {
    BigInt r = v % m;
    if (r < 0) r += m;
    return r.convert_to<std::uint64_t>();
}

std::uint64_t reduce(std::int64_t v, std::uint64_t m) {
    if (v >= 0) return static_cast<std::uint64_t>(v) % m;
    const std::uint64_t mag = static_cast<std::uint64_t>(-(v + 1)) + 1;  // |v| without overflow
    const std::uint64_t r = mag % m;
    return r == 0 ? 0 : m - r;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp) {
    std::uint64_t result = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
        result *= base;
    }
    return result;
}

// ---- primes --------------------------------------------------------------

std::vector<std::uint64_t> sieve_primes(std::uint64_t bound) {
    if (bound > kSieveLimit)
        throw BudgetExceeded("sieve_primes: bound " + std::to_string(bound) + " above limit 2^32");
    std::vector<std::uint64_t> primes;
    if (bound < 2) return primes;

    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(bound))) + 1;
    std::vector<char> base_mark(root + 1, 1);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!base_mark[i]) continue;
        base.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) base_mark[j] = 0;
    }

    constexpr std::uint64_t kSegment = 1u << 18;
    std::vector<char> seg(kSegment);
    for (std::uint64_t lo = 2; lo <= bound; lo += kSegment) {
        const std::uint64_t hi = std::min(bound, lo + kSegment - 1);
        std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(hi - lo + 1), 1);
        for (const std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = 0;
        }
        for (std::uint64_t i = lo; i <= hi; ++i)
            if (seg[i - lo]) primes.push_back(i);
    }
    return primes;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (const std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases are a deterministic witness set below 3.3e24.
    for (const std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

FactoredInt factorize(std::uint64_t n) {
    if (n == 0) throw DomainError("factorize: n must be positive");
    std::vector<PrimePower> out;
    for (const std::uint64_t p : small_primes()) {
        if (p * p > n) break;
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) {
        if (n < kTrialBound * kTrialBound) {
            out.push_back({n, 1});  // no factor below its square root
        } else {
            factor_into(n, out);
        }
    }
    return FactoredInt::from_factors(std::move(out));
}

// ---- CRT / lcm / inverse -------------------------------------------------

std::uint64_t crt_pair(std::uint64_t r1, std::uint64_t m1, std::uint64_t r2, std::uint64_t m2) {
    if (m1 == 0 || m2 == 0) throw DomainError("crt_pair: zero modulus");
    if (r1 >= m1 || r2 >= m2) throw DomainError("crt_pair: residue not reduced");
    if (std::gcd(m1, m2) != 1) throw DomainError("crt_pair: moduli not coprime");
    const u128 m = static_cast<u128>(m1) * m2;
    if (m > std::numeric_limits<std::uint64_t>::max()) throw DomainError("crt_pair: product modulus overflows 64 bits");
    if (m1 == 1) return r2;
    if (m2 == 1) return r1;
    // r = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
    const std::uint64_t inv = mod_inverse(m1 % m2, m2);
    const std::uint64_t diff = submod(r2 % m2, r1 % m2, m2);
    const std::uint64_t t = mulmod(diff, inv, m2);
    return static_cast<std::uint64_t>(r1 + static_cast<u128>(m1) * t);
}

FactoredInt lcm_factored(const FactoredInt& a, const FactoredInt& b) {
    std::vector<PrimePower> merged;
    auto fa = a.factors();
    auto fb = b.factors();
    std::size_t i = 0, j = 0;
    while (i < fa.size() || j < fb.size()) {
        if (j == fb.size() || (i < fa.size() && fa[i].prime < fb[j].prime)) {
            merged.push_back(fa[i++]);
        } else if (i == fa.size() || fb[j].prime < fa[i].prime) {
            merged.push_back(fb[j++]);
        } else {
            merged.push_back({fa[i].prime, std::max(fa[i].exponent, fb[j].exponent)});
            ++i;
            ++j;
        }
    }
    return FactoredInt::from_factors(std::move(merged));
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t q) {
    if (q == 0) throw DomainError("mod_inverse: zero modulus");
    if (q == 1) return 0;
    // Extended Euclid on signed 128-bit to keep the Bezout coefficients exact.
    __int128 old_r = a % q, r = q;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        const __int128 quo = old_r / r;
        __int128 tmp = old_r - quo * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quo * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw NotInvertible("mod_inverse: " + std::to_string(a) + " is not a unit mod " + std::to_string(q));
    __int128 inv = old_s % static_cast<__int128>(q);
    if (inv < 0) inv += q;
    return static_cast<std::uint64_t>(inv);
}

// ---- Modulus -------------------------------------------------------------

Modulus::Modulus(std::uint64_t m) : value_(m), prime_(0), exponent_(0) {
    if (m < 2) throw DomainError("modulus must be at least 2");
    const FactoredInt f = factorize(m);
    if (f.is_prime_power()) {
        prime_ = f.factors()[0].prime;
        exponent_ = f.factors()[0].exponent;
    }
}

Modulus Modulus::prime_power(std::uint64_t p, unsigned e) {
    if (!dynobs::is_prime(p) || e == 0) throw DomainError("Modulus::prime_power: need prime p and e >= 1");
    const auto q = checked_pow(p, e);
    if (!q) throw DomainError("Modulus::prime_power: p^e overflows 64 bits");
    return Modulus(*q, p, e);
}

} // namespace dynobs
