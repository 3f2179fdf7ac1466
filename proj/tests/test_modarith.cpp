#include <doctest.h>

#include <numeric>

#include "dynobs/error.hpp"
#include "dynobs/modarith.hpp"
#include "dynobs/random.hpp"

using namespace dynobs;

namespace {

bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

BigInt reassemble(const FactoredInt& f) {
    BigInt v = 1;
    for (const auto& pp : f.factors())
        for (unsigned i = 0; i < pp.exponent; ++i) v *= pp.prime;
    return v;
}

} // namespace

TEST_CASE("sieve_primes small bounds") {
    CHECK(sieve_primes(0).empty());
    CHECK(sieve_primes(1).empty());
    CHECK(sieve_primes(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(sieve_primes(100).size() == 25);
}

TEST_CASE("sieve_primes matches trial division") {
    const auto primes = sieve_primes(200'000);
    std::vector<std::uint64_t> naive;
    for (std::uint64_t n = 2; n <= 200'000; ++n)
        if (trial_prime(n)) naive.push_back(n);
    CHECK(primes == naive);
}

TEST_CASE("is_prime") {
    for (std::uint64_t n = 0; n < 20'000; ++n) CHECK(is_prime(n) == trial_prime(n));
    CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
    CHECK(is_prime(18446744073709551557ULL));  // largest 64-bit prime
    CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK_FALSE(is_prime(3825123056546413051ULL));
    CHECK_FALSE(is_prime(561));
}

TEST_CASE("factorize examples") {
    CHECK(factorize(1).is_one());
    CHECK(factorize(1).value() == 1);
    const FactoredInt twelve = factorize(12);
    REQUIRE(twelve.factors().size() == 2);
    CHECK(twelve.factors()[0] == PrimePower{2, 2});
    CHECK(twelve.factors()[1] == PrimePower{3, 1});
    CHECK(twelve.to_string() == "2^2*3");
    REQUIRE(trial_prime(9999991));
    const FactoredInt big = factorize(9999991);
    REQUIRE(big.factors().size() == 1);
    CHECK(big.factors()[0] == PrimePower{9999991, 1});
    CHECK_THROWS_AS(factorize(0), DomainError);
}

TEST_CASE("factorize round-trips on [1, 10^6]") {
    bool ok = true;
    for (std::uint64_t n = 1; n <= 1'000'000 && ok; ++n) {
        const FactoredInt f = factorize(n);
        std::uint64_t prev = 0;
        for (const auto& pp : f.factors()) {
            ok = ok && pp.prime > prev && pp.exponent >= 1 && trial_prime(pp.prime);
            prev = pp.prime;
        }
        ok = ok && reassemble(f) == n && f.value() == n;
        if (!ok) INFO("n = " << n);
    }
    CHECK(ok);
}

TEST_CASE("factorize large semiprimes") {
    const std::uint64_t a = 4294967291ULL, b = 4294967279ULL;
    const FactoredInt f = factorize(a * b);
    REQUIRE(f.factors().size() == 2);
    CHECK(f.factors()[0].prime == b);
    CHECK(f.factors()[1].prime == a);
    CHECK(reassemble(factorize(18446744073709551615ULL)) == BigInt("18446744073709551615"));
}

TEST_CASE("FactoredInt helpers") {
    const FactoredInt f = FactoredInt::from_factors({{3, 1}, {2, 1}, {3, 2}, {5, 0}});
    CHECK(f.to_string() == "2*3^3");
    CHECK(f.value() == 54);
    CHECK(f.exponent_of(3) == 3);
    CHECK(f.exponent_of(5) == 0);
    CHECK_FALSE(f.is_squarefree());
    CHECK(factorize(30).is_squarefree());
    CHECK(factorize(49).is_prime_power());
    CHECK(f.to_u64() == 54u);
    CHECK(f.log() == doctest::Approx(std::log(54.0)));
    CHECK_THROWS_AS(FactoredInt::from_factors({{4, 1}}), DomainError);
}

TEST_CASE("crt_pair examples") {
    CHECK(crt_pair(1, 3, 1, 7) == 1);
    CHECK(crt_pair(2, 3, 6, 7) == 20);
    CHECK(crt_pair(0, 2, 0, 5) == 0);
    CHECK_THROWS_AS(crt_pair(1, 4, 1, 6), DomainError);
    CHECK_THROWS_AS(crt_pair(5, 3, 1, 7), DomainError);
}

TEST_CASE("crt_pair recovers every residue for m1, m2 <= 100") {
    bool ok = true;
    for (std::uint64_t m1 = 2; m1 <= 100; ++m1)
        for (std::uint64_t m2 = 2; m2 <= 100; ++m2) {
            if (std::gcd(m1, m2) != 1) continue;
            for (std::uint64_t r = 0; r < m1 * m2; ++r) ok = ok && crt_pair(r % m1, m1, r % m2, m2) == r;
        }
    CHECK(ok);
}

TEST_CASE("lcm_factored") {
    CHECK(lcm_factored(FactoredInt{}, factorize(17)) == factorize(17));
    CHECK(lcm_factored(factorize(12), factorize(18)).value() == 36);
    CHECK(lcm_factored(factorize(2), factorize(1)).value() == 2);

    SplitMix64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t a = 1 + rng.below(std::uint64_t{1} << 32);
        const std::uint64_t b = 1 + rng.below(std::uint64_t{1} << 32);
        const BigInt naive = BigInt(a) / std::gcd(a, b) * b;
        CHECK(lcm_factored(factorize(a), factorize(b)).value() == naive);
    }
}

TEST_CASE("mod_inverse") {
    CHECK(mod_inverse(1, 9) == 1);
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(2, 9) == 5);
    CHECK_THROWS_AS(mod_inverse(3, 9), NotInvertible);
    for (std::uint64_t q = 2; q <= 49; ++q)
        for (std::uint64_t a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            CHECK(mulmod(a, mod_inverse(a, q), q) == 1 % q);
        }
}

TEST_CASE("residue helpers") {
    CHECK(reduce(std::int64_t{-4}, 3) == 2);
    CHECK(reduce(BigInt("-100000000000000000000000"), 7) == 7 - BigInt("100000000000000000000000") % 7);
    CHECK(powmod(3, 200, 1000000007ULL) == static_cast<std::uint64_t>(boost::multiprecision::powm(BigInt(3), 200, BigInt(1000000007ULL))));
    const std::uint64_t big = 18446744073709551557ULL;
    CHECK(mulmod(big - 1, big - 1, big) == 1);
    CHECK(addmod(big - 1, big - 1, big) == big - 2);
    CHECK(submod(0, 1, big) == big - 1);
    CHECK(checked_pow(2, 63) == std::uint64_t{1} << 63);
    CHECK_FALSE(checked_pow(2, 64).has_value());
}

TEST_CASE("Modulus structure") {
    const Modulus m(72);
    CHECK(m.value() == 72);
    CHECK_FALSE(m.is_prime_power());
    CHECK(m.prime() == 0);
    const Modulus q = Modulus::prime_power(5, 2);
    CHECK(q.value() == 25);
    CHECK(q.prime() == 5);
    CHECK(q.exponent() == 2);
    CHECK(q.is_unit(3));
    CHECK_FALSE(q.is_unit(10));
    CHECK_THROWS_AS(Modulus(1), DomainError);
}
