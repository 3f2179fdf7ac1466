#include <doctest.h>

#include "dynobs/error.hpp"
#include "dynobs/scan.hpp"

using namespace dynobs;

namespace {

const char* kP1Map = "ambient projective 1\nx1^2 + 5*x2^2\nx2^2\n";

// Orbit of [x:y] under (x^2 + 5y^2 : y^2) mod p with points kept as
// normalized pairs in a list; the normalization divides by y, or scales x
// to 1 on the line at infinity.
std::pair<std::uint64_t, std::uint64_t> naive_p1_shape(std::uint64_t p) {
    auto norm = [p](std::uint64_t x, std::uint64_t y) {
        x %= p, y %= p;
        if (y) {
            std::uint64_t inv = 1;
            while (inv * y % p != 1) ++inv;
            return std::pair{x * inv % p, std::uint64_t{1}};
        }
        return std::pair{std::uint64_t{1}, std::uint64_t{0}};
    };
    std::vector<std::pair<std::uint64_t, std::uint64_t>> seen{norm(1, 1)};
    for (;;) {
        const auto [x, y] = seen.back();
        const auto next = norm(x * x + 5 * y * y, y * y);
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (seen[i] == next) return {i, seen.size() - i};
        seen.push_back(next);
    }
}

} // namespace

TEST_CASE("scan of the P^1 map") {
    const PolyMap phi = parse_map(kP1Map);
    const auto primes = sieve_primes(10);
    const auto rows = scan_primes(phi, {1, 1}, primes, 1'000'000, 1);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1] == ScanRow{3, 1, 2, RowStatus::ok});
    CHECK(rows[3] == ScanRow{7, 1, 1, RowStatus::ok});
    for (const auto& r : rows) {
        const auto [tail, cycle] = naive_p1_shape(r.prime);
        CHECK(r.tail == tail);
        CHECK(r.cycle == cycle);
    }
    const auto more = sieve_primes(400);
    const auto big = scan_primes(phi, {1, 1}, more, 1'000'000, 3);
    for (const auto& r : big) {
        const auto [tail, cycle] = naive_p1_shape(r.prime);
        CHECK(r.tail == tail);
        CHECK(r.cycle == cycle);
    }
    CHECK(scan_primes(phi, {1, 1}, sieve_primes(1), 100, 1).empty());
}

TEST_CASE("worker count does not change rows") {
    const PolyMap phi = random_map(2, 2, 10, 3);
    const auto primes = sieve_primes(3000);
    CHECK(scan_primes(phi, {1, 1}, primes, 1'000'000, 1) == scan_primes(phi, {1, 1}, primes, 1'000'000, 8));
}

TEST_CASE("overrun and bad reduction rows") {
    const PolyMap shift = parse_map("ambient affine 1\nx1 + 1\n");
    const std::vector<std::uint64_t> ps{5, 1009};
    const auto rows = scan_primes(shift, {0}, ps, 100, 1);
    CHECK(rows[0].status == RowStatus::ok);
    CHECK(rows[0].cycle == 5);
    CHECK(rows[1].status == RowStatus::overrun);

    const PolyMap degenerate = parse_map("ambient projective 1\nx1^2\nx1*x2\n");
    const std::vector<std::uint64_t> three{3};
    CHECK(scan_primes(degenerate, {0, 1}, three, 100, 1)[0].status == RowStatus::bad_reduction);
}

TEST_CASE("cache text round trip") {
    CycleScan s;
    s.map_digest = 0x0123456789abcdefULL;
    s.point = "1,1";
    s.ambient = "projective 1";
    s.rows = {{2, 0, 2, RowStatus::ok}, {3, 1, 2, RowStatus::ok}, {5, 0, 0, RowStatus::overrun}, {7, 0, 0, RowStatus::bad_reduction}};
    const std::string text = scan_to_text(s);
    CHECK(text.rfind("# dynobs-scan v1\n# map_digest=0123456789abcdef\n", 0) == 0);
    CHECK(text.find("5,,,1\n") != std::string::npos);
    CHECK(text.find("7,,,bad\n") != std::string::npos);
    CHECK(scan_from_text(text) == s);
    CHECK(scan_to_text(scan_from_text(text)) == text);
}

TEST_CASE("cache parsing sorts and validates") {
    const std::string head = "# dynobs-scan v1\n# map_digest=00000000000000ff\n# point=1\n# ambient=affine 1\nprime,tail,cycle,overrun\n";
    const CycleScan s = scan_from_text(head + "7,1,1,0\n3,0,2,0\n");
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[0].prime == 3);
    CHECK(s.map_digest == 255);
    CHECK_THROWS_AS(scan_from_text(head + "3,0,2,0\n3,0,2,0\n"), ParseError);
    CHECK_THROWS_AS(scan_from_text(head + "3,0,2\n"), ParseError);
    CHECK_THROWS_AS(scan_from_text(head + "3,0,0,0\n"), ParseError);
    CHECK_THROWS_AS(scan_from_text(head + "3,x,2,0\n"), ParseError);
    CHECK_THROWS_AS(scan_from_text("prime,tail,cycle,overrun\n3,0,2,0\n"), ParseError);
    CHECK(format_digest(1) == "0000000000000001");
}
