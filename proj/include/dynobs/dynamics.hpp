#pragma once

// Orbits in X(Z/m): tail (pre-period) and cycle length of a point under a
// reduced self-map, and how they compose across coprime moduli.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynobs/error.hpp"
#include "dynobs/modarith.hpp"
#include "dynobs/variety.hpp"

namespace dynobs {

inline constexpr std::uint64_t kDefaultOrbitBudget = 1'000'000'000;
inline constexpr std::uint64_t kDefaultHashBudget = std::uint64_t{1} << 25;

/// Shape of an eventually periodic sequence x_0, x_1, ...: x_tail is the
/// first repeated element and cycle the least period from there on.
struct CycleShape {
    std::uint64_t tail = 0;
    std::uint64_t cycle = 0;

    std::uint64_t rho() const { return tail + cycle; }
    bool operator==(const CycleShape&) const = default;
};

/// Result of a Brent run that may stop early: `stopped_at` is set when the
/// visitor asked to stop at that index, and the shape is then unknown.
struct BrentRun {
    std::optional<std::uint64_t> stopped_at;
    CycleShape shape;
    std::uint64_t applications = 0;
};

/// Brent's cycle finder. The hare visits x_1, x_2, ... in order and the
/// run only ends past index tail + cycle - 1, so `visit(i, x_i)` sees every
/// element of the orbit exactly once (x_0 first). Returning true from
/// visit stops the run. The tail is recovered afterwards with two cursors
/// a cycle apart. Throws BudgetExceeded after `budget` step applications.
template <class State, class Step, class Visit>
BrentRun brent_orbit(const State& x0, Step&& step, std::uint64_t budget, Visit&& visit) {
    BrentRun run;
    auto advance = [&](const State& s) {
        if (++run.applications > budget)
            throw BudgetExceeded("orbit too long: more than " + std::to_string(budget) + " map applications");
        return step(s);
    };

    if (visit(std::uint64_t{0}, x0)) {
        run.stopped_at = 0;
        return run;
    }
    std::uint64_t power = 1, lam = 1, index = 1;
    State tortoise = x0;
    State hare = advance(x0);
    if (visit(index, hare)) {
        run.stopped_at = index;
        return run;
    }
    while (!(tortoise == hare)) {
        if (power == lam) {
            tortoise = hare;
            power <<= 1;
            lam = 0;
        }
        hare = advance(hare);
        ++lam;
        ++index;
        if (visit(index, hare)) {
            run.stopped_at = index;
            return run;
        }
    }

    State a = x0, b = x0;
    for (std::uint64_t i = 0; i < lam; ++i) b = advance(b);
    std::uint64_t mu = 0;
    while (!(a == b)) {
        a = advance(a);
        b = advance(b);
        ++mu;
    }
    run.shape = {mu, lam};
    return run;
}

/// Same contract as brent_orbit without early stop.
template <class State, class Step>
CycleShape brent_shape(const State& x0, Step&& step, std::uint64_t budget) {
    return brent_orbit(x0, step, budget, [](std::uint64_t, const State&) { return false; }).shape;
}

/// Reference engine: records every visited state with its index in a hash
/// table until the first repeat. Throws BudgetExceeded past max_points.
template <class State, class Step, class Hash = std::hash<State>>
CycleShape hashed_shape(const State& x0, Step&& step, std::uint64_t max_points, Hash hash = Hash{}) {
    std::unordered_map<State, std::uint64_t, Hash> seen(16, hash);
    State x = x0;
    for (std::uint64_t i = 0;; ++i) {
        const auto [it, inserted] = seen.emplace(x, i);
        if (!inserted) return {it->second, i - it->second};
        if (seen.size() > max_points)
            throw BudgetExceeded("hashed orbit: more than " + std::to_string(max_points) + " stored points");
        x = step(x);
    }
}

struct OrbitSummary {
    std::uint64_t modulus = 0;
    std::uint64_t tail = 0;
    std::uint64_t cycle = 0;
    std::uint64_t rho = 0;
    std::optional<ResiduePoint> entry_point;  // phi^tail(P); empty on bad reduction
    bool bad_reduction = false;
    std::string bad_reduction_detail;
};

/// Exact minimal (tail, cycle) of P under phi over P's residue ring, by
/// Brent's algorithm. Bad reduction is reported through the flag.
OrbitSummary orbit_summary(const PolyMap& phi, const ResiduePoint& p, std::uint64_t budget = kDefaultOrbitBudget);

/// Same contract, computed with the hash-table engine.
OrbitSummary orbit_summary_hashed(const PolyMap& phi, const ResiduePoint& p, std::uint64_t max_points = kDefaultHashBudget);

/// P, phi(P), ..., phi^{upto-1}(P). Throws BadReduction mid-orbit.
std::vector<ResiduePoint> orbit_elements(const PolyMap& phi, const ResiduePoint& p, std::uint64_t upto);

struct CompositeCycle {
    std::uint64_t tail = 0;
    FactoredInt cycle;
};

/// Orbit shape modulo the product of pairwise-coprime moduli: the tail is
/// the max of the tails, the cycle the lcm of the cycles.
CompositeCycle composite_cycle_length(std::span<const OrbitSummary> parts);

} // namespace dynobs
