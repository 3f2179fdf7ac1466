#pragma once

// Search for a modulus m whose reduced orbit misses V(Z/m), which certifies
// that the orbit over Z never meets V. Also: the integral-point variant, the
// p-adic valuation diagnostic, and the prime-power certificate.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynobs/dynamics.hpp"
#include "dynobs/modarith.hpp"
#include "dynobs/variety.hpp"

namespace dynobs {

enum class Strategy { primes, prime_powers, all, squarefree };
enum class Outcome { found_prime, found_prime_power, found_composite, found_by_integral_points, not_found };

std::string to_string(Strategy s);
std::string to_string(Outcome o);
Strategy parse_strategy(std::string_view text);

inline bool is_found(Outcome o) { return o != Outcome::not_found; }

struct SearchOptions {
    std::uint64_t budget = kDefaultOrbitBudget;         // Brent map applications per modulus
    std::uint64_t verify_budget = kDefaultHashBudget;   // stored points for the hashed re-check
    bool cycle_only = false;                            // test only the periodic part of the orbit
};

struct MeetResult {
    bool meets = false;
    /// Smallest orbit index whose point lies on V (for cycle-only, the
    /// smallest index >= tail).
    std::optional<std::uint64_t> witness;
    /// Orbit shape, known whenever the whole orbit was traversed.
    std::optional<CycleShape> shape;
};

/// Does the reduced orbit of P modulo m meet V(Z/m)? Full-orbit semantics
/// check the tail and one full cycle, which covers every orbit point
/// because the reduced orbit is eventually periodic. The scan stops at the
/// first hit. Composite m is iterated directly in (Z/m)^n (affine only).
/// Throws BudgetExceeded, BadReduction (projective), DomainError.
MeetResult orbit_meets_V_mod(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t m,
                             const SearchOptions& options = {});

/// Independent re-check with the hash-table engine. Throws BudgetExceeded
/// if the orbit does not fit `options.verify_budget` stored points.
MeetResult orbit_meets_V_mod_hashed(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t m,
                                    const SearchOptions& options = {});

enum class TryStatus { meets, misses, bad_reduction, overrun, unverified };
std::string to_string(TryStatus s);

struct TriedModulus {
    std::uint64_t m = 0;
    TryStatus status = TryStatus::meets;
    std::optional<std::uint64_t> witness;
    std::string note;
};

struct ObstructionReport {
    std::uint64_t map_digest = 0;
    std::uint64_t variety_digest = 0;
    std::string point;
    std::uint64_t bound = 0;
    Strategy strategy = Strategy::all;
    bool cycle_only = false;
    Outcome outcome = Outcome::not_found;
    std::optional<FactoredInt> modulus;
    std::optional<CycleShape> shape;  // orbit shape modulo the found modulus
    std::vector<TriedModulus> tried;

    std::uint64_t tried_count() const { return tried.size(); }

    /// Line-oriented report:
    ///   outcome=<outcome> m=<modulus|none>
    ///   witness=<for not_found: m:index of the last tried modulus; else none>
    ///   key=value lines (digests, point, strategy, bound, semantics, tried,
    ///   tail, cycle)
    ///   # tried moduli
    ///   m,status,witness
    ///   ...
    std::string to_text() const;
};

/// One (map, point, variety) search context. Results per modulus are
/// memoized so several strategies can share the work.
class ObstructionSearch {
public:
    ObstructionSearch(PolyMap phi, IntPoint P, Subvariety v, SearchOptions options = {});

    /// Result for one modulus (memoized); the status is never `unverified`
    /// here, verification happens in search().
    const TriedModulus& test(std::uint64_t m);

    /// Moduli of the chosen shape in increasing order up to `bound` (prime
    /// powers only for projective maps); stops at the first m whose orbit
    /// misses V and whose miss the hashed engine confirms. Throws Error if
    /// the two engines disagree.
    ObstructionReport search(std::uint64_t bound, Strategy strategy);

    const PolyMap& map() const { return phi_; }
    const IntPoint& point() const { return P_; }
    const Subvariety& variety() const { return v_; }

private:
    bool verify_miss(std::uint64_t m, TriedModulus& entry, std::optional<CycleShape>& shape);

    PolyMap phi_;
    IntPoint P_;
    Subvariety v_;
    SearchOptions options_;
    std::map<std::uint64_t, TriedModulus> memo_;
    std::map<std::uint64_t, CycleShape> shapes_;
};

/// Moduli in [2, bound] of the given shape, ascending.
std::vector<std::uint64_t> moduli_for(Strategy strategy, std::uint64_t bound);

inline ObstructionReport search_modulus(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t bound,
                                        Strategy strategy, const SearchOptions& options = {}) {
    return ObstructionSearch(phi, P, v, options).search(bound, strategy);
}

/// True iff no supplied integral point of V reduces mod m onto the reduced
/// orbit of P (full orbit, or its cycle under options.cycle_only). Throws
/// DomainError if a supplied point is not on V over Z or the ambient is
/// projective.
bool integral_point_trick(const PolyMap& phi, const IntPoint& P, const std::vector<IntPoint>& integral_points,
                          const Subvariety& v, std::uint64_t m, const SearchOptions& options = {});

/// The 2n signed unit vectors: the integral points of the unit sphere in A^n.
std::vector<IntPoint> unit_sphere_integral_points(unsigned n);

inline constexpr unsigned kValuationCeiling = 64;

struct ValuationStep {
    std::uint64_t index = 0;
    unsigned valuation = 0;  // min over equations of v_p(H_i(phi^index(P))), capped
    bool capped = false;     // valuation reached the ceiling
    bool increase = false;   // valuation above the previous step's
};

struct ValuationReport {
    std::vector<ValuationStep> steps;
    std::vector<std::uint64_t> violations;  // indices where the sequence increased
    bool non_increasing() const { return violations.empty(); }
};

/// Iterates phi over Z/p^ceiling starting at the integer point P and records
/// w(n) = min_i v_p(H_i(phi^n(P))) for n < iterates, capped at `ceiling`.
/// Increases are flagged; they are expected when phi is not etale along V
/// or V is not invariant.
ValuationReport valuation_diagnostic(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t p,
                                     std::uint64_t iterates = 50, unsigned ceiling = kValuationCeiling);

struct PrimePowerCertificate {
    std::uint64_t prime = 0;
    unsigned exponent = 0;
    std::uint64_t modulus = 0;
    CycleShape shape;
};

/// Smallest n <= n_max with the reduced orbit mod p^n disjoint from
/// V(Z/p^n), re-checked with the hashed engine. Returns nullopt when none
/// exists up to n_max, p^n overflows, or an orbit exceeds its budget.
std::optional<PrimePowerCertificate> prime_power_certificate(const PolyMap& phi, const IntPoint& P, const Subvariety& v,
                                                             std::uint64_t p, unsigned n_max,
                                                             const SearchOptions& options = {});

} // namespace dynobs
