#include "dynobs/obstruction.hpp"

#include <unordered_map>
#include <unordered_set>

#include "dynobs/error.hpp"
#include "dynobs/scan.hpp"

namespace dynobs {

namespace {

struct Reduced {
    Modulus modulus;
    ResiduePoint start;
    ReducedMap step;
    ReducedVariety variety;
};

Reduced reduce_all(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t m) {
    if (!(phi.ambient() == v.ambient())) throw DomainError("map and variety live in different ambient spaces");
    const Modulus mod(m);
    if (phi.ambient().is_projective() && !mod.is_prime_power())
        throw DomainError("projective orbits are only reduced modulo prime powers (m = " + std::to_string(m) + ")");
    return {mod, ResiduePoint::from_integers(P, phi.ambient(), mod), ReducedMap(phi, mod), ReducedVariety(v, m)};
}

bool matches(Strategy s, std::uint64_t m) {
    switch (s) {
    case Strategy::all:
        return true;
    case Strategy::primes:
        return is_prime(m);
    case Strategy::prime_powers:
        return factorize(m).is_prime_power();
    case Strategy::squarefree:
        return factorize(m).is_squarefree();
    }
    return false;
}

Outcome classify(const FactoredInt& m) {
    if (m.is_prime()) return Outcome::found_prime;
    if (m.is_prime_power()) return Outcome::found_prime_power;
    return Outcome::found_composite;
}

} // namespace

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::primes: return "primes";
    case Strategy::prime_powers: return "prime_powers";
    case Strategy::all: return "all";
    case Strategy::squarefree: return "squarefree";
    }
    return "?";
}

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::found_prime: return "found_prime";
    case Outcome::found_prime_power: return "found_prime_power";
    case Outcome::found_composite: return "found_composite";
    case Outcome::found_by_integral_points: return "found_by_integral_points";
    case Outcome::not_found: return "not_found";
    }
    return "?";
}

std::string to_string(TryStatus s) {
    switch (s) {
    case TryStatus::meets: return "meets";
    case TryStatus::misses: return "misses";
    case TryStatus::bad_reduction: return "bad_reduction";
    case TryStatus::overrun: return "overrun";
    case TryStatus::unverified: return "unverified";
    }
    return "?";
}

Strategy parse_strategy(std::string_view text) {
    if (text == "primes") return Strategy::primes;
    if (text == "prime_powers" || text == "prime-powers") return Strategy::prime_powers;
    if (text == "all") return Strategy::all;
    if (text == "squarefree") return Strategy::squarefree;
    throw ParseError("unknown strategy '" + std::string(text) + "' (primes, prime_powers, all, squarefree)");
}

// ---- single-modulus tests ------------------------------------------------

MeetResult orbit_meets_V_mod(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t m,
                             const SearchOptions& options) {
    const Reduced r = reduce_all(phi, P, v, m);
    MeetResult out;
    if (!options.cycle_only) {
        const BrentRun run = brent_orbit(r.start.coords(), r.step, options.budget,
                                         [&](std::uint64_t, const Coords& x) { return r.variety.contains(x); });
        if (run.stopped_at) {
            out.meets = true;
            out.witness = run.stopped_at;
        } else {
            out.shape = run.shape;
        }
        return out;
    }
    const CycleShape shape = brent_shape(r.start.coords(), r.step, options.budget);
    out.shape = shape;
    Coords x = r.start.coords();
    for (std::uint64_t i = 0; i < shape.tail; ++i) x = r.step(x);
    for (std::uint64_t i = 0; i < shape.cycle; ++i) {
        if (r.variety.contains(x)) {
            out.meets = true;
            out.witness = shape.tail + i;
            return out;
        }
        x = r.step(x);
    }
    return out;
}

MeetResult orbit_meets_V_mod_hashed(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t m,
                                    const SearchOptions& options) {
    const Reduced r = reduce_all(phi, P, v, m);
    std::unordered_map<Coords, std::uint64_t, CoordsHash> seen;
    std::vector<char> on_v;
    Coords x = r.start.coords();
    CycleShape shape;
    for (std::uint64_t i = 0;; ++i) {
        const auto [it, inserted] = seen.emplace(x, i);
        if (!inserted) {
            shape = {it->second, i - it->second};
            break;
        }
        if (seen.size() > options.verify_budget)
            throw BudgetExceeded("hashed orbit mod " + std::to_string(m) + ": more than " + std::to_string(options.verify_budget) +
                                 " points");
        on_v.push_back(r.variety.contains(x) ? 1 : 0);
        x = r.step(x);
    }
    MeetResult out;
    out.shape = shape;
    for (std::uint64_t i = options.cycle_only ? shape.tail : 0; i < on_v.size(); ++i) {
        if (on_v[i]) {
            out.meets = true;
            out.witness = i;
            break;
        }
    }
    return out;
}

// ---- search --------------------------------------------------------------

ObstructionSearch::ObstructionSearch(PolyMap phi, IntPoint P, Subvariety v, SearchOptions options)
    : phi_(std::move(phi)), P_(std::move(P)), v_(std::move(v)), options_(options) {
    if (!(phi_.ambient() == v_.ambient())) throw DomainError("map and variety live in different ambient spaces");
    if (P_.size() != phi_.ambient().num_vars()) throw DomainError("start point has the wrong number of coordinates");
}

const TriedModulus& ObstructionSearch::test(std::uint64_t m) {
    if (auto it = memo_.find(m); it != memo_.end()) return it->second;
    TriedModulus t;
    t.m = m;
    try {
        const MeetResult r = orbit_meets_V_mod(phi_, P_, v_, m, options_);
        t.status = r.meets ? TryStatus::meets : TryStatus::misses;
        t.witness = r.witness;
        if (r.shape) shapes_[m] = *r.shape;
    } catch (const BadReduction& e) {
        t.status = TryStatus::bad_reduction;
        t.note = e.what();
    } catch (const BudgetExceeded& e) {
        t.status = TryStatus::overrun;
        t.note = e.what();
    }
    return memo_.emplace(m, std::move(t)).first->second;
}

bool ObstructionSearch::verify_miss(std::uint64_t m, TriedModulus& entry, std::optional<CycleShape>& shape) {
    MeetResult check;
    try {
        check = orbit_meets_V_mod_hashed(phi_, P_, v_, m, options_);
    } catch (const BudgetExceeded& e) {
        entry.status = TryStatus::unverified;
        entry.note = e.what();
        return false;
    }
    const auto it = shapes_.find(m);
    if (check.meets || it == shapes_.end() || !(it->second == *check.shape))
        throw Error("orbit engines disagree modulo " + std::to_string(m));
    shape = it->second;
    return true;
}

ObstructionReport ObstructionSearch::search(std::uint64_t bound, Strategy strategy) {
    if (bound < 2) throw DomainError("search bound must be at least 2");
    ObstructionReport rep;
    rep.map_digest = phi_.digest();
    rep.variety_digest = v_.digest();
    rep.point = format_point(P_);
    rep.bound = bound;
    rep.strategy = strategy;
    rep.cycle_only = options_.cycle_only;

    // Projective orbits are only defined modulo prime powers.
    const bool projective = phi_.ambient().is_projective();
    for (std::uint64_t m = 2;; ++m) {
        if (!matches(strategy, m) || (projective && !matches(Strategy::prime_powers, m))) {
            if (m == bound) break;
            continue;
        }
        TriedModulus entry = test(m);
        if (entry.status == TryStatus::misses) {
            std::optional<CycleShape> shape;
            if (verify_miss(m, entry, shape)) {
                rep.tried.push_back(entry);
                const FactoredInt fm = factorize(m);
                rep.outcome = classify(fm);
                rep.modulus = fm;
                rep.shape = shape;
                return rep;
            }
        }
        rep.tried.push_back(std::move(entry));
        if (m == bound) break;
    }
    rep.outcome = Outcome::not_found;
    return rep;
}

std::vector<std::uint64_t> moduli_for(Strategy strategy, std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 2; m <= bound; ++m)
        if (matches(strategy, m)) out.push_back(m);
    return out;
}

std::string ObstructionReport::to_text() const {
    std::string s = "outcome=" + to_string(outcome) + " m=" + (modulus ? modulus->value().str() : std::string("none")) + "\n";
    std::string witness = "none";
    if (outcome == Outcome::not_found) {
        for (auto it = tried.rbegin(); it != tried.rend(); ++it) {
            if (it->witness) {
                witness = std::to_string(it->m) + ":" + std::to_string(*it->witness);
                break;
            }
        }
    }
    s += "witness=" + witness + "\n";
    if (modulus) s += "factorization=" + modulus->to_string() + "\n";
    s += "map_digest=" + format_digest(map_digest) + "\n";
    s += "variety_digest=" + format_digest(variety_digest) + "\n";
    s += "point=" + point + "\n";
    s += "strategy=" + to_string(strategy) + "\n";
    s += "bound=" + std::to_string(bound) + "\n";
    s += std::string("semantics=") + (cycle_only ? "cycle_only" : "full_orbit") + "\n";
    s += "tried=" + std::to_string(tried_count()) + "\n";
    if (shape) s += "tail=" + std::to_string(shape->tail) + "\ncycle=" + std::to_string(shape->cycle) + "\n";
    s += "# tried moduli\nm,status,witness\n";
    for (const auto& t : tried)
        s += std::to_string(t.m) + "," + to_string(t.status) + "," + (t.witness ? std::to_string(*t.witness) : "") + "\n";
    return s;
}

// ---- integral points -----------------------------------------------------

std::vector<IntPoint> unit_sphere_integral_points(unsigned n) {
    std::vector<IntPoint> out;
    for (unsigned i = 0; i < n; ++i) {
        for (int sign : {1, -1}) {
            IntPoint pt(n, BigInt(0));
            pt[i] = sign;
            out.push_back(std::move(pt));
        }
    }
    return out;
}

bool integral_point_trick(const PolyMap& phi, const IntPoint& P, const std::vector<IntPoint>& integral_points,
                          const Subvariety& v, std::uint64_t m, const SearchOptions& options) {
    if (phi.ambient().is_projective()) throw DomainError("integral_point_trick: affine ambient only");
    for (const auto& pt : integral_points) {
        if (pt.size() != v.ambient().num_vars()) throw DomainError("integral point " + format_point(pt) + " has the wrong dimension");
        if (!v.contains_exact(pt)) throw DomainError("supplied point " + format_point(pt) + " is not on V over Z");
    }
    const Reduced r = reduce_all(phi, P, v, m);
    std::unordered_set<Coords, CoordsHash> targets;
    for (const auto& pt : integral_points) targets.insert(ResiduePoint::from_integers(pt, phi.ambient(), r.modulus).coords());

    if (!options.cycle_only) {
        const BrentRun run = brent_orbit(r.start.coords(), r.step, options.budget,
                                         [&](std::uint64_t, const Coords& x) { return targets.count(x) > 0; });
        return !run.stopped_at.has_value();
    }
    const CycleShape shape = brent_shape(r.start.coords(), r.step, options.budget);
    Coords x = r.start.coords();
    for (std::uint64_t i = 0; i < shape.tail; ++i) x = r.step(x);
    for (std::uint64_t i = 0; i < shape.cycle; ++i, x = r.step(x))
        if (targets.count(x)) return false;
    return true;
}

// ---- p-adic diagnostics --------------------------------------------------

ValuationReport valuation_diagnostic(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t p,
                                     std::uint64_t iterates, unsigned ceiling) {
    if (phi.ambient().is_projective()) throw DomainError("valuation_diagnostic: affine maps only");
    if (!(phi.ambient() == v.ambient())) throw DomainError("valuation_diagnostic: ambient mismatch");
    if (!is_prime(p)) throw DomainError("valuation_diagnostic: p must be prime");
    if (ceiling == 0) throw DomainError("valuation_diagnostic: ceiling must be positive");
    const BigInt modulus = boost::multiprecision::pow(BigInt(p), ceiling);
    auto reduce_big = [&](BigInt a) {
        a %= modulus;
        if (a < 0) a += modulus;
        return a;
    };

    IntPoint x;
    for (const auto& c : P) x.push_back(reduce_big(c));
    ValuationReport rep;
    for (std::uint64_t n = 0; n < iterates; ++n) {
        unsigned w = ceiling;
        for (const auto& h : v.equations()) {
            BigInt val = reduce_big(h.eval_exact(x));
            unsigned k = 0;
            while (val != 0 && k < ceiling && val % p == 0) {
                val /= p;
                ++k;
            }
            if (val == 0) k = ceiling;
            w = std::min(w, k);
        }
        ValuationStep step{n, w, w >= ceiling, false};
        if (!rep.steps.empty() && w > rep.steps.back().valuation) {
            step.increase = true;
            rep.violations.push_back(n);
        }
        rep.steps.push_back(step);
        IntPoint next = phi.apply_exact(x);
        for (auto& c : next) c = reduce_big(c);
        x = std::move(next);
    }
    return rep;
}

std::optional<PrimePowerCertificate> prime_power_certificate(const PolyMap& phi, const IntPoint& P, const Subvariety& v,
                                                             std::uint64_t p, unsigned n_max, const SearchOptions& options) {
    if (!is_prime(p)) throw DomainError("prime_power_certificate: p must be prime");
    for (unsigned n = 1; n <= n_max; ++n) {
        const auto q = checked_pow(p, n);
        if (!q) return std::nullopt;
        try {
            const MeetResult r = orbit_meets_V_mod(phi, P, v, *q, options);
            if (r.meets) continue;
            const MeetResult check = orbit_meets_V_mod_hashed(phi, P, v, *q, options);
            if (check.meets || !(*check.shape == *r.shape)) throw Error("orbit engines disagree modulo " + std::to_string(*q));
            return PrimePowerCertificate{p, n, *q, *r.shape};
        } catch (const BudgetExceeded&) {
            return std::nullopt;
        } catch (const BadReduction&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

} // namespace dynobs
