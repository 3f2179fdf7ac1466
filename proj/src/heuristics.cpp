#include "dynobs/heuristics.hpp"

#include <cmath>
#include <limits>

#include "dynobs/error.hpp"
#include "dynobs/parallel.hpp"
#include "dynobs/random.hpp"

namespace dynobs {

namespace {

// log of (1 - p^(d2-d1))^len.
double log_miss(double p, double len, const HeuristicParams& params) {
    const double density = std::pow(p, static_cast<double>(params.d2) - static_cast<double>(params.d1));
    return len * std::log1p(-density);
}

} // namespace

void HeuristicParams::validate() const {
    if (d1 == 0) throw DomainError("d1 must be at least 1");
    if (d2 >= d1) throw DomainError("need d2 < d1 (proper subvariety), got d1 = " + std::to_string(d1) + ", d2 = " + std::to_string(d2));
}

double prob_orbit_misses_V(std::uint64_t p, std::uint64_t orbit_len, const HeuristicParams& params) {
    params.validate();
    if (p < 2) throw DomainError("prob_orbit_misses_V: p must be at least 2");
    if (orbit_len == 0) return 1.0;
    return std::exp(log_miss(static_cast<double>(p), static_cast<double>(orbit_len), params));
}

LargePrimeHit prob_all_large_primes_hit(std::uint64_t T, std::uint64_t T_max, const HeuristicParams& params,
                                        const CycleScan* scan) {
    params.validate();
    if (T_max < T) throw DomainError("prob_all_large_primes_hit: T_max below T");
    LargePrimeHit out;
    const double exponent = static_cast<double>(params.d2) - static_cast<double>(params.d1) / 2.0;
    if (!(exponent > 0)) {
        out.regime_ok = false;
        out.warning = "regime warning: need d2 > d1/2 (d1 = " + std::to_string(params.d1) + ", d2 = " + std::to_string(params.d2) +
                      "); returning the raw truncated product";
    }
    out.model_lengths = scan == nullptr;

    auto add_prime = [&](std::uint64_t p, double len) {
        // log(1 - miss) with miss = exp(log_miss): log(-expm1(log_miss)).
        const double lm = log_miss(static_cast<double>(p), len, params);
        out.log_probability += std::log(-std::expm1(lm));
        ++out.primes_used;
    };

    if (scan) {
        for (const auto& r : scan->rows)
            if (r.prime > T && r.prime <= T_max && r.status == RowStatus::ok) add_prime(r.prime, static_cast<double>(r.rho()));
    } else {
        for (const std::uint64_t p : sieve_primes(T_max))
            if (p > T) add_prime(p, std::pow(static_cast<double>(p), static_cast<double>(params.d1) / 2.0));
    }
    out.probability = std::exp(out.log_probability);

    if (!out.regime_ok) {
        out.remainder_estimate = std::numeric_limits<double>::infinity();
    } else {
        double sum = 0;
        for (std::uint64_t n = T_max + 1, steps = 0; steps < 100'000'000; ++n, ++steps) {
            if (!is_prime(n)) continue;
            const double term = std::exp(-std::pow(static_cast<double>(n), exponent));
            sum += term;
            if (term == 0.0 || term < 1e-17 * sum) break;
        }
        out.remainder_estimate = sum;
    }
    return out;
}

SmoothModulus build_smooth_modulus(const CycleScan& scan, std::uint64_t x, Rational alpha) {
    SmoothModulus out;
    std::vector<PrimePower> acc;
    for (const auto& r : scan.rows) {
        if (r.prime > x || r.status != RowStatus::ok) continue;
        if (!is_smooth_pow(r.cycle, x, alpha)) continue;
        out.primes.push_back(r.prime);
        out.log_m += std::log(static_cast<long double>(r.prime));
        out.cycle_lcm = lcm_factored(out.cycle_lcm, factorize(r.cycle));
    }
    return out;
}

double prob_empty_composite(long double log_m, long double log_cycle_lcm, const HeuristicParams& params) {
    params.validate();
    const long double expo = log_cycle_lcm - static_cast<long double>(params.d1 - params.d2) * log_m;
    return static_cast<double>(std::exp(-std::exp(expo)));
}

double prob_empty_composite(long double log_m, const FactoredInt& cycle_lcm, const HeuristicParams& params) {
    return prob_empty_composite(log_m, cycle_lcm.log(), params);
}

ExponentFit orbit_exponent_fit(const CycleScan& scan) {
    ExponentFit fit;
    double sum = 0;
    for (const auto& r : scan.rows) {
        if (r.status != RowStatus::ok) continue;
        const double e = std::log(static_cast<double>(r.rho())) / std::log(static_cast<double>(r.prime));
        fit.per_prime.emplace_back(r.prime, e);
        sum += e;
    }
    if (fit.per_prime.size() < 10) throw DomainError("orbit_exponent_fit: need at least 10 measured rows");
    fit.mean_exponent = sum / static_cast<double>(fit.per_prime.size());
    return fit;
}

CycleShape measure_rho(std::span<const std::uint32_t> table, std::uint32_t start) {
    if (start >= table.size()) throw DomainError("measure_rho: start outside the table");
    return brent_shape(start, [&](std::uint32_t x) { return table[x]; }, ~std::uint64_t{0});
}

BaselineStats random_endofunction_baseline(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    if (n < 2) throw DomainError("baseline: N must be at least 2");
    if (n > (std::uint64_t{1} << 32)) throw DomainError("baseline: N above 2^32");
    if (trials == 0) throw DomainError("baseline: need at least one trial");
    std::vector<CycleShape> shapes(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        SplitMix64 rng(derive_seed(seed, t));
        std::vector<std::uint32_t> table(n);
        for (auto& v : table) v = static_cast<std::uint32_t>(rng.below(n));
        const auto start = static_cast<std::uint32_t>(rng.below(n));
        shapes[t] = measure_rho(table, start);
    });
    BaselineStats s;
    s.n = n;
    s.trials = trials;
    for (const auto& sh : shapes) {
        s.mean_tail += static_cast<double>(sh.tail);
        s.mean_cycle += static_cast<double>(sh.cycle);
        s.mean_rho += static_cast<double>(sh.rho());
    }
    const auto t = static_cast<double>(trials);
    s.mean_tail /= t;
    s.mean_cycle /= t;
    s.mean_rho /= t;
    s.rho_over_sqrt_n = s.mean_rho / std::sqrt(static_cast<double>(n));
    return s;
}

IndependenceRates independence_check(const PolyMap& phi, const IntPoint& start, const Subvariety& v, std::uint64_t p,
                                     std::uint64_t budget) {
    if (!(phi.ambient() == v.ambient())) throw DomainError("independence_check: map and variety ambients differ");
    IndependenceRates out;
    out.counts = count_points(v, p, budget);
    const Modulus q(p);
    const ResiduePoint p0 = ResiduePoint::from_integers(start, phi.ambient(), q);
    const ReducedMap rm(phi, q);
    const ReducedVariety rv(v, p);
    const CycleShape shape = brent_shape(p0.coords(), rm, budget);
    Coords x = p0.coords();
    for (std::uint64_t i = 0; i < shape.rho(); ++i) {
        if (rv.contains(x)) ++out.orbit_points_on_v;
        x = rm(x);
    }
    out.orbit_points = shape.rho();
    out.empirical_rate = static_cast<double>(out.orbit_points_on_v) / static_cast<double>(out.orbit_points);
    out.expected_rate = static_cast<double>(out.counts.on_variety) / static_cast<double>(out.counts.ambient);
    return out;
}

CrossPrimeTable cross_prime_table(const PolyMap& phi, const IntPoint& start, const Subvariety& v, std::uint64_t p,
                                  std::uint64_t q, std::uint64_t iterates) {
    if (p == q) throw DomainError("cross_prime_table: need distinct primes");
    const Modulus mp(p), mq(q);
    const ReducedMap fp(phi, mp), fq(phi, mq);
    const ReducedVariety vp(v, p), vq(v, q);
    Coords xp = ResiduePoint::from_integers(start, phi.ambient(), mp).coords();
    Coords xq = ResiduePoint::from_integers(start, phi.ambient(), mq).coords();
    CrossPrimeTable t;
    for (std::uint64_t i = 0; i < iterates; ++i) {
        const bool a = vp.contains(xp), b = vq.contains(xq);
        ++t.total;
        t.on_v_p += a;
        t.on_v_q += b;
        t.on_both += a && b;
        xp = fp(xp);
        xq = fq(xq);
    }
    return t;
}

} // namespace dynobs
