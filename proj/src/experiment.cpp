#include "dynobs/experiment.hpp"

#include <cstdio>

#include "dynobs/error.hpp"
#include "dynobs/parallel.hpp"
#include "dynobs/random.hpp"
#include "dynobs/scan.hpp"

namespace dynobs {

namespace {

std::string opt(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); }

} // namespace

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ExperimentRow analyze_map(const PolyMap& phi, const IntPoint& P, std::uint64_t bound, const SearchOptions& options) {
    const unsigned n = phi.ambient().dim;
    ObstructionSearch search(phi, P, Subvariety::unit_sphere(n), options);
    ExperimentRow row;
    row.map_digest = phi.digest();

    const ObstructionReport any = search.search(bound, Strategy::all);
    row.any_outcome = any.outcome;
    row.tried = any.tried_count();
    if (any.modulus) row.any_m = any.modulus->to_u64();

    if (any.modulus && any.modulus->is_prime_power()) {
        row.prime_power_m = row.any_m;
    } else {
        const ObstructionReport pp = search.search(bound, Strategy::prime_powers);
        if (pp.modulus) row.prime_power_m = pp.modulus->to_u64();
    }

    if (!row.any_m) {
        const auto points = unit_sphere_integral_points(n);
        const Subvariety sphere = Subvariety::unit_sphere(n);
        for (const std::uint64_t p : sieve_primes(bound)) {
            try {
                if (integral_point_trick(phi, P, points, sphere, p, options)) {
                    row.integral_prime = p;
                    break;
                }
            } catch (const BudgetExceeded&) {
                // too long at this prime; try the next
            }
        }
    }
    return row;
}

ExperimentSummary run_experiment(const ExperimentOptions& options) {
    if (options.count == 0) throw DomainError("experiment: count must be at least 1");
    ExperimentSummary summary;
    summary.options = options;
    if (summary.options.point.empty()) summary.options.point = IntPoint(options.n, BigInt(1));
    if (summary.options.point.size() != options.n) throw DomainError("experiment: start point dimension differs from n");

    const std::uint64_t offset = options.include_identity ? 1 : 0;
    const std::uint64_t total = options.count + offset;
    summary.rows.resize(total);
    parallel_for(total, options.workers, [&](std::size_t i) {
        std::uint64_t map_seed = 0;
        const PolyMap phi = [&] {
            if (i < offset) return PolyMap::identity(Ambient::affine(options.n));
            map_seed = derive_seed(options.seed, i - offset);
            return random_map(options.n, options.degree, options.coeff_bound, map_seed);
        }();
        ExperimentRow row = analyze_map(phi, summary.options.point, options.bound, options.search);
        row.index = i;
        row.map_seed = map_seed;
        summary.rows[i] = row;
    });
    return summary;
}

std::uint64_t ExperimentSummary::prime_power_found() const {
    std::uint64_t c = 0;
    for (const auto& r : rows) c += r.prime_power_m.has_value();
    return c;
}

std::uint64_t ExperimentSummary::any_found() const {
    std::uint64_t c = 0;
    for (const auto& r : rows) c += r.any_m.has_value();
    return c;
}

std::uint64_t ExperimentSummary::integral_found() const {
    std::uint64_t c = 0;
    for (const auto& r : rows) c += !r.any_m && r.integral_prime;
    return c;
}

double ExperimentSummary::fraction_prime_power() const {
    return rows.empty() ? 0.0 : static_cast<double>(prime_power_found()) / static_cast<double>(rows.size());
}

double ExperimentSummary::fraction_any() const {
    return rows.empty() ? 0.0 : static_cast<double>(any_found()) / static_cast<double>(rows.size());
}

std::vector<std::uint64_t> ExperimentSummary::unresolved() const {
    std::vector<std::uint64_t> out;
    for (const auto& r : rows)
        if (!r.any_m && !r.integral_prime) out.push_back(r.index);
    return out;
}

std::string ExperimentSummary::rows_csv() const {
    std::string s = "index,map_seed,map_digest,prime_power_m,any_m,any_outcome,integral_prime,tried\n";
    for (const auto& r : rows) {
        s += std::to_string(r.index) + "," + std::to_string(r.map_seed) + "," + format_digest(r.map_digest) + "," +
             opt(r.prime_power_m) + "," + opt(r.any_m) + "," + to_string(r.any_outcome) + "," + opt(r.integral_prime) + "," +
             std::to_string(r.tried) + "\n";
    }
    return s;
}

std::string ExperimentSummary::summary_csv() const {
    std::string unresolved_list;
    for (const auto i : unresolved()) {
        if (!unresolved_list.empty()) unresolved_list += ' ';
        unresolved_list += std::to_string(i);
    }
    return "maps,bound,prime_power_found,any_found,integral_found,fraction_prime_power,fraction_any,unresolved\n" +
           std::to_string(rows.size()) + "," + std::to_string(options.bound) + "," + std::to_string(prime_power_found()) + "," +
           std::to_string(any_found()) + "," + std::to_string(integral_found()) + "," + fmt_real(fraction_prime_power()) + "," +
           fmt_real(fraction_any()) + "," + unresolved_list + "\n";
}

} // namespace dynobs
