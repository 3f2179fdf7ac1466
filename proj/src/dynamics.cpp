#include "dynobs/dynamics.hpp"

#include <numeric>

namespace dynobs {

namespace {

void check_compatible(const PolyMap& phi, const ResiduePoint& p) {
    if (phi.ambient().num_vars() != p.coords().size()) throw DomainError("orbit: point dimension does not match the map");
    if (phi.ambient().is_projective() != p.is_projective()) throw DomainError("orbit: affine/projective mismatch");
}

OrbitSummary bad(const ResiduePoint& p, const BadReduction& e) {
    OrbitSummary s;
    s.modulus = p.modulus().value();
    s.bad_reduction = true;
    s.bad_reduction_detail = e.what();
    return s;
}

ResiduePoint advance_point(const ReducedMap& rm, const ResiduePoint& p, std::uint64_t steps) {
    Coords c = p.coords();
    for (std::uint64_t i = 0; i < steps; ++i) c = rm(c);
    return p.is_projective() ? ResiduePoint::projective(p.modulus(), c) : ResiduePoint::affine(p.modulus(), c);
}

} // namespace

OrbitSummary orbit_summary(const PolyMap& phi, const ResiduePoint& p, std::uint64_t budget) {
    check_compatible(phi, p);
    const ReducedMap rm(phi, p.modulus());
    try {
        const CycleShape shape = brent_shape(p.coords(), rm, budget);
        OrbitSummary s;
        s.modulus = p.modulus().value();
        s.tail = shape.tail;
        s.cycle = shape.cycle;
        s.rho = shape.rho();
        s.entry_point = advance_point(rm, p, shape.tail);
        return s;
    } catch (const BadReduction& e) {
        return bad(p, e);
    }
}

OrbitSummary orbit_summary_hashed(const PolyMap& phi, const ResiduePoint& p, std::uint64_t max_points) {
    check_compatible(phi, p);
    const ReducedMap rm(phi, p.modulus());
    try {
        const CycleShape shape = hashed_shape(p.coords(), rm, max_points, CoordsHash{});
        OrbitSummary s;
        s.modulus = p.modulus().value();
        s.tail = shape.tail;
        s.cycle = shape.cycle;
        s.rho = shape.rho();
        s.entry_point = advance_point(rm, p, shape.tail);
        return s;
    } catch (const BadReduction& e) {
        return bad(p, e);
    }
}

std::vector<ResiduePoint> orbit_elements(const PolyMap& phi, const ResiduePoint& p, std::uint64_t upto) {
    check_compatible(phi, p);
    if (upto == 0) throw DomainError("orbit_elements: upto must be at least 1");
    const ReducedMap rm(phi, p.modulus());
    std::vector<ResiduePoint> out{p};
    out.reserve(upto);
    while (out.size() < upto) out.push_back(advance_point(rm, out.back(), 1));
    return out;
}

CompositeCycle composite_cycle_length(std::span<const OrbitSummary> parts) {
    if (parts.empty()) throw DomainError("composite_cycle_length: no components");
    CompositeCycle out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].bad_reduction) throw DomainError("composite_cycle_length: component has bad reduction");
        for (std::size_t j = 0; j < i; ++j)
            if (std::gcd(parts[i].modulus, parts[j].modulus) != 1) throw DomainError("composite_cycle_length: moduli not coprime");
        out.tail = std::max(out.tail, parts[i].tail);
        out.cycle = lcm_factored(out.cycle, factorize(parts[i].cycle));
    }
    return out;
}

} // namespace dynobs
