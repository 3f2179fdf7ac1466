#pragma once

// Sparse integer polynomials, polynomial self-maps of affine and projective
// space, subvarieties, and their reduction modulo m.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynobs/modarith.hpp"

namespace dynobs {

inline constexpr std::size_t kMaxCoords = 8;

/// Fixed-capacity coordinate tuple. Cheap to copy and hash, which matters
/// inside the orbit engines.
class Coords {
public:
    Coords() = default;
    explicit Coords(std::size_t n) : size_(static_cast<std::uint8_t>(n)) {}
    Coords(std::initializer_list<std::uint64_t> vals);

    std::size_t size() const { return size_; }
    std::uint64_t& operator[](std::size_t i) { return data_[i]; }
    std::uint64_t operator[](std::size_t i) const { return data_[i]; }
    std::span<const std::uint64_t> span() const { return {data_.data(), size_}; }
    const std::uint64_t* begin() const { return data_.data(); }
    const std::uint64_t* end() const { return data_.data() + size_; }

    bool operator==(const Coords& o) const {
        if (size_ != o.size_) return false;
        for (std::size_t i = 0; i < size_; ++i)
            if (data_[i] != o.data_[i]) return false;
        return true;
    }

    std::size_t hash() const;
    std::string to_string(bool projective = false) const;

private:
    std::array<std::uint64_t, kMaxCoords> data_{};
    std::uint8_t size_ = 0;
};

struct CoordsHash {
    std::size_t operator()(const Coords& c) const { return c.hash(); }
};

enum class AmbientKind { affine, projective };

struct Ambient {
    AmbientKind kind = AmbientKind::affine;
    unsigned dim = 1;

    static Ambient affine(unsigned n) { return {AmbientKind::affine, n}; }
    static Ambient projective(unsigned n) { return {AmbientKind::projective, n}; }

    bool is_projective() const { return kind == AmbientKind::projective; }
    /// Number of coordinates of a point: n for A^n, n+1 for P^n.
    unsigned num_vars() const { return is_projective() ? dim + 1 : dim; }
    std::string to_string() const;  // "affine 5", "projective 1"

    bool operator==(const Ambient&) const = default;
};

struct Term {
    std::vector<unsigned> exponents;
    BigInt coeff;
};

/// Sparse multivariate polynomial with integer coefficients. Terms are kept
/// canonical: no zero coefficients, no repeated monomials, sorted by graded
/// lexicographic order with the highest term first.
class IntPoly {
public:
    explicit IntPoly(unsigned num_vars = 1);
    IntPoly(unsigned num_vars, std::vector<Term> terms);

    static IntPoly constant(unsigned num_vars, const BigInt& c);
    /// The coordinate function x_{index+1}.
    static IntPoly variable(unsigned num_vars, unsigned index);

    unsigned num_vars() const { return num_vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Maximum total degree; 0 for the zero polynomial.
    unsigned degree() const;
    bool is_homogeneous() const;

    /// Exact value at an integer point.
    BigInt eval_exact(std::span<const BigInt> point) const;

    /// Canonical text: "x1^2 + 5*x2^2", "-3*x1*x3 + 1", "0".
    std::string to_string() const;

    bool operator==(const IntPoly& o) const;

private:
    unsigned num_vars_;
    std::vector<Term> terms_;
};

/// Integer point used as the start of an orbit over Z (or a projective
/// representative, stored primitive).
using IntPoint = std::vector<BigInt>;

class PolyMap {
public:
    /// Throws DomainError when coordinates do not fit the ambient: wrong
    /// count, wrong variable count, or (projective) not all homogeneous of
    /// one common degree, or all zero.
    PolyMap(Ambient ambient, std::vector<IntPoly> coords);

    static PolyMap identity(Ambient ambient);

    const Ambient& ambient() const { return ambient_; }
    const std::vector<IntPoly>& coords() const { return coords_; }
    unsigned degree() const { return degree_; }

    /// Image of an integer point over Z (affine only).
    IntPoint apply_exact(const IntPoint& pt) const;

    /// Canonical text form (header line plus one polynomial per line).
    std::string to_text() const;
    /// FNV-1a 64 over to_text().
    std::uint64_t digest() const;

private:
    Ambient ambient_;
    std::vector<IntPoly> coords_;
    unsigned degree_ = 0;
};

class Subvariety {
public:
    Subvariety(Ambient ambient, std::vector<IntPoly> equations);

    const Ambient& ambient() const { return ambient_; }
    const std::vector<IntPoly>& equations() const { return equations_; }

    /// True iff every equation vanishes at the integer point.
    bool contains_exact(const IntPoint& pt) const;

    std::string to_text() const;
    std::uint64_t digest() const;

    /// V(1 - x1^2 - ... - xn^2) in A^n.
    static Subvariety unit_sphere(unsigned n);

private:
    Ambient ambient_;
    std::vector<IntPoly> equations_;
};

/// A point of X(Z/m). Affine coordinates are reduced; projective points
/// (prime-power moduli only) are scaled so the last unit coordinate is 1.
class ResiduePoint {
public:
    static ResiduePoint affine(Modulus modulus, Coords coords);
    /// Normalizes; throws BadReduction if no coordinate is a unit.
    static ResiduePoint projective(Modulus modulus, Coords coords);
    /// Reduction of an integer point; projective points must be primitive
    /// or at least have a coordinate prime to the modulus.
    static ResiduePoint from_integers(const IntPoint& pt, Ambient ambient, Modulus modulus);

    const Modulus& modulus() const { return modulus_; }
    const Coords& coords() const { return coords_; }
    bool is_projective() const { return projective_; }
    std::string to_string() const;

    bool operator==(const ResiduePoint& o) const {
        return modulus_ == o.modulus_ && projective_ == o.projective_ && coords_ == o.coords_;
    }

private:
    ResiduePoint(Modulus m, Coords c, bool proj) : modulus_(m), coords_(c), projective_(proj) {}
    Modulus modulus_;
    Coords coords_;
    bool projective_;
};

/// In-place projective normalization modulo the prime power q = p^e:
/// multiply by the inverse of the last unit coordinate. Returns false (and
/// leaves c untouched) if no coordinate is a unit.
bool normalize_projective(Coords& c, const Modulus& q);

// ---- compiled (reduced mod m) forms for hot loops ------------------------

/// A set of polynomials in the same variables reduced modulo m, evaluated
/// together: each distinct monomial is computed once from a power table,
/// then each output is a dot product with its coefficient row.
class ReducedPolys {
public:
    ReducedPolys(std::span<const IntPoly> polys, unsigned num_vars, std::uint64_t m);

    /// out[k] = polys[k](pt) mod m. `out` must have room for polys.size().
    void eval(const Coords& pt, std::uint64_t* out) const;
    std::size_t size() const { return rows_; }

private:
    std::uint64_t m_;
    unsigned num_vars_;
    unsigned max_exp_;
    std::size_t rows_;
    // Monomial k is the product over (var, exp) pairs in
    // factors_[offsets_[k] .. offsets_[k+1]).
    std::vector<std::pair<std::uint8_t, std::uint8_t>> factors_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint64_t> coeffs_;  // rows_ x monomial count, row-major
};

/// A PolyMap reduced modulo m: the step function of the orbit engines.
class ReducedMap {
public:
    ReducedMap(const PolyMap& map, Modulus modulus);

    /// out = map(in). Projective: renormalized; throws BadReduction.
    void apply(const Coords& in, Coords& out) const;
    Coords operator()(const Coords& in) const {
        Coords out;
        apply(in, out);
        return out;
    }

    const Modulus& modulus() const { return modulus_; }
    bool is_projective() const { return projective_; }

private:
    Modulus modulus_;
    bool projective_;
    std::size_t out_dim_;
    ReducedPolys polys_;
};

class ReducedVariety {
public:
    ReducedVariety(const Subvariety& v, std::uint64_t m);
    bool contains(const Coords& pt) const;

private:
    ReducedPolys polys_;
};

// ---- operations ----------------------------------------------------------

/// f(pt) mod pt.modulus().
std::uint64_t poly_eval(const IntPoly& f, const ResiduePoint& pt);

/// phi(pt) over the residue ring of pt.
ResiduePoint map_apply(const PolyMap& phi, const ResiduePoint& pt);

bool on_subvariety(const Subvariety& v, const ResiduePoint& pt);

struct PointCounts {
    std::uint64_t on_variety = 0;
    std::uint64_t ambient = 0;
};

inline constexpr std::uint64_t kDefaultCountBudget = 10'000'000;

/// Exhaustive counts of V(F_p) and X(F_p). Throws BudgetExceeded if the
/// ambient has more than `budget` points over F_p.
PointCounts count_points(const Subvariety& v, std::uint64_t p, std::uint64_t budget = kDefaultCountBudget);

/// Calls fn(coords) for every point of the ambient over F_p: all tuples in
/// lexicographic order for A^n, canonical representatives for P^n.
void for_each_point(Ambient ambient, std::uint64_t p, const std::function<void(const Coords&)>& fn);

/// Random self-map of A^n. Every coordinate polynomial gets every monomial
/// of total degree <= degree; coefficients are drawn from SplitMix64(seed)
/// with uniform_int(-coeff_bound, coeff_bound), coordinate by coordinate,
/// monomials in ascending graded-lex order (constant first; within a degree,
/// larger x1 exponent first, then x2, ...).
PolyMap random_map(unsigned n, unsigned degree, std::int64_t coeff_bound, std::uint64_t seed);

/// All exponent vectors of total degree <= degree in n variables, in the
/// order used by random_map.
std::vector<std::vector<unsigned>> monomials_up_to(unsigned n, unsigned degree);

// ---- text format ---------------------------------------------------------
//
//   file     := { comment | blank } header { line }
//   header   := "ambient" ("affine" | "projective") N
//   line     := poly                      (one per coordinate / equation)
//   poly     := ["-"] term { ("+" | "-") term } | "0"
//   term     := coeff | [coeff "*"] var { "*" var }
//   var      := "x" INDEX [ "^" EXP ]       (INDEX in 1..num_vars)
//   comment  := "#" ...
//
// Whitespace is ignored inside a polynomial.

IntPoly parse_poly(std::string_view text, unsigned num_vars);
PolyMap parse_map(std::string_view text);
Subvariety parse_variety(std::string_view text);

/// Comma- or colon-separated integers, optionally wrapped in () or [].
IntPoint parse_point(std::string_view text);
std::string format_point(const IntPoint& pt);

/// Projective integer points are divided by the gcd of their coordinates.
IntPoint primitive(const IntPoint& pt);

std::uint64_t fnv1a64(std::string_view text);

} // namespace dynobs
