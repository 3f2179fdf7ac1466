#include "dynobs/variety.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "dynobs/error.hpp"
#include "dynobs/random.hpp"

namespace dynobs {

namespace {

unsigned total_degree(const std::vector<unsigned>& e) {
    unsigned d = 0;
    for (unsigned x : e) d += x;
    return d;
}

// Graded lexicographic, highest first.
bool grlex_greater(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
    const unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
}

std::string monomial_string(const std::vector<unsigned>& e) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += '*';
        s += 'x' + std::to_string(i + 1);
        if (e[i] > 1) s += '^' + std::to_string(e[i]);
    }
    return s;
}

std::string strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    std::string s(line.substr(0, hash));
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> content_lines(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        auto s = strip_comment(line);
        if (!s.empty()) out.push_back(std::move(s));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

Ambient parse_header(const std::string& line) {
    std::istringstream is(line);
    std::string word, kind;
    long long n = -1;
    is >> word >> kind >> n;
    if (word != "ambient" || (kind != "affine" && kind != "projective") || n < 1 || n + 1 > static_cast<long long>(kMaxCoords))
        throw ParseError("bad header '" + line + "' (expected 'ambient affine|projective N', N+1 <= 8)");
    std::string rest;
    if (is >> rest) throw ParseError("trailing text in header '" + line + "'");
    return kind == "affine" ? Ambient::affine(static_cast<unsigned>(n)) : Ambient::projective(static_cast<unsigned>(n));
}

std::string fmt_u(const Coords& c, bool projective) {
    std::string s = projective ? "[" : "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += projective ? ":" : ",";
        s += std::to_string(c[i]);
    }
    s += projective ? "]" : ")";
    return s;
}

} // namespace

// ---- Coords / Ambient ----------------------------------------------------

Coords::Coords(std::initializer_list<std::uint64_t> vals) : size_(static_cast<std::uint8_t>(vals.size())) {
    if (vals.size() > kMaxCoords) throw DomainError("Coords: too many coordinates");
    std::copy(vals.begin(), vals.end(), data_.begin());
}

std::size_t Coords::hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
    for (std::size_t i = 0; i < size_; ++i) {
        h ^= data_[i] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
}

std::string Coords::to_string(bool projective) const { return fmt_u(*this, projective); }

std::string Ambient::to_string() const {
    return std::string(is_projective() ? "projective " : "affine ") + std::to_string(dim);
}

// ---- IntPoly -------------------------------------------------------------

IntPoly::IntPoly(unsigned num_vars) : num_vars_(num_vars) {
    if (num_vars == 0 || num_vars > kMaxCoords) throw DomainError("IntPoly: num_vars must be in 1..8");
}

IntPoly::IntPoly(unsigned num_vars, std::vector<Term> terms) : IntPoly(num_vars) {
    std::map<std::vector<unsigned>, BigInt> acc;
    for (auto& t : terms) {
        if (t.exponents.size() != num_vars) throw DomainError("IntPoly: exponent tuple length differs from num_vars");
        acc[t.exponents] += t.coeff;
    }
    for (auto& [e, c] : acc)
        if (c != 0) terms_.push_back({e, c});
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return grlex_greater(a.exponents, b.exponents); });
}

IntPoly IntPoly::constant(unsigned num_vars, const BigInt& c) {
    return IntPoly(num_vars, {Term{std::vector<unsigned>(num_vars, 0), c}});
}

IntPoly IntPoly::variable(unsigned num_vars, unsigned index) {
    std::vector<unsigned> e(num_vars, 0);
    e.at(index) = 1;
    return IntPoly(num_vars, {Term{e, 1}});
}

unsigned IntPoly::degree() const { return terms_.empty() ? 0 : total_degree(terms_.front().exponents); }

bool IntPoly::is_homogeneous() const {
    return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return total_degree(t.exponents) == degree(); });
}

BigInt IntPoly::eval_exact(std::span<const BigInt> point) const {
    if (point.size() != num_vars_) throw DomainError("eval_exact: dimension mismatch");
    BigInt sum = 0;
    for (const auto& t : terms_) {
        BigInt v = t.coeff;
        for (unsigned i = 0; i < num_vars_; ++i)
            if (t.exponents[i]) v *= boost::multiprecision::pow(point[i], t.exponents[i]);
        sum += v;
    }
    return sum;
}

std::string IntPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const auto& t = terms_[k];
        const bool neg = t.coeff < 0;
        const BigInt mag = neg ? BigInt(-t.coeff) : t.coeff;
        if (k == 0) {
            if (neg) s += '-';
        } else {
            s += neg ? " - " : " + ";
        }
        const std::string mono = monomial_string(t.exponents);
        if (mono.empty()) {
            s += mag.str();
        } else if (mag == 1) {
            s += mono;
        } else {
            s += mag.str() + '*' + mono;
        }
    }
    return s;
}

bool IntPoly::operator==(const IntPoly& o) const {
    if (num_vars_ != o.num_vars_ || terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].exponents != o.terms_[i].exponents || terms_[i].coeff != o.terms_[i].coeff) return false;
    return true;
}

// ---- PolyMap / Subvariety ------------------------------------------------

PolyMap::PolyMap(Ambient ambient, std::vector<IntPoly> coords) : ambient_(ambient), coords_(std::move(coords)) {
    const unsigned nv = ambient_.num_vars();
    if (nv == 0 || nv > kMaxCoords) throw DomainError("PolyMap: unsupported dimension");
    if (coords_.size() != nv)
        throw DomainError("PolyMap: expected " + std::to_string(nv) + " coordinate polynomials, got " + std::to_string(coords_.size()));
    for (const auto& f : coords_)
        if (f.num_vars() != nv) throw DomainError("PolyMap: coordinate polynomial has wrong number of variables");
    for (const auto& f : coords_) degree_ = std::max(degree_, f.degree());
    if (ambient_.is_projective()) {
        if (std::all_of(coords_.begin(), coords_.end(), [](const IntPoly& f) { return f.is_zero(); }))
            throw DomainError("PolyMap: projective map with all coordinates zero");
        for (const auto& f : coords_)
            if (!f.is_zero() && (!f.is_homogeneous() || f.degree() != degree_))
                throw DomainError("PolyMap: projective coordinates must be homogeneous of a common degree");
    }
}

PolyMap PolyMap::identity(Ambient ambient) {
    std::vector<IntPoly> c;
    for (unsigned i = 0; i < ambient.num_vars(); ++i) c.push_back(IntPoly::variable(ambient.num_vars(), i));
    return PolyMap(ambient, std::move(c));
}

IntPoint PolyMap::apply_exact(const IntPoint& pt) const {
    if (ambient_.is_projective()) throw DomainError("apply_exact: affine maps only");
    IntPoint out;
    out.reserve(coords_.size());
    for (const auto& f : coords_) out.push_back(f.eval_exact(pt));
    return out;
}

std::string PolyMap::to_text() const {
    std::string s = "ambient " + ambient_.to_string() + "\n";
    for (const auto& f : coords_) s += f.to_string() + "\n";
    return s;
}

std::uint64_t PolyMap::digest() const { return fnv1a64(to_text()); }

Subvariety::Subvariety(Ambient ambient, std::vector<IntPoly> equations) : ambient_(ambient), equations_(std::move(equations)) {
    if (equations_.empty()) throw DomainError("Subvariety: need at least one equation");
    for (const auto& f : equations_) {
        if (f.num_vars() != ambient_.num_vars()) throw DomainError("Subvariety: equation has wrong number of variables");
        if (ambient_.is_projective() && !f.is_homogeneous()) throw DomainError("Subvariety: projective equations must be homogeneous");
    }
}

bool Subvariety::contains_exact(const IntPoint& pt) const {
    return std::all_of(equations_.begin(), equations_.end(), [&](const IntPoly& f) { return f.eval_exact(pt) == 0; });
}

std::string Subvariety::to_text() const {
    std::string s = "ambient " + ambient_.to_string() + "\n";
    for (const auto& f : equations_) s += f.to_string() + "\n";
    return s;
}

std::uint64_t Subvariety::digest() const { return fnv1a64(to_text()); }

Subvariety Subvariety::unit_sphere(unsigned n) {
    std::vector<Term> terms{{std::vector<unsigned>(n, 0), 1}};
    for (unsigned i = 0; i < n; ++i) {
        std::vector<unsigned> e(n, 0);
        e[i] = 2;
        terms.push_back({e, -1});
    }
    return Subvariety(Ambient::affine(n), {IntPoly(n, std::move(terms))});
}

// ---- ResiduePoint --------------------------------------------------------

bool normalize_projective(Coords& c, const Modulus& q) {
    for (std::size_t i = c.size(); i-- > 0;) {
        if (!q.is_unit(c[i])) continue;
        const std::uint64_t inv = mod_inverse(c[i], q.value());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = mulmod(c[j], inv, q.value());
        return true;
    }
    return false;
}

ResiduePoint ResiduePoint::affine(Modulus modulus, Coords coords) {
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] %= modulus.value();
    return ResiduePoint(modulus, coords, false);
}

ResiduePoint ResiduePoint::projective(Modulus modulus, Coords coords) {
    if (!modulus.is_prime_power()) throw DomainError("projective points need a prime-power modulus");
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] %= modulus.value();
    if (!normalize_projective(coords, modulus))
        throw BadReduction("projective point " + coords.to_string(true) + " has no unit coordinate mod " + std::to_string(modulus.value()));
    return ResiduePoint(modulus, coords, true);
}

ResiduePoint ResiduePoint::from_integers(const IntPoint& pt, Ambient ambient, Modulus modulus) {
    if (pt.size() != ambient.num_vars())
        throw DomainError("point has " + std::to_string(pt.size()) + " coordinates, ambient needs " + std::to_string(ambient.num_vars()));
    const IntPoint src = ambient.is_projective() ? primitive(pt) : pt;
    Coords c(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) c[i] = reduce(src[i], modulus.value());
    return ambient.is_projective() ? projective(modulus, c) : affine(modulus, c);
}

std::string ResiduePoint::to_string() const {
    return coords_.to_string(projective_) + " mod " + std::to_string(modulus_.value());
}

// ---- ReducedPolys / ReducedMap / ReducedVariety --------------------------

ReducedPolys::ReducedPolys(std::span<const IntPoly> polys, unsigned num_vars, std::uint64_t m)
    : m_(m), num_vars_(num_vars), max_exp_(0), rows_(polys.size()) {
    std::map<std::vector<unsigned>, std::size_t> index;
    std::vector<std::vector<unsigned>> monos;
    for (const auto& f : polys) {
        if (f.num_vars() != num_vars) throw DomainError("ReducedPolys: dimension mismatch");
        for (const auto& t : f.terms()) {
            if (index.emplace(t.exponents, monos.size()).second) monos.push_back(t.exponents);
            for (unsigned e : t.exponents) max_exp_ = std::max(max_exp_, e);
        }
    }
    if (max_exp_ > 255) throw DomainError("ReducedPolys: exponent above 255");
    offsets_.push_back(0);
    for (const auto& e : monos) {
        for (unsigned v = 0; v < num_vars; ++v)
            if (e[v]) factors_.emplace_back(static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(e[v]));
        offsets_.push_back(static_cast<std::uint32_t>(factors_.size()));
    }
    coeffs_.assign(rows_ * monos.size(), 0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& t : polys[r].terms()) coeffs_[r * monos.size() + index.at(t.exponents)] = reduce(t.coeff, m);
}

void ReducedPolys::eval(const Coords& pt, std::uint64_t* out) const {
    const std::size_t nmono = offsets_.size() - 1;
    // Power table: pw[v * (max_exp_ + 1) + e] = pt[v]^e mod m.
    std::uint64_t pw_buf[kMaxCoords * 16];
    std::vector<std::uint64_t> pw_heap;
    const std::size_t stride = max_exp_ + 1;
    std::uint64_t* pw = pw_buf;
    if (num_vars_ * stride > std::size(pw_buf)) {
        pw_heap.resize(num_vars_ * stride);
        pw = pw_heap.data();
    }
    for (unsigned v = 0; v < num_vars_; ++v) {
        std::uint64_t* row = pw + v * stride;
        row[0] = 1 % m_;
        for (unsigned e = 1; e <= max_exp_; ++e) row[e] = mulmod(row[e - 1], pt[v], m_);
    }

    std::uint64_t mono_buf[128];
    std::vector<std::uint64_t> mono_heap;
    std::uint64_t* mono = mono_buf;
    if (nmono > std::size(mono_buf)) {
        mono_heap.resize(nmono);
        mono = mono_heap.data();
    }
    for (std::size_t k = 0; k < nmono; ++k) {
        std::uint64_t v = 1 % m_;
        for (std::uint32_t f = offsets_[k]; f < offsets_[k + 1]; ++f)
            v = mulmod(v, pw[factors_[f].first * stride + factors_[f].second], m_);
        mono[k] = v;
    }

    const bool small = m_ <= (std::uint64_t{1} << 32);
    for (std::size_t r = 0; r < rows_; ++r) {
        const std::uint64_t* c = coeffs_.data() + r * nmono;
        if (small) {
            u128 acc = 0;
            for (std::size_t k = 0; k < nmono; ++k) acc += c[k] * mono[k];
            out[r] = static_cast<std::uint64_t>(acc % m_);
        } else {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < nmono; ++k) acc = addmod(acc, mulmod(c[k], mono[k], m_), m_);
            out[r] = acc;
        }
    }
}

ReducedMap::ReducedMap(const PolyMap& map, Modulus modulus)
    : modulus_(modulus),
      projective_(map.ambient().is_projective()),
      out_dim_(map.coords().size()),
      polys_(map.coords(), map.ambient().num_vars(), modulus.value()) {
    if (projective_ && !modulus.is_prime_power())
        throw DomainError("projective maps reduce only modulo prime powers (got " + std::to_string(modulus.value()) + ")");
}

void ReducedMap::apply(const Coords& in, Coords& out) const {
    std::uint64_t buf[kMaxCoords];
    polys_.eval(in, buf);
    out = Coords(out_dim_);
    for (std::size_t i = 0; i < out_dim_; ++i) out[i] = buf[i];
    if (projective_ && !normalize_projective(out, modulus_))
        throw BadReduction("image of " + in.to_string(true) + " has no unit coordinate mod " + std::to_string(modulus_.value()));
}

ReducedVariety::ReducedVariety(const Subvariety& v, std::uint64_t m)
    : polys_(v.equations(), v.ambient().num_vars(), m) {}

bool ReducedVariety::contains(const Coords& pt) const {
    std::uint64_t stack_buf[16];
    std::vector<std::uint64_t> heap;
    std::uint64_t* out = stack_buf;
    if (polys_.size() > std::size(stack_buf)) {
        heap.resize(polys_.size());
        out = heap.data();
    }
    polys_.eval(pt, out);
    for (std::size_t i = 0; i < polys_.size(); ++i)
        if (out[i] != 0) return false;
    return true;
}

// ---- operations ----------------------------------------------------------

std::uint64_t poly_eval(const IntPoly& f, const ResiduePoint& pt) {
    if (f.num_vars() != pt.coords().size()) throw DomainError("poly_eval: dimension mismatch");
    const ReducedPolys rp(std::span<const IntPoly>(&f, 1), f.num_vars(), pt.modulus().value());
    std::uint64_t out = 0;
    rp.eval(pt.coords(), &out);
    return out;
}

ResiduePoint map_apply(const PolyMap& phi, const ResiduePoint& pt) {
    if (phi.ambient().num_vars() != pt.coords().size()) throw DomainError("map_apply: dimension mismatch");
    if (phi.ambient().is_projective() != pt.is_projective()) throw DomainError("map_apply: affine/projective mismatch");
    const ReducedMap rm(phi, pt.modulus());
    const Coords img = rm(pt.coords());
    return pt.is_projective() ? ResiduePoint::projective(pt.modulus(), img) : ResiduePoint::affine(pt.modulus(), img);
}

bool on_subvariety(const Subvariety& v, const ResiduePoint& pt) {
    if (v.ambient().num_vars() != pt.coords().size()) throw DomainError("on_subvariety: dimension mismatch");
    return ReducedVariety(v, pt.modulus().value()).contains(pt.coords());
}

void for_each_point(Ambient ambient, std::uint64_t p, const std::function<void(const Coords&)>& fn) {
    const unsigned nv = ambient.num_vars();
    if (!ambient.is_projective()) {
        Coords c(nv);
        for (;;) {
            fn(c);
            std::size_t i = nv;
            while (i > 0) {
                --i;
                if (++c[i] < p) break;
                c[i] = 0;
                if (i == 0) return;
            }
        }
    }
    // Canonical representatives: last nonzero coordinate k equals 1,
    // coordinates before k free, after k zero.
    for (unsigned k = 0; k < nv; ++k) {
        Coords c(nv);
        c[k] = 1;
        for (;;) {
            fn(c);
            std::size_t i = k;
            bool done = true;
            while (i > 0) {
                --i;
                if (++c[i] < p) {
                    done = false;
                    break;
                }
                c[i] = 0;
            }
            if (done) break;
        }
    }
}

PointCounts count_points(const Subvariety& v, std::uint64_t p, std::uint64_t budget) {
    if (!is_prime(p)) throw DomainError("count_points: p must be prime");
    const unsigned nv = v.ambient().num_vars();
    const unsigned free_dim = v.ambient().is_projective() ? nv - 1 : nv;
    const auto pn = checked_pow(p, free_dim);
    if (!pn || *pn > budget) throw BudgetExceeded("count_points: p^n exceeds enumeration budget");
    const ReducedVariety rv(v, p);
    PointCounts out;
    for_each_point(v.ambient(), p, [&](const Coords& c) {
        ++out.ambient;
        if (rv.contains(c)) ++out.on_variety;
    });
    return out;
}

std::vector<std::vector<unsigned>> monomials_up_to(unsigned n, unsigned degree) {
    std::vector<std::vector<unsigned>> out;
    for (unsigned d = 0; d <= degree; ++d) {
        // Exponent vectors of total degree d, larger x1 exponent first.
        std::vector<unsigned> e(n, 0);
        std::function<void(unsigned, unsigned)> rec = [&](unsigned var, unsigned left) {
            if (var + 1 == n) {
                e[var] = left;
                out.push_back(e);
                return;
            }
            for (unsigned k = left + 1; k-- > 0;) {
                e[var] = k;
                rec(var + 1, left - k);
            }
            e[var] = 0;
        };
        rec(0, d);
    }
    return out;
}

PolyMap random_map(unsigned n, unsigned degree, std::int64_t coeff_bound, std::uint64_t seed) {
    if (n == 0 || n > kMaxCoords || degree == 0 || coeff_bound < 0) throw DomainError("random_map: need n in 1..8, degree >= 1, B >= 0");
    const auto monos = monomials_up_to(n, degree);
    SplitMix64 rng(seed);
    std::vector<IntPoly> coords;
    for (unsigned i = 0; i < n; ++i) {
        std::vector<Term> terms;
        terms.reserve(monos.size());
        for (const auto& e : monos) terms.push_back({e, BigInt(rng.uniform_int(-coeff_bound, coeff_bound))});
        coords.emplace_back(n, std::move(terms));
    }
    return PolyMap(Ambient::affine(n), std::move(coords));
}

// ---- text format ---------------------------------------------------------

IntPoly parse_poly(std::string_view text, unsigned num_vars) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty polynomial");

    std::size_t pos = 0;
    auto fail = [&](const std::string& what) {
        throw ParseError("polynomial '" + std::string(text) + "': " + what + " at offset " + std::to_string(pos));
    };
    auto read_uint = [&]() {
        const std::size_t b = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (b == pos) fail("expected digits");
        return s.substr(b, pos - b);
    };

    std::vector<Term> terms;
    bool first = true;
    while (pos < s.size()) {
        bool neg = false;
        if (s[pos] == '+' || s[pos] == '-') {
            neg = s[pos] == '-';
            ++pos;
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        BigInt coeff = 1;
        std::vector<unsigned> e(num_vars, 0);
        for (bool more = true; more;) {
            if (pos >= s.size()) fail("expected a factor");
            if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
                coeff *= BigInt(read_uint());
            } else if (s[pos] == 'x') {
                ++pos;
                const auto idx = std::stoul(read_uint());
                if (idx < 1 || idx > num_vars) fail("variable index out of range 1.." + std::to_string(num_vars));
                unsigned exp = 1;
                if (pos < s.size() && s[pos] == '^') {
                    ++pos;
                    exp = static_cast<unsigned>(std::stoul(read_uint()));
                }
                e[idx - 1] += exp;
            } else {
                fail(std::string("unexpected character '") + s[pos] + "'");
            }
            more = pos < s.size() && s[pos] == '*';
            if (more) ++pos;
        }
        terms.push_back({e, neg ? BigInt(-coeff) : coeff});
    }
    return IntPoly(num_vars, std::move(terms));
}

PolyMap parse_map(std::string_view text) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw ParseError("map file: missing header");
    const Ambient amb = parse_header(lines[0]);
    std::vector<IntPoly> coords;
    for (std::size_t i = 1; i < lines.size(); ++i) coords.push_back(parse_poly(lines[i], amb.num_vars()));
    if (coords.size() != amb.num_vars())
        throw ParseError("map file: expected " + std::to_string(amb.num_vars()) + " coordinate lines, got " + std::to_string(coords.size()));
    try {
        return PolyMap(amb, std::move(coords));
    } catch (const DomainError& e) {
        throw ParseError(std::string("map file: ") + e.what());
    }
}

Subvariety parse_variety(std::string_view text) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw ParseError("variety file: missing header");
    const Ambient amb = parse_header(lines[0]);
    std::vector<IntPoly> eqs;
    for (std::size_t i = 1; i < lines.size(); ++i) eqs.push_back(parse_poly(lines[i], amb.num_vars()));
    try {
        return Subvariety(amb, std::move(eqs));
    } catch (const DomainError& e) {
        throw ParseError(std::string("variety file: ") + e.what());
    }
}

IntPoint parse_point(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '(' && ch != ')' && ch != '[' && ch != ']') s += ch;
    IntPoint out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto sep = s.find_first_of(",:", pos);
        const std::string tok = s.substr(pos, sep == std::string::npos ? std::string::npos : sep - pos);
        const bool ok = !tok.empty() && std::all_of(tok.begin() + (tok[0] == '-' || tok[0] == '+' ? 1 : 0), tok.end(),
                                                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
                        tok.find_first_of("0123456789") != std::string::npos;
        if (!ok) throw ParseError("point '" + std::string(text) + "': bad coordinate '" + tok + "'");
        out.emplace_back(tok[0] == '+' ? tok.substr(1) : tok);
        if (sep == std::string::npos) break;
        pos = sep + 1;
    }
    if (out.size() > kMaxCoords) throw ParseError("point: too many coordinates");
    return out;
}

std::string format_point(const IntPoint& pt) {
    std::string s;
    for (std::size_t i = 0; i < pt.size(); ++i) {
        if (i) s += ',';
        s += pt[i].str();
    }
    return s;
}

IntPoint primitive(const IntPoint& pt) {
    BigInt g = 0;
    for (const auto& c : pt) g = boost::multiprecision::gcd(g, c < 0 ? BigInt(-c) : c);
    if (g <= 1) return pt;
    IntPoint out;
    for (const auto& c : pt) out.push_back(c / g);
    return out;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace dynobs
