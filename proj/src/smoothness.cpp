#include "dynobs/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dynobs/error.hpp"

namespace dynobs {

namespace {

// Node values and derivatives of rho on [0, kRhoMaxU] at spacing kRhoStep.
struct RhoTable {
    std::vector<double> value;
    std::vector<double> deriv;
    std::size_t unit_index;  // index of u = 1

    static double hermite(double y0, double d0, double y1, double d1, double t, double h) {
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
    }

    double at(double u) const {
        if (u <= 1.0) return 1.0;
        const double pos = u / kRhoStep;
        auto k = static_cast<std::size_t>(pos);
        if (k >= value.size() - 1) k = value.size() - 2;
        const double t = pos - static_cast<double>(k);
        return hermite(value[k], deriv[k], value[k + 1], deriv[k + 1], t, kRhoStep);
    }

    RhoTable() {
        const auto n = static_cast<std::size_t>(std::llround(kRhoMaxU / kRhoStep));
        unit_index = static_cast<std::size_t>(std::llround(1.0 / kRhoStep));
        value.assign(n + 1, 1.0);
        deriv.assign(n + 1, 0.0);
        // Right derivative at u = 1 so interpolation on [1, 1 + h] is correct.
        const double h = kRhoStep;
        deriv[unit_index] = -1.0;
        auto slope = [&](double u) { return -at(u - 1.0) / u; };
        for (std::size_t k = unit_index; k < n; ++k) {
            const double u = static_cast<double>(k) * h;
            // The right-hand side does not involve rho(u) itself, so the
            // classical RK4 stages collapse to f(u), f(u + h/2) twice, f(u + h).
            const double k1 = slope(u);
            const double k2 = slope(u + h / 2);
            const double k4 = slope(u + h);
            value[k + 1] = value[k] + h / 6.0 * (k1 + 4.0 * k2 + k4);
            deriv[k + 1] = -value[k + 1 - unit_index] / (u + h);
        }
    }
};

const RhoTable& rho_table() {
    static const RhoTable table;
    return table;
}

// a^ea <= b^eb, exact, for a, b >= 1.
bool pow_leq(std::uint64_t a, std::int64_t ea, std::uint64_t b, std::int64_t eb) {
    const long double lhs = static_cast<long double>(ea) * std::log(static_cast<long double>(a));
    const long double rhs = static_cast<long double>(eb) * std::log(static_cast<long double>(b));
    const long double scale = std::max<long double>({1.0L, std::fabs(lhs), std::fabs(rhs)});
    if (lhs < rhs - 1e-12L * scale) return true;
    if (lhs > rhs + 1e-12L * scale) return false;
    return boost::multiprecision::pow(BigInt(a), static_cast<unsigned>(ea)) <=
           boost::multiprecision::pow(BigInt(b), static_cast<unsigned>(eb));
}

void check_alpha(Rational a) {
    if (a.num <= 0 || a.den <= 0 || a.num >= a.den) throw DomainError("alpha must be a rational in (0, 1), got " + a.to_string());
}

} // namespace

Rational Rational::parse(std::string_view text) {
    const std::string s(text);
    auto to_i64 = [&](const std::string& t) {
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ParseError("bad rational '" + s + "'");
        return static_cast<std::int64_t>(std::stoll(t));
    };
    Rational r;
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        r.num = to_i64(s.substr(0, slash));
        r.den = to_i64(s.substr(slash + 1));
    } else if (const auto dot = s.find('.'); dot != std::string::npos) {
        const std::string frac = s.substr(dot + 1);
        if (frac.size() > 15) throw ParseError("too many decimals in '" + s + "'");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        r.num = (dot == 0 ? 0 : to_i64(s.substr(0, dot))) * den + (frac.empty() ? 0 : to_i64(frac));
        r.den = den;
    } else {
        r.num = to_i64(s);
        r.den = 1;
    }
    if (r.den == 0) throw ParseError("zero denominator in '" + s + "'");
    if (r.num == 0) throw ParseError("rational must be positive, got '" + s + "'");
    const std::int64_t g = std::gcd(r.num, r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    return r;
}

std::uint64_t largest_prime_factor(std::uint64_t n) {
    if (n == 0) throw DomainError("largest_prime_factor: n must be positive");
    const FactoredInt f = factorize(n);
    return f.is_one() ? 1 : f.factors().back().prime;
}

bool is_smooth(std::uint64_t n, double y) {
    if (n == 0) throw DomainError("is_smooth: n must be positive");
    if (!(y >= 1.0)) throw DomainError("is_smooth: y must be at least 1");
    return static_cast<double>(largest_prime_factor(n)) <= y;
}

bool is_smooth_pow(std::uint64_t n, std::uint64_t x, Rational alpha) {
    check_alpha(alpha);
    return pow_leq(largest_prime_factor(n), alpha.den, x, alpha.num);
}

std::uint64_t psi_count(std::uint64_t x, double y, std::uint64_t budget) {
    if (x > budget) throw BudgetExceeded("psi_count: x above enumeration budget " + std::to_string(budget));
    if (x == 0) return 0;
    // Smallest prime factor sieve, then converted in place (ascending n) to
    // the largest prime factor: gpf(n) = max(spf(n), gpf(n / spf(n))).
    std::vector<std::uint32_t> f(x + 1, 0);
    for (std::uint64_t i = 2; i <= x; ++i) {
        if (f[i]) continue;
        for (std::uint64_t j = i; j <= x; j += i)
            if (!f[j]) f[j] = static_cast<std::uint32_t>(i);
    }
    std::uint64_t count = 1;  // n = 1
    for (std::uint64_t n = 2; n <= x; ++n) {
        const std::uint32_t s = f[n];
        const std::uint64_t rest = n / s;
        f[n] = rest == 1 ? s : std::max(s, f[rest]);
        if (static_cast<double>(f[n]) <= y) ++count;
    }
    return count;
}

double dickman_rho(double u) {
    if (!(u >= 0.0 && u <= kRhoMaxU)) throw DomainError("dickman_rho: u outside [0, 20]");
    return rho_table().at(u);
}

SmoothLedger accumulate_S(const CycleScan& scan, Rational alpha, ThresholdMode mode) {
    check_alpha(alpha);
    if (scan.rows.empty()) throw DomainError("accumulate_S: empty scan");
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        if (scan.rows[i].status == RowStatus::bad_reduction)
            throw DomainError("accumulate_S: bad-reduction row at p = " + std::to_string(scan.rows[i].prime));
        if (i && scan.rows[i].prime <= scan.rows[i - 1].prime) throw DomainError("accumulate_S: rows not strictly ascending");
    }

    const auto& rows = scan.rows;
    const std::size_t n = rows.size();
    const std::uint64_t x_max = rows.back().prime;

    // entry[i]: first sample index at which row i counts (n = never).
    std::vector<std::size_t> entry(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].status != RowStatus::ok) continue;
        const std::uint64_t lpf = largest_prime_factor(rows[i].cycle);
        if (mode == ThresholdMode::fixed_top) {
            if (pow_leq(lpf, alpha.den, x_max, alpha.num)) entry[i] = i;
            continue;
        }
        // The predicate "lpf^den <= x^num" is monotone in x.
        std::size_t lo = i, hi = n;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (pow_leq(lpf, alpha.den, rows[mid].prime, alpha.num)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        entry[i] = lo;
    }

    std::vector<long double> added(n + 1, 0.0L);
    SmoothLedger ledger;
    ledger.alpha = alpha;
    ledger.mode = mode;
    ledger.x_max = x_max;
    for (std::size_t i = 0; i < n; ++i) {
        if (entry[i] >= n) continue;
        added[entry[i]] += std::log(static_cast<long double>(rows[i].prime));
        ledger.qualifying_primes.push_back(rows[i].prime);
    }
    long double acc = 0;
    ledger.samples.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        acc += added[j];
        ledger.samples.push_back({rows[j].prime, acc});
    }
    return ledger;
}

double predicted_logS(double x, Rational alpha, unsigned d1) {
    if (!(x > 0)) throw DomainError("predicted_logS: x must be positive");
    check_alpha(alpha);
    if (d1 == 0) throw DomainError("predicted_logS: d1 must be at least 1");
    const double u = static_cast<double>(d1) * static_cast<double>(alpha.den) / (2.0 * static_cast<double>(alpha.num));
    if (u > kRhoMaxU) throw DomainError("predicted_logS: u = d1/(2 alpha) above 20");
    return x * dickman_rho(u);
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("least_squares_slope: need at least two points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0) throw DomainError("least_squares_slope: degenerate x values");
    return sxy / sxx;
}

double upper_half_slope(const std::vector<LedgerSample>& samples) {
    if (samples.empty()) throw DomainError("upper_half_slope: no samples");
    const double half = static_cast<double>(samples.back().x) / 2.0;
    std::vector<double> xs, ys;
    for (const auto& s : samples) {
        if (static_cast<double>(s.x) < half) continue;
        xs.push_back(static_cast<double>(s.x));
        ys.push_back(static_cast<double>(s.log_S));
    }
    return least_squares_slope(xs, ys);
}

} // namespace dynobs
