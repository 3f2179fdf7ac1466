#include "dynobs/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "dynobs/error.hpp"
#include "dynobs/scan.hpp"
#include "dynobs/svg.hpp"

namespace dynobs {

namespace fs = std::filesystem;

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

std::vector<IntPoint> parse_point_list(std::string_view text) {
    std::vector<IntPoint> out;
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_point(line));
    }
    return out;
}

namespace {

// Canonical start point text: projective points are scaled to primitive.
IntPoint start_point(const PolyMap& phi, const std::string& text) {
    IntPoint P = parse_point(text);
    if (P.size() != phi.ambient().num_vars())
        throw DomainError("point " + text + " has " + std::to_string(P.size()) + " coordinates, map needs " +
                          std::to_string(phi.ambient().num_vars()));
    return phi.ambient().is_projective() ? primitive(P) : P;
}

fs::path with_suffix(const std::string& prefix, const char* suffix) { return fs::path(prefix + suffix); }

} // namespace

// ---- cycle-scan ------------------------------------------------------------

int cmd_cycle_scan(const CycleScanArgs& args, std::ostream& log) {
    const PolyMap phi = parse_map(read_file(args.map_file));
    const IntPoint P = start_point(phi, args.point);

    CycleScan scan;
    scan.map_digest = phi.digest();
    scan.point = format_point(P);
    scan.ambient = phi.ambient().to_string();

    const bool have_cache = fs::exists(args.cache);
    if (have_cache) {
        const CycleScan cached = read_scan(args.cache);
        if (cached.map_digest != scan.map_digest || cached.point != scan.point || cached.ambient != scan.ambient)
            throw Error("cache " + args.cache.string() + " belongs to another map or point (digest " + format_digest(cached.map_digest) +
                        ", point " + cached.point + "); refusing to reuse it");
        scan.rows = cached.rows;
    }

    std::vector<std::uint64_t> todo;
    {
        std::size_t j = 0;
        for (const std::uint64_t p : sieve_primes(args.bound)) {
            while (j < scan.rows.size() && scan.rows[j].prime < p) ++j;
            if (j < scan.rows.size() && scan.rows[j].prime == p) continue;
            todo.push_back(p);
        }
    }
    const std::uint64_t cached_max = scan.rows.empty() ? 0 : scan.rows.back().prime;
    const std::vector<ScanRow> fresh = scan_primes(phi, P, todo, args.budget, args.workers);

    const bool append_only = have_cache && (todo.empty() || todo.front() > cached_max);
    if (!have_cache) {
        scan.rows = fresh;
        write_scan(args.cache, scan);
    } else if (append_only) {
        if (!fresh.empty()) append_scan_rows(args.cache, fresh);
        scan.rows.insert(scan.rows.end(), fresh.begin(), fresh.end());
    } else {
        scan.rows.insert(scan.rows.end(), fresh.begin(), fresh.end());
        std::sort(scan.rows.begin(), scan.rows.end(), [](const ScanRow& a, const ScanRow& b) { return a.prime < b.prime; });
        write_scan(args.cache, scan);
    }

    std::uint64_t overruns = 0, bad = 0;
    for (const auto& r : fresh) {
        overruns += r.status == RowStatus::overrun;
        bad += r.status == RowStatus::bad_reduction;
    }
    log << "scanned " << fresh.size() << " new primes (" << scan.rows.size() - fresh.size() << " cached); overrun " << overruns
        << ", bad reduction " << bad << "\n";

    if (args.out) {
        CycleScan upto = scan;
        upto.rows.erase(std::remove_if(upto.rows.begin(), upto.rows.end(), [&](const ScanRow& r) { return r.prime > args.bound; }),
                        upto.rows.end());
        write_file(*args.out, scan_rows_csv(upto));
    }
    return kExitOk;
}

// ---- smooth-figure ---------------------------------------------------------

SmoothFigureResult smooth_figure(const CycleScan& scan, Rational alpha, unsigned d1, std::uint64_t stride, ThresholdMode mode) {
    if (stride == 0) throw DomainError("stride must be at least 1");
    if (d1 == 0) throw DomainError("d1 must be at least 1");
    const SmoothLedger ledger = accumulate_S(scan, alpha, mode);
    const double u = static_cast<double>(d1) / (2.0 * alpha.value());

    SmoothFigureResult res;
    res.predicted_slope = dickman_rho(u);
    res.fitted_slope = ledger.samples.size() >= 2 ? upper_half_slope(ledger.samples) : std::nan("");

    ChartSeries observed{"log S(x)", "#1f77b4", {}, {}};
    ChartSeries predicted{"x rho(u), u = " + fmt_real(u), "#d62728", {}, {}};
    res.csv = "x,log_S,predicted\n";
    const std::size_t n = ledger.samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i % stride != 0 && i + 1 != n) continue;
        const auto& s = ledger.samples[i];
        const double x = static_cast<double>(s.x);
        const double ls = static_cast<double>(s.log_S);
        const double pr = predicted_logS(x, alpha, d1);
        res.csv += std::to_string(s.x) + "," + fmt_real(ls) + "," + fmt_real(pr) + "\n";
        observed.xs.push_back(x);
        observed.ys.push_back(ls);
        predicted.xs.push_back(x);
        predicted.ys.push_back(pr);
    }

    LineChart chart;
    chart.title = "log S(x) against x rho(u), alpha = " + alpha.to_string() + (mode == ThresholdMode::fixed_top ? " (fixed top)" : "");
    chart.x_label = "x";
    chart.y_label = "log S(x)";
    chart.series = {observed, predicted};
    chart.notes.push_back("fitted slope (upper half) = " + fmt_real(res.fitted_slope));
    chart.notes.push_back("predicted slope rho(u) = " + fmt_real(res.predicted_slope));
    res.svg = render_svg(chart);
    return res;
}

int cmd_smooth_figure(const SmoothFigureArgs& args, std::ostream& log) {
    const CycleScan scan = read_scan(args.cache);
    if (scan.rows.empty()) throw DomainError("cache " + args.cache.string() + " has no rows");
    const SmoothFigureResult res =
        smooth_figure(scan, args.alpha, args.d1, args.stride, args.fixed_top ? ThresholdMode::fixed_top : ThresholdMode::running);
    write_file(with_suffix(args.out_prefix, ".csv"), res.csv);
    write_file(with_suffix(args.out_prefix, ".svg"), res.svg);
    log << "fitted_slope=" << fmt_real(res.fitted_slope) << "\npredicted_slope=" << fmt_real(res.predicted_slope) << "\n";
    return kExitOk;
}

// ---- obstruct --------------------------------------------------------------

ObstructionReport run_obstruct(const PolyMap& phi, const IntPoint& P, const Subvariety& v, std::uint64_t bound, Strategy strategy,
                               const std::vector<IntPoint>* integral_points, const SearchOptions& options) {
    ObstructionReport report = search_modulus(phi, P, v, bound, strategy, options);
    if (report.outcome != Outcome::not_found || integral_points == nullptr) return report;
    for (const std::uint64_t p : sieve_primes(bound)) {
        try {
            if (integral_point_trick(phi, P, *integral_points, v, p, options)) {
                report.outcome = Outcome::found_by_integral_points;
                report.modulus = factorize(p);
                report.shape.reset();
                break;
            }
        } catch (const BudgetExceeded&) {
        } catch (const BadReduction&) {
        }
    }
    return report;
}

int cmd_obstruct(const ObstructArgs& args, std::ostream& out) {
    const PolyMap phi = parse_map(read_file(args.map_file));
    const Subvariety v = parse_variety(read_file(args.variety_file));
    const IntPoint P = start_point(phi, args.point);
    std::optional<std::vector<IntPoint>> points;
    if (args.integral_points_file) points = parse_point_list(read_file(*args.integral_points_file));
    const ObstructionReport report = run_obstruct(phi, P, v, args.bound, args.strategy, points ? &*points : nullptr, args.search);
    const std::string text = report.to_text();
    out << text;
    if (args.out) write_file(*args.out, text);
    return is_found(report.outcome) ? kExitOk : kExitNotFound;
}

// ---- experiment ------------------------------------------------------------

int cmd_experiment(const ExperimentArgs& args, std::ostream& out) {
    const ExperimentSummary summary = run_experiment(args.options);
    if (args.out) {
        write_file(*args.out, summary.rows_csv());
        fs::path sum = *args.out;
        sum.replace_filename(args.out->stem().string() + "_summary.csv");
        write_file(sum, summary.summary_csv());
    }
    out << summary.summary_csv();
    return kExitOk;
}

// ---- heuristic -------------------------------------------------------------

int cmd_heuristic(const HeuristicArgs& args, std::ostream& out) {
    const HeuristicParams& hp = args.params;
    hp.validate();
    std::optional<CycleScan> scan;
    if (args.cache) scan = read_scan(*args.cache);

    out << "d1=" << hp.d1 << " d2=" << hp.d2 << " alpha=" << hp.alpha.to_string() << " T=" << hp.T << " T_max=" << args.T_max << "\n";
    const LargePrimeHit hit = prob_all_large_primes_hit(hp.T, args.T_max, hp, scan ? &*scan : nullptr);
    out << "orbit_lengths=" << (hit.model_lengths ? "model |O_p| = p^(d1/2) (no cache given)" : "measured tail+cycle from cache") << "\n";
    if (!hit.warning.empty()) out << "warning: " << hit.warning << "\n";
    out << "prob_all_large_primes_hit=" << fmt_real(hit.probability) << "\n";
    out << "log_prob_all_large_primes_hit=" << fmt_real(hit.log_probability) << "\n";
    out << "primes_used=" << hit.primes_used << "\n";
    out << "remainder_estimate=" << fmt_real(hit.remainder_estimate) << "\n";

    if (scan) {
        const SmoothModulus sm = build_smooth_modulus(*scan, args.T_max, hp.alpha);
        const long double log_lcm = sm.cycle_lcm.log();
        out << "smooth_modulus_primes=" << sm.primes.size() << "\n";
        out << "log_m=" << fmt_real(static_cast<double>(sm.log_m)) << "\n";
        out << "log_cycle_lcm=" << fmt_real(static_cast<double>(log_lcm)) << "\n";
        out << "prob_empty_composite=" << fmt_real(prob_empty_composite(sm.log_m, log_lcm, hp)) << "\n";
        if (args.exponent_out) {
            const ExponentFit fit = orbit_exponent_fit(*scan);
            std::string csv = "prime,exponent\n";
            for (const auto& [p, e] : fit.per_prime) csv += std::to_string(p) + "," + fmt_real(e) + "\n";
            write_file(*args.exponent_out, csv);
            out << "mean_orbit_exponent=" << fmt_real(fit.mean_exponent) << "\n";
        }
    } else {
        out << "smooth_modulus: skipped (needs --cache)\n";
    }
    out << "note: o(1) terms of the model are dropped\n";
    return kExitOk;
}

// ---- baseline, dickman -----------------------------------------------------

int cmd_baseline(const BaselineArgs& args, std::ostream& out) {
    const BaselineStats s = random_endofunction_baseline(args.n, args.trials, args.seed, args.workers);
    const std::string csv = "N,trials,seed,mean_tail,mean_cycle,mean_rho,rho_over_sqrt_N,sqrt_pi_over_2\n" + std::to_string(s.n) + "," +
                            std::to_string(s.trials) + "," + std::to_string(args.seed) + "," + fmt_real(s.mean_tail) + "," +
                            fmt_real(s.mean_cycle) + "," + fmt_real(s.mean_rho) + "," + fmt_real(s.rho_over_sqrt_n) + "," +
                            fmt_real(std::sqrt(std::acos(-1.0) / 2.0)) + "\n";
    out << csv;
    if (args.out) write_file(*args.out, csv);
    return kExitOk;
}

int cmd_dickman(const std::vector<double>& us, std::ostream& out) {
    out << "u,rho\n";
    for (const double u : us) out << fmt_real(u) << "," << fmt_real(dickman_rho(u)) << "\n";
    return kExitOk;
}

} // namespace dynobs
