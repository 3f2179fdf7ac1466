// dynobs: orbit scans, smooth-number figures and obstruction searches for
// integer polynomial maps.

#include <iostream>

#include <CLI11.hpp>

#include "dynobs/commands.hpp"
#include "dynobs/error.hpp"

using namespace dynobs;

namespace {

Rational parse_alpha(const std::string& s) { return Rational::parse(s); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orbit, smoothness and obstruction toolkit for integer polynomial maps"};
    app.require_subcommand(1);

    std::string alpha_text = "1/3";
    int rc = kExitOk;

    // cycle-scan
    CycleScanArgs scan_args;
    scan_args.workers = default_workers();
    auto* scan = app.add_subcommand("cycle-scan", "tail and cycle length of the orbit modulo every prime up to --bound");
    scan->add_option("--map-file", scan_args.map_file, "map text file")->required()->check(CLI::ExistingFile);
    scan->add_option("--point", scan_args.point, "start point, e.g. 1,1 or [1:1]")->required();
    scan->add_option("--bound", scan_args.bound, "largest prime to scan")->required();
    scan->add_option("--budget", scan_args.budget, "map applications per prime before the row is marked overrun")->capture_default_str();
    scan->add_option("--workers", scan_args.workers, "worker threads")->capture_default_str();
    scan->add_option("--cache", scan_args.cache, "resumable scan cache (created if missing)")->required();
    scan->add_option("--out", scan_args.out, "also write the rows as CSV");

    // smooth-figure
    SmoothFigureArgs fig_args;
    auto* fig = app.add_subcommand("smooth-figure", "log S(x) against x rho(u) as CSV and SVG");
    fig->add_option("--cache", fig_args.cache, "scan cache")->required()->check(CLI::ExistingFile);
    fig->add_option("--alpha", alpha_text, "smoothness exponent, e.g. 1/3")->capture_default_str();
    fig->add_option("--d1", fig_args.d1, "dimension of the ambient space")->capture_default_str();
    fig->add_option("--out", fig_args.out_prefix, "output prefix: writes <out>.csv and <out>.svg")->required();
    fig->add_option("--stride", fig_args.stride, "keep every stride-th sample")->capture_default_str();
    fig->add_flag("--fixed-top", fig_args.fixed_top, "use x_max^alpha at every sample instead of the running x^alpha");

    // obstruct
    ObstructArgs obs_args;
    std::string strategy_text = "all";
    auto* obs = app.add_subcommand("obstruct", "search for a modulus whose orbit misses V");
    obs->add_option("--map-file", obs_args.map_file, "map text file")->required()->check(CLI::ExistingFile);
    obs->add_option("--variety-file", obs_args.variety_file, "variety text file")->required()->check(CLI::ExistingFile);
    obs->add_option("--point", obs_args.point, "start point")->required();
    obs->add_option("--bound", obs_args.bound, "largest modulus to try")->capture_default_str();
    obs->add_option("--strategy", strategy_text, "primes | prime_powers | all | squarefree")->capture_default_str();
    obs->add_option("--integral-points", obs_args.integral_points_file, "known integral points of V, one per line")
        ->check(CLI::ExistingFile);
    obs->add_option("--budget", obs_args.search.budget, "map applications per modulus")->capture_default_str();
    obs->add_option("--verify-budget", obs_args.search.verify_budget, "stored points for the hashed re-check")->capture_default_str();
    obs->add_flag("--cycle-only", obs_args.search.cycle_only, "test only the periodic part of the orbit");
    obs->add_option("--out", obs_args.out, "also write the report here");

    // experiment
    ExperimentArgs exp_args;
    exp_args.options.workers = default_workers();
    std::string exp_point;
    auto* exp = app.add_subcommand("experiment", "obstruction search over seeded random maps of A^n against the unit sphere");
    exp->add_option("--n", exp_args.options.n, "dimension")->capture_default_str();
    exp->add_option("--degree", exp_args.options.degree, "map degree")->capture_default_str();
    exp->add_option("--coeff-bound", exp_args.options.coeff_bound, "coefficients drawn from [-B, B]")->capture_default_str();
    exp->add_option("--count", exp_args.options.count, "number of random maps")->capture_default_str();
    exp->add_option("--bound", exp_args.options.bound, "largest modulus to try")->capture_default_str();
    exp->add_option("--seed", exp_args.options.seed, "generator seed")->capture_default_str();
    exp->add_option("--workers", exp_args.options.workers, "worker threads")->capture_default_str();
    exp->add_option("--point", exp_point, "start point (default all ones)");
    exp->add_option("--budget", exp_args.options.search.budget, "map applications per modulus")->capture_default_str();
    exp->add_flag("--include-identity", exp_args.options.include_identity, "prepend the identity map as row 0");
    exp->add_option("--out", exp_args.out, "per-map CSV; the aggregate goes to <stem>_summary.csv");

    // heuristic
    HeuristicArgs heu_args;
    auto* heu = app.add_subcommand("heuristic", "probability model calculators");
    heu->add_option("--d1", heu_args.params.d1, "dim X")->capture_default_str();
    heu->add_option("--d2", heu_args.params.d2, "dim V")->capture_default_str();
    heu->add_option("--alpha", alpha_text, "smoothness exponent")->capture_default_str();
    heu->add_option("--T", heu_args.params.T, "prime threshold")->capture_default_str();
    heu->add_option("--T-max", heu_args.T_max, "truncation point of the product")->capture_default_str();
    heu->add_option("--cache", heu_args.cache, "scan cache with measured orbit lengths")->check(CLI::ExistingFile);
    heu->add_option("--exponent-out", heu_args.exponent_out, "write per-prime log rho / log p (needs --cache)");

    // baseline
    BaselineArgs base_args;
    base_args.workers = default_workers();
    auto* base = app.add_subcommand("baseline", "mean rho length of uniform random self-maps of {0..N-1}");
    base->add_option("--N", base_args.n, "set size")->capture_default_str();
    base->add_option("--trials", base_args.trials, "number of random maps")->capture_default_str();
    base->add_option("--seed", base_args.seed, "generator seed")->capture_default_str();
    base->add_option("--workers", base_args.workers, "worker threads")->capture_default_str();
    base->add_option("--out", base_args.out, "also write the CSV here");

    // dickman
    std::vector<double> us;
    auto* dick = app.add_subcommand("dickman", "print Dickman's rho");
    dick->add_option("--u,u", us, "arguments in [0, 20]")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*scan) {
            rc = cmd_cycle_scan(scan_args, std::cerr);
        } else if (*fig) {
            fig_args.alpha = parse_alpha(alpha_text);
            rc = cmd_smooth_figure(fig_args, std::cout);
        } else if (*obs) {
            obs_args.strategy = parse_strategy(strategy_text);
            rc = cmd_obstruct(obs_args, std::cout);
        } else if (*exp) {
            if (!exp_point.empty()) exp_args.options.point = parse_point(exp_point);
            rc = cmd_experiment(exp_args, std::cout);
        } else if (*heu) {
            heu_args.params.alpha = parse_alpha(alpha_text);
            rc = cmd_heuristic(heu_args, std::cout);
        } else if (*base) {
            rc = cmd_baseline(base_args, std::cout);
        } else if (*dick) {
            rc = cmd_dickman(us, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return rc;
}
