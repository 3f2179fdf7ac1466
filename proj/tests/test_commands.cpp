#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "dynobs/commands.hpp"
#include "dynobs/error.hpp"
#include "dynobs/random.hpp"
#include "dynobs/scan.hpp"

using namespace dynobs;
namespace fs = std::filesystem;

namespace {

const fs::path kData = DYNOBS_TEST_DATA;

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::path(DYNOBS_TEST_TMP) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

CycleScanArgs p1_scan(const fs::path& cache, std::uint64_t bound, unsigned workers = 1) {
    CycleScanArgs a;
    a.map_file = kData / "p1_map.txt";
    a.point = "[1:1]";
    a.bound = bound;
    a.workers = workers;
    a.cache = cache;
    return a;
}

// Tag balance and a single root: enough to catch broken SVG output.
bool well_formed(const std::string& xml) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    int roots = 0;
    while ((pos = xml.find('<', pos)) != std::string::npos) {
        const std::size_t end = xml.find('>', pos);
        if (end == std::string::npos) return false;
        const std::string tag = xml.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag[0] == '!') continue;
        if (tag[0] == '/') {
            if (stack.empty() || stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        const std::string name = tag.substr(0, tag.find_first_of(" \n/"));
        if (stack.empty()) ++roots;
        if (tag.back() != '/') stack.push_back(name);
    }
    return stack.empty() && roots == 1;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

} // namespace

TEST_CASE("cycle-scan writes, resumes and rejects foreign caches") {
    const fs::path dir = fresh_dir("scan");
    std::ostringstream log;
    const fs::path cache = dir / "p1.csv";
    CHECK(cmd_cycle_scan(p1_scan(cache, 10), log) == kExitOk);
    const CycleScan s = read_scan(cache);
    REQUIRE(s.rows.size() == 4);
    CHECK(s.rows[1] == ScanRow{3, 1, 2, RowStatus::ok});
    CHECK(s.rows[3] == ScanRow{7, 1, 1, RowStatus::ok});
    CHECK(s.point == "1,1");
    CHECK(s.ambient == "projective 1");

    const std::string before = read_file(cache);
    CHECK(cmd_cycle_scan(p1_scan(cache, 10), log) == kExitOk);
    CHECK(read_file(cache) == before);
    CHECK(log.str().find("scanned 0 new primes (4 cached)") != std::string::npos);

    // Extending the bound appends; the result equals a fresh scan to the
    // same bound.
    CHECK(cmd_cycle_scan(p1_scan(cache, 500, 4), log) == kExitOk);
    const fs::path direct = dir / "direct.csv";
    CHECK(cmd_cycle_scan(p1_scan(direct, 500, 1), log) == kExitOk);
    CHECK(read_file(cache) == read_file(direct));

    // [2:2] is the same projective point as [1:1].
    CycleScanArgs scaled = p1_scan(cache, 500);
    scaled.point = "2:2";
    CHECK(cmd_cycle_scan(scaled, log) == kExitOk);
    CHECK(read_file(cache) == read_file(direct));

    CycleScanArgs other = p1_scan(cache, 10);
    other.point = "[2:1]";
    CHECK_THROWS_AS(cmd_cycle_scan(other, log), Error);
    CycleScanArgs other_map = p1_scan(cache, 10);
    other_map.map_file = kData / "translation_a1.txt";
    other_map.point = "1";
    CHECK_THROWS_AS(cmd_cycle_scan(other_map, log), Error);

    const fs::path empty = dir / "empty.csv";
    CHECK(cmd_cycle_scan(p1_scan(empty, 1), log) == kExitOk);
    CHECK(read_scan(empty).rows.empty());

    CycleScanArgs missing = p1_scan(dir / "x.csv", 10);
    missing.map_file = dir / "no_such_map.txt";
    CHECK_THROWS_AS(cmd_cycle_scan(missing, log), Error);
}

TEST_CASE("cycle-scan fills gaps below the cached range") {
    const fs::path dir = fresh_dir("gaps");
    std::ostringstream log;
    const fs::path cache = dir / "c.csv";
    CHECK(cmd_cycle_scan(p1_scan(cache, 100), log) == kExitOk);
    CycleScan s = read_scan(cache);
    s.rows.erase(s.rows.begin() + 3);
    write_scan(cache, s);
    CHECK(cmd_cycle_scan(p1_scan(cache, 100), log) == kExitOk);
    const fs::path direct = dir / "d.csv";
    CHECK(cmd_cycle_scan(p1_scan(direct, 100), log) == kExitOk);
    CHECK(read_file(cache) == read_file(direct));
}

TEST_CASE("cycle-scan output does not depend on workers") {
    const fs::path dir = fresh_dir("workers");
    std::ostringstream log;
    auto a = p1_scan(dir / "a.csv", 3000, 1);
    a.out = dir / "a_rows.csv";
    auto b = p1_scan(dir / "b.csv", 3000, 8);
    b.out = dir / "b_rows.csv";
    cmd_cycle_scan(a, log);
    cmd_cycle_scan(b, log);
    CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
    CHECK(read_file(*a.out) == read_file(*b.out));
    CHECK(read_file(*a.out).rfind("prime,tail,cycle,overrun\n2,", 0) == 0);
}

TEST_CASE("smooth-figure") {
    CycleScan ones;
    for (auto p : sieve_primes(2000)) ones.rows.push_back({p, 0, 1, RowStatus::ok});
    const SmoothFigureResult r = smooth_figure(ones, {1, 3}, 1, 1, ThresholdMode::running);
    std::istringstream is(r.csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,log_S,predicted");
    long double theta = 0;
    std::size_t i = 0;
    while (std::getline(is, line)) {
        theta += std::log(static_cast<long double>(ones.rows[i++].prime));
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == doctest::Approx(static_cast<double>(theta)).epsilon(1e-11));
    }
    CHECK(i == ones.rows.size());
    CHECK(r.predicted_slope == doctest::Approx(0.5945).epsilon(1e-4));
    CHECK(well_formed(r.svg));
    CHECK(count_of(r.svg, "<polyline") == 2);
    CHECK(r.svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
    CHECK(r.svg.find("fitted slope") != std::string::npos);

    const SmoothFigureResult strided = smooth_figure(ones, {1, 3}, 1, 10, ThresholdMode::running);
    const std::size_t n = ones.rows.size();
    CHECK(count_of(strided.csv, "\n") == 1 + (n + 9) / 10 + ((n - 1) % 10 != 0));
    CHECK_THROWS_AS(smooth_figure(ones, {1, 3}, 1, 0, ThresholdMode::running), DomainError);

    const fs::path dir = fresh_dir("figure");
    write_scan(dir / "ones.csv", ones);
    SmoothFigureArgs args;
    args.cache = dir / "ones.csv";
    args.out_prefix = (dir / "fig").string();
    std::ostringstream out;
    CHECK(cmd_smooth_figure(args, out) == kExitOk);
    CHECK(fs::exists(dir / "fig.csv"));
    CHECK(fs::exists(dir / "fig.svg"));
    write_scan(dir / "none.csv", CycleScan{});
    args.cache = dir / "none.csv";
    CHECK_THROWS_AS(cmd_smooth_figure(args, out), DomainError);
}

TEST_CASE("obstruct fixtures") {
    std::ostringstream out;
    ObstructArgs a;
    a.map_file = kData / "identity_a5.txt";
    a.variety_file = kData / "sphere_a5.txt";
    a.point = "1,1,1,1,1";
    a.bound = 100;
    CHECK(cmd_obstruct(a, out) == kExitOk);
    CHECK(out.str().rfind("outcome=found_prime m=3\n", 0) == 0);

    std::ostringstream t;
    ObstructArgs b;
    b.map_file = kData / "translation_a1.txt";
    b.variety_file = kData / "origin_a1.txt";
    b.point = "1";
    b.bound = 200;
    CHECK(cmd_obstruct(b, t) == kExitNotFound);
    CHECK(t.str().rfind("outcome=not_found m=none\n", 0) == 0);

    std::ostringstream ip;
    ObstructArgs c = a;
    c.point = "1801,1080,0,0,0";
    c.bound = 10;
    c.integral_points_file = kData / "sphere_a5_integral_points.txt";
    const fs::path dir = fresh_dir("obstruct");
    c.out = dir / "report.txt";
    CHECK(cmd_obstruct(c, ip) == kExitOk);
    CHECK(ip.str().rfind("outcome=found_by_integral_points m=7\n", 0) == 0);
    CHECK(read_file(*c.out) == ip.str());
    c.integral_points_file.reset();
    std::ostringstream plain;
    CHECK(cmd_obstruct(c, plain) == kExitNotFound);

    ObstructArgs mismatch = a;
    mismatch.point = "1,1";
    CHECK_THROWS_AS(cmd_obstruct(mismatch, out), DomainError);
}

TEST_CASE("experiment harness") {
    ExperimentOptions o;
    o.count = 1;
    o.bound = 60;
    o.seed = 5;
    const ExperimentSummary one = run_experiment(o);
    REQUIRE(one.rows.size() == 1);
    CHECK(run_experiment(o).rows_csv() == one.rows_csv());
    CHECK(one.rows[0].map_seed == derive_seed(5, 0));
    CHECK(one.rows[0].map_digest == random_map(5, 2, 10, derive_seed(5, 0)).digest());

    o.include_identity = true;
    const ExperimentSummary with_id = run_experiment(o);
    REQUIRE(with_id.rows.size() == 2);
    CHECK(with_id.rows[0].prime_power_m == 3u);
    CHECK(with_id.rows[0].any_m == 3u);
    CHECK(with_id.rows[0].map_seed == 0);
    CHECK(with_id.rows[1].map_digest == one.rows[0].map_digest);

    ExperimentOptions small;
    small.count = 6;
    small.seed = 11;
    small.workers = 3;
    small.bound = 20;
    const ExperimentSummary lo = run_experiment(small);
    small.bound = 120;
    const ExperimentSummary hi = run_experiment(small);
    CHECK(lo.fraction_any() <= hi.fraction_any());
    CHECK(lo.fraction_prime_power() <= hi.fraction_prime_power());
    CHECK(hi.fraction_prime_power() <= hi.fraction_any());
    small.workers = 1;
    CHECK(run_experiment(small).rows_csv() == hi.rows_csv());
    CHECK(hi.summary_csv().rfind("maps,bound,prime_power_found,any_found,integral_found,fraction_prime_power,fraction_any,unresolved\n6,120,", 0) == 0);

    ExperimentOptions zero;
    zero.count = 0;
    CHECK_THROWS_AS(run_experiment(zero), DomainError);

    const fs::path dir = fresh_dir("experiment");
    ExperimentArgs args;
    args.options = o;
    args.out = dir / "exp.csv";
    std::ostringstream out;
    CHECK(cmd_experiment(args, out) == kExitOk);
    CHECK(read_file(dir / "exp.csv") == with_id.rows_csv());
    CHECK(read_file(dir / "exp_summary.csv") == with_id.summary_csv());
}

TEST_CASE("heuristic command") {
    const fs::path dir = fresh_dir("heuristic");
    CycleScan ones;
    for (auto p : sieve_primes(1000)) ones.rows.push_back({p, 0, 1, RowStatus::ok});
    write_scan(dir / "ones.csv", ones);

    HeuristicArgs a;
    a.params.d1 = 2;
    a.params.d2 = 1;
    a.T_max = 1000;
    a.cache = dir / "ones.csv";
    a.exponent_out = dir / "exp.csv";
    std::ostringstream out;
    CHECK(cmd_heuristic(a, out) == kExitOk);
    CHECK(out.str().find("prob_empty_composite=1\n") != std::string::npos);
    CHECK(out.str().find("log_cycle_lcm=0\n") != std::string::npos);
    CHECK(out.str().find("warning: regime warning") != std::string::npos);
    CHECK(read_file(dir / "exp.csv").rfind("prime,exponent\n2,0\n", 0) == 0);

    HeuristicArgs model;
    model.params.d1 = 3;
    model.params.d2 = 2;
    model.T_max = 500;
    std::ostringstream m;
    CHECK(cmd_heuristic(model, m) == kExitOk);
    CHECK(m.str().find("orbit_lengths=model") != std::string::npos);
    CHECK(m.str().find("warning") == std::string::npos);
    CHECK(m.str().find("o(1)") != std::string::npos);

    HeuristicArgs bad = model;
    bad.params.d2 = 3;
    CHECK_THROWS_AS(cmd_heuristic(bad, m), DomainError);
}

TEST_CASE("baseline and dickman commands") {
    BaselineArgs b;
    b.n = 1000;
    b.trials = 20;
    b.seed = 3;
    std::ostringstream one, many;
    cmd_baseline(b, one);
    b.workers = 4;
    cmd_baseline(b, many);
    CHECK(one.str() == many.str());
    CHECK(one.str().rfind("N,trials,seed,mean_tail", 0) == 0);

    std::ostringstream d;
    cmd_dickman({2.0, 3.0}, d);
    CHECK(d.str() == "u,rho\n2,0.30685281944\n3,0.0486083882911\n");
    CHECK_THROWS_AS(cmd_dickman({25.0}, d), DomainError);
}

TEST_CASE("point lists") {
    const auto pts = parse_point_list("# header\n1,0\n\n  -1, 0  # comment\n");
    REQUIRE(pts.size() == 2);
    CHECK(pts[1] == IntPoint{-1, 0});
    CHECK(fmt_real(0.1) == "0.1");
    CHECK(fmt_real(1.0 / 3.0) == "0.333333333333");
}
