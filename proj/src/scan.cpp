#include "dynobs/scan.hpp"

#include <algorithm>
#include <cinttypes>
#include <fstream>
#include <sstream>

#include "dynobs/error.hpp"
#include "dynobs/parallel.hpp"

namespace dynobs {

namespace {

ScanRow scan_one(const PolyMap& map, const IntPoint& point, std::uint64_t p, std::uint64_t budget) {
    ScanRow row;
    row.prime = p;
    try {
        const Modulus q(p);
        const ResiduePoint start = ResiduePoint::from_integers(point, map.ambient(), q);
        const ReducedMap rm(map, q);
        const CycleShape shape = brent_shape(start.coords(), rm, budget);
        row.tail = shape.tail;
        row.cycle = shape.cycle;
    } catch (const BadReduction&) {
        row.status = RowStatus::bad_reduction;
    } catch (const BudgetExceeded&) {
        row.status = RowStatus::overrun;
    }
    return row;
}

std::string row_line(const ScanRow& r) {
    switch (r.status) {
    case RowStatus::ok:
        return std::to_string(r.prime) + "," + std::to_string(r.tail) + "," + std::to_string(r.cycle) + ",0";
    case RowStatus::overrun:
        return std::to_string(r.prime) + ",,,1";
    case RowStatus::bad_reduction:
        return std::to_string(r.prime) + ",,,bad";
    }
    return {};
}

std::uint64_t parse_u64(const std::string& s, const std::string& line) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError("scan cache: bad number in row '" + line + "'");
    return std::stoull(s);
}

ScanRow parse_row(const std::string& line) {
    std::vector<std::string> f;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 4) throw ParseError("scan cache: expected 4 fields in row '" + line + "'");
    ScanRow r;
    r.prime = parse_u64(f[0], line);
    if (f[3] == "0") {
        r.tail = parse_u64(f[1], line);
        r.cycle = parse_u64(f[2], line);
        if (r.cycle == 0) throw ParseError("scan cache: zero cycle in row '" + line + "'");
    } else if (f[3] == "1") {
        r.status = RowStatus::overrun;
    } else if (f[3] == "bad") {
        r.status = RowStatus::bad_reduction;
    } else {
        throw ParseError("scan cache: bad overrun field in row '" + line + "'");
    }
    return r;
}

} // namespace

std::vector<ScanRow> scan_primes(const PolyMap& map, const IntPoint& point, std::span<const std::uint64_t> primes,
                                 std::uint64_t budget, unsigned workers) {
    std::vector<ScanRow> rows(primes.size());
    parallel_for(primes.size(), workers, [&](std::size_t i) { rows[i] = scan_one(map, point, primes[i], budget); });
    return rows;
}

std::string format_digest(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, digest);
    return buf;
}

std::string scan_to_text(const CycleScan& scan) {
    std::string s = std::string("# ") + kScanFormat + "\n";
    s += "# map_digest=" + format_digest(scan.map_digest) + "\n";
    s += "# point=" + scan.point + "\n";
    s += "# ambient=" + scan.ambient + "\n";
    s += scan_rows_csv(scan);
    return s;
}

std::string scan_rows_csv(const CycleScan& scan) {
    std::string s = "prime,tail,cycle,overrun\n";
    for (const auto& r : scan.rows) s += row_line(r) + "\n";
    return s;
}

CycleScan scan_from_text(std::string_view text) {
    CycleScan scan;
    std::istringstream is{std::string(text)};
    std::string line;
    bool saw_format = false, saw_columns = false, saw_digest = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = line.substr(line.find_first_not_of("# "));
            if (body == kScanFormat) {
                saw_format = true;
            } else if (body.rfind("map_digest=", 0) == 0) {
                scan.map_digest = std::stoull(body.substr(11), nullptr, 16);
                saw_digest = true;
            } else if (body.rfind("point=", 0) == 0) {
                scan.point = body.substr(6);
            } else if (body.rfind("ambient=", 0) == 0) {
                scan.ambient = body.substr(8);
            }
            continue;
        }
        if (line == "prime,tail,cycle,overrun") {
            saw_columns = true;
            continue;
        }
        if (!saw_columns) throw ParseError("scan cache: data before column header");
        scan.rows.push_back(parse_row(line));
    }
    if (!saw_format || !saw_digest) throw ParseError("scan cache: missing '# " + std::string(kScanFormat) + "' header block");
    std::sort(scan.rows.begin(), scan.rows.end(), [](const ScanRow& a, const ScanRow& b) { return a.prime < b.prime; });
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        if (scan.rows[i].prime == scan.rows[i - 1].prime)
            throw ParseError("scan cache: duplicate prime " + std::to_string(scan.rows[i].prime));
    return scan;
}

CycleScan read_scan(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read scan cache " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return scan_from_text(ss.str());
}

void write_scan(const std::filesystem::path& path, const CycleScan& scan) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write scan cache " + path.string());
    out << scan_to_text(scan);
}

void append_scan_rows(const std::filesystem::path& path, std::span<const ScanRow> rows) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot append to scan cache " + path.string());
    for (const auto& r : rows) out << row_line(r) << '\n';
}

} // namespace dynobs
