#include "afrelay/fixtures.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace afrelay::mc {

namespace {

constexpr std::array<std::string_view, 7> kKnownKinds = {
    "outage_exact",    "outage_min2",     "outage_min3",     "outage_cutset",
    "mean_exact_relay", "mean_min2_relay", "mean_min3_relay"};

bool known_kind(std::string_view kind) {
    for (const std::string_view k : kKnownKinds)
        if (k == kind) return true;
    return false;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(std::string_view field, std::size_t line_no) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(out))
        throw fixture_error("fixture line " + std::to_string(line_no) +
                            ": bad numeric field '" + std::string(field) + "'");
    return out;
}

std::uint64_t parse_u64(std::string_view field, std::size_t line_no) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw fixture_error("fixture line " + std::to_string(line_no) +
                            ": bad integer field '" + std::string(field) + "'");
    return out;
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

}  // namespace

std::vector<FixtureRow> read_fixtures(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open fixture file " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kFixtureHeader)
        throw fixture_error("bad fixture header in " + path.string());
    std::vector<FixtureRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string_view> f = split_fields(line);
        if (f.size() != 10)
            throw fixture_error("fixture line " + std::to_string(line_no) +
                                ": expected 10 fields, got " + std::to_string(f.size()));
        FixtureRow row;
        row.kind = std::string(f[0]);
        if (!known_kind(row.kind))
            throw fixture_error("fixture line " + std::to_string(line_no) + ": unknown kind '" +
                                row.kind + "'");
        row.mu_sd = parse_double(f[1], line_no);
        row.mu_sr = parse_double(f[2], line_no);
        row.mu_rd = parse_double(f[3], line_no);
        row.snr = parse_double(f[4], line_no);
        row.mu_th = parse_double(f[5], line_no);
        row.n = parse_u64(f[6], line_no);
        row.seed = parse_u64(f[7], line_no);
        row.value = parse_double(f[8], line_no);
        row.std_error = parse_double(f[9], line_no);
        if (!(row.mu_sd > 0.0) || !(row.mu_sr > 0.0) || !(row.mu_rd > 0.0) || !(row.snr > 0.0) ||
            row.mu_th < 0.0 || row.n == 0 || row.value < 0.0 || row.std_error < 0.0)
            throw fixture_error("fixture line " + std::to_string(line_no) +
                                ": field out of range");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw fixture_error("fixture file " + path.string() + " has no rows");
    return rows;
}

void write_fixtures(const std::filesystem::path& path, std::span<const FixtureRow> rows) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    out << kFixtureHeader << '\n';
    for (const FixtureRow& r : rows) {
        out << r.kind << ',' << format_double(r.mu_sd) << ',' << format_double(r.mu_sr) << ','
            << format_double(r.mu_rd) << ',' << format_double(r.snr) << ','
            << format_double(r.mu_th) << ',' << r.n << ',' << r.seed << ','
            << format_double(r.value) << ',' << format_double(r.std_error) << '\n';
    }
    if (!out.flush()) throw std::ios_base::failure("failed writing " + path.string());
}

}  // namespace afrelay::mc
