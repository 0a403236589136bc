#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace afrelay::mc {

/// One archived Monte Carlo reference result. `kind` is one of
/// outage_{exact,min2,min3,cutset} or mean_{exact,min2,min3}_relay;
/// mu_th is 0 for mean kinds.
struct FixtureRow {
    std::string kind;
    double mu_sd;
    double mu_sr;
    double mu_rd;
    double snr;
    double mu_th;
    std::uint64_t n;
    std::uint64_t seed;
    double value;
    double std_error;
};

inline constexpr std::string_view kFixtureHeader =
    "kind,mu_sd,mu_sr,mu_rd,snr,mu_th,n,seed,value,std_error";

/// Raised on any malformed fixture content (bad header, field count, parse
/// failure, unknown kind, out-of-range value).
class fixture_error : public std::runtime_error {
public:
    explicit fixture_error(const std::string& what) : std::runtime_error(what) {}
};

/// Parses a fixture CSV. Throws std::ios_base::failure if the file cannot be
/// opened and fixture_error if its content fails the integrity checks.
std::vector<FixtureRow> read_fixtures(const std::filesystem::path& path);

void write_fixtures(const std::filesystem::path& path, std::span<const FixtureRow> rows);

}  // namespace afrelay::mc
