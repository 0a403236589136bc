#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "afrelay/distributions.hpp"
#include "afrelay/montecarlo.hpp"
#include "support/test_util.hpp"

using namespace afrelay::dist;
using afrelay::mc::CounterStream;
using afrelay_test::log_spaced;
using afrelay_test::quantile_grid;

namespace {

// Numeric convolution oracle for the sum of two exponentials: composite
// 10-point Gauss-Legendre over segments no wider than the smaller mean,
// evaluated straight from std::exp (independent of the library code).
double conv_sum2_cdf_oracle(double s, double a, double b) {
    if (s <= 0.0) return 0.0;
    static constexpr std::array<double, 5> kNodes = {
        0.148874338981631210884826001130, 0.433395394129247190799265943166,
        0.679409568299024406234327365115, 0.865063366688984510732096688423,
        0.973906528517171720077964012084};
    static constexpr std::array<double, 5> kWeights = {
        0.295524224714752870173892994651, 0.269266719309996355091226921569,
        0.219086362515982043995534934228, 0.149451349150580593145776339657,
        0.066671344308688137593568809893};
    const int segments = static_cast<int>(std::ceil(s / std::min({a, b, s})));
    const double h = s / segments;
    long double total = 0.0L;
    for (int seg = 0; seg < segments; ++seg) {
        const double lo = seg * h;
        const double mid = lo + 0.5 * h;
        for (int j = 0; j < 5; ++j) {
            for (const double sign : {-1.0, 1.0}) {
                const double x = mid + sign * 0.5 * h * kNodes[j];
                const double f = (1.0 / a) * std::exp(-x / a) * (1.0 - std::exp(-(s - x) / b));
                total += 0.5 * h * kWeights[j] * f;
            }
        }
    }
    return static_cast<double>(total);
}

}  // namespace

TEST_SUITE_BEGIN("distributions");

TEST_CASE("exp_pdf examples and normalization behavior") {
    CHECK(exp_pdf(0.0, {2.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(exp_pdf(1.0, {1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(exp_pdf(5.0, {1.0}) == doctest::Approx(std::exp(-5.0)).epsilon(1e-15));
    CHECK_THROWS_AS(exp_pdf(-0.1, {1.0}), std::domain_error);
    CHECK_THROWS_AS(exp_pdf(1.0, {0.0}), std::domain_error);
    CHECK_THROWS_AS(exp_pdf(1.0, {-2.0}), std::domain_error);
}

TEST_CASE("exp_pdf integrates to 1") {
    const double mean = 1.7;
    const double upper = 60.0 * mean;
    constexpr int kSteps = 200000;
    const double h = upper / kSteps;
    long double sum = exp_pdf(0.0, {mean}) + exp_pdf(upper, {mean});
    for (int i = 1; i < kSteps; ++i) sum += (i % 2 == 1 ? 4.0L : 2.0L) * exp_pdf(i * h, {mean});
    CHECK(static_cast<double>(sum * h / 3.0L) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("exp_cdf examples and small-argument accuracy") {
    CHECK(exp_cdf(0.0, {1.0}) == 0.0);
    CHECK(exp_cdf(1.0, {1.0}) == doctest::Approx(0.63212055882855768).epsilon(1e-14));
    // A2 slope down at u = 1e-9: stable primitive keeps full precision.
    CHECK(exp_cdf(1e-9, {1.0}) == doctest::Approx(1e-9 - 0.5e-18).epsilon(1e-12));
    CHECK_THROWS_AS(exp_cdf(-1.0, {1.0}), std::domain_error);
}

TEST_CASE("sum2_exp_cdf examples") {
    CHECK(sum2_exp_cdf(0.0, {1.0}, {2.0}) == 0.0);
    CHECK(sum2_exp_cdf(1.0, {1.0}, {2.0}) ==
          doctest::Approx(0.15481812174617547).epsilon(1e-13));
    // Equal means: Gamma(2) limit form 1 - 2 e^{-1}.
    CHECK(sum2_exp_cdf(1.0, {1.0}, {1.0}) ==
          doctest::Approx(0.26424111765711536).epsilon(1e-13));
    CHECK(sum2_exp_cdf(1.0, {0.5}, {1.0}) ==
          doctest::Approx(0.39957640089372805).epsilon(1e-13));
    CHECK_THROWS_AS(sum2_exp_cdf(-1.0, {1.0}, {2.0}), std::domain_error);
}

TEST_CASE("sum2_exp_cdf agrees with the numeric convolution oracle") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> pick(0.1, 10.0);
    for (int pair = 0; pair < 10; ++pair) {
        const double a = pick(rng);
        const double b = pick(rng);
        for (int i = 1; i <= 100; ++i) {
            const double s = 5.0 * (a + b) * i / 100.0;
            const double want = conv_sum2_cdf_oracle(s, a, b);
            CHECK(std::abs(sum2_exp_cdf(s, {a}, {b}) - want) <= 1e-8);
        }
    }
}

TEST_CASE("sum2_exp_cdf equal-mean branch joins the general form continuously") {
    // Straddle the 1e-6 switch threshold with nearly identical means: the
    // general form keeps ~10 good digits there and the limit form's model
    // error is O(separation^2), so any visible jump would be a branch bug.
    const double base = 1.7;
    const double s = 2.0;
    const double general = sum2_exp_cdf(s, {base}, {base * (1.0 + 1.001e-6)});
    const double limit = sum2_exp_cdf(s, {base}, {base * (1.0 + 0.999e-6)});
    CHECK(std::abs(general - limit) <= 1e-8);
}

TEST_CASE("min2_exp_mean harmonic combination") {
    CHECK(min2_exp_mean({2.0}, {2.0}).mean == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(min2_exp_mean({1.0}, {1e12}).mean == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(min2_exp_mean({0.5}, {0.5}).mean == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("min2_exp_cdf examples") {
    CHECK(min2_exp_cdf(0.0, {1.0}, {2.0}) == 0.0);
    const double m = min2_exp_mean({1.0}, {2.0}).mean;
    CHECK(min2_exp_cdf(m, {1.0}, {2.0}) == doctest::Approx(0.63212055882855768).epsilon(1e-14));
    CHECK(min2_exp_cdf(1.0, {1.0}, {2.0}) == doctest::Approx(0.77686983985157017).epsilon(1e-14));
    CHECK_THROWS_AS(min2_exp_cdf(-1.0, {1.0}, {2.0}), std::domain_error);
}

TEST_CASE("prod_exp_pdf examples and p = 0 rejection") {
    // 2 K0(1) and 2 K0(2): the factor 2 makes the density integrate to 1 and
    // match the derivative of prod_exp_cdf.
    CHECK(prod_exp_pdf(0.25, {1.0}, {1.0}) ==
          doctest::Approx(0.84204887648141667).epsilon(1e-13));
    CHECK(prod_exp_pdf(1.0, {1.0}, {1.0}) ==
          doctest::Approx(0.22778774549906688).epsilon(1e-13));
    CHECK_THROWS_AS(prod_exp_pdf(0.0, {1.0}, {1.0}), std::domain_error);
    CHECK_THROWS_AS(prod_exp_pdf(-1.0, {1.0}, {1.0}), std::domain_error);
}

TEST_CASE("prod_exp_pdf is the derivative of prod_exp_cdf") {
    const double a = 0.9;
    const double b = 2.3;
    for (const double y : {0.05, 0.3, 1.0, 3.0}) {
        const double h = 1e-6 * y;
        const double slope =
            (prod_exp_cdf(y + h, {a}, {b}) - prod_exp_cdf(y - h, {a}, {b})) / (2.0 * h);
        CHECK(prod_exp_pdf(y, {a}, {b}) == doctest::Approx(slope).epsilon(1e-6));
    }
}

TEST_CASE("prod_exp_cdf examples") {
    CHECK(prod_exp_cdf(0.0, {1.0}, {1.0}) == 0.0);
    CHECK(prod_exp_cdf(0.25, {1.0}, {1.0}) ==
          doctest::Approx(0.39809276980276543).epsilon(1e-13));
    CHECK(prod_exp_cdf(4.0, {1.0}, {1.0}) ==
          doctest::Approx(0.95006600445092627).epsilon(1e-13));
    CHECK_THROWS_AS(prod_exp_cdf(-1.0, {1.0}, {1.0}), std::domain_error);
}

TEST_CASE("every cdf maps 0 to 0, is nondecreasing and reaches its tail") {
    struct Case {
        const char* name;
        std::function<double(double)> cdf;
        double largest_mean;
    };
    const std::vector<Case> cases = {
        {"exp", [](double x) { return exp_cdf(x, {1.3}); }, 1.3},
        {"sum2", [](double x) { return sum2_exp_cdf(x, {0.7}, {2.1}); }, 2.1},
        {"min2", [](double x) { return min2_exp_cdf(x, {0.7}, {2.1}); }, 2.1},
        {"prod", [](double x) { return prod_exp_cdf(x, {0.7}, {2.1}); }, 2.1},
    };
    for (const Case& c : cases) {
        CAPTURE(c.name);
        CHECK(c.cdf(0.0) == 0.0);
        double prev = 0.0;
        for (const double x : log_spaced(1e-9, 60.0 * c.largest_mean, 400)) {
            const double v = c.cdf(x);
            CHECK(v >= prev);
            CHECK(v <= 1.0);
            prev = v;
        }
        CHECK(c.cdf(50.0 * c.largest_mean) >= 1.0 - 1e-6);
    }
}

TEST_CASE("A2 and A8 slope limits") {
    for (const double mean : {0.3, 1.0, 4.2}) {
        const double mu = 1e-4 * mean;
        const double slope = exp_cdf(mu, {mean}) / mu;
        CHECK(std::abs(slope - 1.0 / mean) / (1.0 / mean) <= 1e-3);
    }
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> pick(0.1, 10.0);
    for (int i = 0; i < 20; ++i) {
        const double a = pick(rng);
        const double b = pick(rng);
        const double rate = 1.0 / a + 1.0 / b;
        const double mu = 1e-4 / rate;
        const double slope = min2_exp_cdf(mu, {a}, {b}) / mu;
        CHECK(std::abs(slope - rate) / rate <= 1e-3);
    }
}

TEST_CASE("A4 curvature limit") {
    std::mt19937_64 rng(999);
    std::uniform_real_distribution<double> pick(0.1, 10.0);
    for (int i = 0; i < 20; ++i) {
        const double a = pick(rng);
        const double b = pick(rng);
        const double mu = 1e-3 * std::min(a, b);
        const double curv = sum2_exp_cdf(mu, {a}, {b}) / (mu * mu);
        const double want = 1.0 / (2.0 * a * b);
        CHECK(std::abs(curv - want) / want <= 1e-2);
    }
}

TEST_CASE("prod_exp_pdf integrates to 1") {
    // p = w^2 substitution tames the log endpoint; the tail beyond p = 900ab
    // holds less than 1e-24 of the mass.
    const double a = 0.7;
    const double b = 2.1;
    const auto integrand = [&](double w) { return 2.0 * w * prod_exp_pdf(w * w, {a}, {b}); };
    const double upper = 30.0 * std::sqrt(a * b);
    static constexpr int kSteps = 400000;
    long double sum = 0.0L;  // composite Simpson, open at the left endpoint
    const double h = upper / kSteps;
    for (int i = 1; i < kSteps; ++i)
        sum += (i % 2 == 1 ? 4.0L : 2.0L) * integrand(i * h);
    sum += integrand(upper);
    sum *= h / 3.0L;
    CHECK(static_cast<double>(sum) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("Monte Carlo equivalence of each cdf on a 50-point quantile grid") {
    constexpr std::uint64_t kN = 10'000'000;
    const double a = 0.8;
    const double b = 1.9;
    struct Case {
        const char* name;
        std::function<double(CounterStream&)> draw;
        std::function<double(double)> cdf;
        double scale;
    };
    const std::vector<Case> cases = {
        {"exp", [&](CounterStream& s) { return s.next_exp(a); },
         [&](double x) { return exp_cdf(x, {a}); }, a},
        {"sum2", [&](CounterStream& s) { return s.next_exp(a) + s.next_exp(b); },
         [&](double x) { return sum2_exp_cdf(x, {a}, {b}); }, a + b},
        {"min2", [&](CounterStream& s) { return std::min(s.next_exp(a), s.next_exp(b)); },
         [&](double x) { return min2_exp_cdf(x, {a}, {b}); }, a},
        {"prod", [&](CounterStream& s) { return s.next_exp(a) * s.next_exp(b); },
         [&](double x) { return prod_exp_cdf(x, {a}, {b}); }, a * b},
    };
    int case_index = 0;
    for (const Case& c : cases) {
        CAPTURE(c.name);
        const std::vector<double> grid = quantile_grid(c.cdf, c.scale, 0.02, 0.98, 50);
        std::vector<std::uint64_t> cell(grid.size() + 1, 0);
        CounterStream stream(20240600 + case_index++, 0);
        for (std::uint64_t i = 0; i < kN; ++i) {
            const double x = c.draw(stream);
            ++cell[std::upper_bound(grid.begin(), grid.end(), x) - grid.begin()];
        }
        std::uint64_t below = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            below += cell[k];
            const double p = c.cdf(grid[k]);
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(kN));
            const double phat = static_cast<double>(below) / static_cast<double>(kN);
            CHECK(std::abs(phat - p) <= 4.0 * se);
        }
    }
}

TEST_CASE("shift identity: cdf of u + v + c is the sum cdf shifted right") {
    constexpr std::uint64_t kN = 1'000'000;
    const double a = 1.1;
    const double b = 0.6;
    const double c = 0.7;
    const auto cdf = [&](double s) {
        return s <= c ? 0.0 : sum2_exp_cdf(s - c, {a}, {b});
    };
    const std::vector<double> grid = afrelay_test::lin_spaced(c + 0.05, c + 5.0 * (a + b), 25);
    std::vector<std::uint64_t> cell(grid.size() + 1, 0);
    CounterStream stream(555, 0);
    for (std::uint64_t i = 0; i < kN; ++i) {
        const double z = stream.next_exp(a) + stream.next_exp(b) + c;
        ++cell[std::upper_bound(grid.begin(), grid.end(), z) - grid.begin()];
    }
    std::uint64_t below = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        below += cell[k];
        const double p = cdf(grid[k]);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(kN));
        const double phat = static_cast<double>(below) / static_cast<double>(kN);
        CHECK(std::abs(phat - p) <= 4.0 * se + 1e-9);
    }
}

TEST_SUITE_END();
