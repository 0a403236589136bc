#include "afrelay/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace afrelay::special {

namespace {

// Euler-Mascheroni constant, 20 digits.
constexpr double kEulerGamma = 0.57721566490153286061;

// The dedicated 1 - x*K1(x) series is used below this argument.
constexpr double kComplementSeriesCutoff = 1e-2;

constexpr int kMaxSeriesTerms = 200;
constexpr int kMaxCfIterations = 2000;

[[noreturn]] void throw_domain(const char* fn, double x) {
    throw std::domain_error(std::string(fn) + ": argument " + std::to_string(x) +
                            " outside domain");
}

// Ascending series, K0(x) = -(ln(x/2) + g) I0(x) + sum_{k>=1} H_k q^k/(k!)^2
// with q = x^2/4 and H_k the k-th harmonic number.
double k0_series(double x, double tol) {
    const double q = 0.25 * x * x;
    double term = 1.0;   // q^k / (k!)^2
    double i0 = 1.0;
    double harmonic = 0.0;
    double s = 0.0;
    for (int k = 1; k < kMaxSeriesTerms; ++k) {
        term *= q / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        i0 += term;
        s += harmonic * term;
        if (term * (harmonic + 1.0) < tol * i0) break;
    }
    return -(std::log(0.5 * x) + kEulerGamma) * i0 + s;
}

// Shared tail of the K1 ascending series:
//   B = sum_{k>=0} q^k / (k!(k+1)!)            (so I1(x) = (x/2) B)
//   C = sum_{k>=0} (2 H_k + 1/(k+1) - 2g) q^k / (k!(k+1)!)
struct K1SeriesParts {
    double b;
    double c;
};

K1SeriesParts k1_series_parts(double x, double tol) {
    const double q = 0.25 * x * x;
    double term = 1.0;  // q^k / (k!(k+1)!)
    double harmonic = 0.0;
    double b = term;
    double c = term * (1.0 - 2.0 * kEulerGamma);
    for (int k = 1; k < kMaxSeriesTerms; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        harmonic += 1.0 / k;
        b += term;
        c += term * (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * kEulerGamma);
        if (term * (2.0 * harmonic + 2.0) < tol * b) break;
    }
    return {b, c};
}

// K1(x) = 1/x + ln(x/2) I1(x) - (x/4) C.
double k1_series(double x, double tol) {
    const auto [b, c] = k1_series_parts(x, tol);
    return 1.0 / x + std::log(0.5 * x) * (0.5 * x) * b - 0.25 * x * c;
}

// Scaled values e^x K0(x) and e^x K1(x) for x above the series range,
// via Steed's continued fraction for the confluent hypergeometric function
// U(1/2, 1, 2x) (Temme's method, order mu = 0). Converges for x down to
// roughly 0.5, so the policy crossover may be probed well below its default.
struct ScaledK {
    double k0;
    double k1;
};

ScaledK k01_scaled_cf(double x, double tol) {
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxCfIterations; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels) <= tol * std::abs(s)) {
            h *= a1;
            const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
            return {k0, k0 * (x + 0.5 - h) / x};
        }
    }
    throw std::runtime_error("bessel: continued fraction failed to converge");
}

void check_positive_arg(const char* fn, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw_domain(fn, x);
}

double series_tol(const BesselEvalPolicy& policy) {
    return 0.1 * policy.target_rel_err;
}

}  // namespace

void validate(const BesselEvalPolicy& policy) {
    if (!(policy.target_rel_err > 0.0) || !(policy.target_rel_err <= 1e-10))
        throw std::invalid_argument("BesselEvalPolicy: target_rel_err must be in (0, 1e-10]");
    if (!(policy.series_to_asymptotic_crossover > 0.0) ||
        !std::isfinite(policy.series_to_asymptotic_crossover))
        throw std::invalid_argument("BesselEvalPolicy: crossover must be positive");
    if (!(policy.underflow_argument > 0.0))
        throw std::invalid_argument("BesselEvalPolicy: underflow_argument must be positive");
}

double bessel_k0(double x, const BesselEvalPolicy& policy) {
    validate(policy);
    check_positive_arg("bessel_k0", x);
    if (x >= policy.underflow_argument) return 0.0;
    const double tol = series_tol(policy);
    if (x <= policy.series_to_asymptotic_crossover) return k0_series(x, tol);
    return k01_scaled_cf(x, tol).k0 * std::exp(-x);
}

double bessel_k1(double x, const BesselEvalPolicy& policy) {
    validate(policy);
    check_positive_arg("bessel_k1", x);
    if (x >= policy.underflow_argument) return 0.0;
    const double tol = series_tol(policy);
    if (x <= policy.series_to_asymptotic_crossover) return k1_series(x, tol);
    return k01_scaled_cf(x, tol).k1 * std::exp(-x);
}

double x_k1_complement(double x, const BesselEvalPolicy& policy) {
    validate(policy);
    if (!(x >= 0.0) || !std::isfinite(x)) throw_domain("x_k1_complement", x);
    if (x == 0.0) return 0.0;
    if (x < kComplementSeriesCutoff) {
        // 1 - x K1(x) = -x ln(x/2) I1(x) + (x^2/4) C, term by term O(x^2),
        // so no digits are lost to subtraction.
        const auto [b, c] = k1_series_parts(x, series_tol(policy));
        return -std::log(0.5 * x) * (0.5 * x * x) * b + 0.25 * x * x * c;
    }
    const double v = 1.0 - x * bessel_k1(x, policy);
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

}  // namespace afrelay::special
