#include "afrelay/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "afrelay/special_functions.hpp"

namespace afrelay::dist {

namespace {

void check_mean(const char* fn, ExpMean m) {
    if (!(m.mean > 0.0) || !std::isfinite(m.mean))
        throw std::domain_error(std::string(fn) + ": mean must be positive and finite");
}

void check_nonnegative(const char* fn, double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(fn) + ": argument " + std::to_string(x) +
                                " must be nonnegative and finite");
}

// Gamma(2) cdf 1 - e^{-z}(1 + z). The direct form cancels like z^2/2 for
// small z, so the series sum_{k>=2} (-1)^k z^k (k-1)/k! takes over below 0.1.
double gamma2_cdf(double z) {
    if (z >= 0.1) return 1.0 - std::exp(-z) * (1.0 + z);
    double t = 0.5 * z * z;  // t_k = (-1)^k z^k (k-1)/k!, starting at k = 2
    double s = t;
    for (int k = 2; k < 40; ++k) {
        t *= -z * k / (static_cast<double>(k + 1) * (k - 1));
        s += t;
        if (std::abs(t) < 1e-18 * std::abs(s)) break;
    }
    return s;
}

}  // namespace

double one_minus_exp(double x) { return -std::expm1(-x); }

double exp_pdf(double u, ExpMean m) {
    check_mean("exp_pdf", m);
    check_nonnegative("exp_pdf", u);
    return std::exp(-u / m.mean) / m.mean;
}

double exp_cdf(double u, ExpMean m) {
    check_mean("exp_cdf", m);
    check_nonnegative("exp_cdf", u);
    return one_minus_exp(u / m.mean);
}

double sum2_exp_cdf(double s, ExpMean mu, ExpMean mv) {
    check_mean("sum2_exp_cdf", mu);
    check_mean("sum2_exp_cdf", mv);
    check_nonnegative("sum2_exp_cdf", s);
    const double a = mu.mean;
    const double b = mv.mean;
    if (std::abs(a - b) < kEqualMeanRelTol * std::max(a, b))
        return gamma2_cdf(s / (0.5 * (a + b)));
    const double f = (b * one_minus_exp(s / b) - a * one_minus_exp(s / a)) / (b - a);
    return std::clamp(f, 0.0, 1.0) + 0.0;  // normalize -0 from the signed division
}

ExpMean min2_exp_mean(ExpMean mu, ExpMean mv) {
    check_mean("min2_exp_mean", mu);
    check_mean("min2_exp_mean", mv);
    return {1.0 / (1.0 / mu.mean + 1.0 / mv.mean)};
}

double min2_exp_cdf(double m, ExpMean mu, ExpMean mv) {
    check_mean("min2_exp_cdf", mu);
    check_mean("min2_exp_cdf", mv);
    check_nonnegative("min2_exp_cdf", m);
    return one_minus_exp(m * (1.0 / mu.mean + 1.0 / mv.mean));
}

double prod_exp_pdf(double p, ExpMean mu, ExpMean mv) {
    check_mean("prod_exp_pdf", mu);
    check_mean("prod_exp_pdf", mv);
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::domain_error("prod_exp_pdf: p must be positive (the density diverges at 0)");
    // (2/(mu_u mu_v)) K0(2 sqrt(p/(mu_u mu_v))): the derivative of the
    // 1 - t K1(t) cdf below, and the normalization that integrates to 1.
    const double mm = mu.mean * mv.mean;
    return 2.0 * special::bessel_k0(2.0 * std::sqrt(p / mm)) / mm;
}

double prod_exp_cdf(double y, ExpMean mu, ExpMean mv) {
    check_mean("prod_exp_cdf", mu);
    check_mean("prod_exp_cdf", mv);
    check_nonnegative("prod_exp_cdf", y);
    return special::x_k1_complement(2.0 * std::sqrt(y / (mu.mean * mv.mean)));
}

}  // namespace afrelay::dist
