#pragma once

namespace afrelay::dist {

/// Mean of an exponential random variable (an average fading power).
struct ExpMean {
    double mean;
};

/// Two means closer than this (relative to the larger) are treated as equal
/// by the two-exponential-sum cdf, which switches to its Gamma(2) limit form.
inline constexpr double kEqualMeanRelTol = 1e-6;

/// 1 - e^{-x} for x >= 0 without cancellation at small x.
double one_minus_exp(double x);

/// Density (1/mu) e^{-u/mu} at u >= 0.
double exp_pdf(double u, ExpMean m);

/// Cdf 1 - e^{-u/mu} at u >= 0.
double exp_cdf(double u, ExpMean m);

/// Cdf of the sum of two independent exponentials at s >= 0.
double sum2_exp_cdf(double s, ExpMean mu, ExpMean mv);

/// Mean of min(u, v): the harmonic combination 1/m = 1/mu_u + 1/mu_v.
ExpMean min2_exp_mean(ExpMean mu, ExpMean mv);

/// Cdf of min(u, v) at m >= 0; exact, the minimum is itself exponential.
double min2_exp_cdf(double m, ExpMean mu, ExpMean mv);

/// Density of the product u*v at p > 0: (2/(mu_u mu_v)) K0(2 sqrt(p/(mu_u mu_v))).
/// Diverges logarithmically as p -> 0, so p = 0 is rejected.
double prod_exp_pdf(double p, ExpMean mu, ExpMean mv);

/// Cdf of the product u*v at y >= 0: 1 - t K1(t), t = 2 sqrt(y/(mu_u mu_v)).
double prod_exp_cdf(double y, ExpMean mu, ExpMean mv);

}  // namespace afrelay::dist
