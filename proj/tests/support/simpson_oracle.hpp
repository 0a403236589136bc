#pragma once

#include <cmath>

#include "afrelay/channel.hpp"
#include "afrelay/special_functions.hpp"

namespace afrelay_test {

// Fixed-step composite Simpson evaluation of the convolution integral behind
// the min(u, v, uv*snr) outage cdf:
//   I = int_0^mu exp(-y (1/M_r - 1/mu_sd)) t(y) K1(t(y)) dy,
//   t(y) = 2 sqrt((y/snr)/(mu_sr mu_rd)).
// The Bessel factor reuses the library's independently validated evaluator;
// what this oracle pins down is the integration itself.
inline double simpson_min3_integral(const afrelay::channel::LinkMeans& means, double snr,
                                    double mu, int steps = 1'000'000) {
    if (mu == 0.0) return 0.0;
    const double m_r = 1.0 / (1.0 / means.mu_sr + 1.0 / means.mu_rd);
    const double decay = 1.0 / m_r - 1.0 / means.mu_sd;
    const double t_scale = 1.0 / (snr * means.mu_sr * means.mu_rd);
    const auto g = [&](double y) {
        const double t = 2.0 * std::sqrt(y * t_scale);
        return std::exp(-decay * y) * (1.0 - afrelay::special::x_k1_complement(t));
    };
    const double h = mu / steps;
    long double sum = g(0.0) + g(mu);
    for (int i = 1; i < steps; ++i) sum += (i % 2 == 1 ? 4.0L : 2.0L) * g(i * h);
    return static_cast<double>(sum * h / 3.0L);
}

inline double simpson_af_min3_cdf(const afrelay::channel::LinkMeans& means, double snr,
                                  double mu, int steps = 1'000'000) {
    if (mu == 0.0) return 0.0;
    const double integral = simpson_min3_integral(means, snr, mu, steps);
    const double direct = std::exp(-mu / means.mu_sd);
    return (1.0 - direct) - direct / means.mu_sd * integral;
}

}  // namespace afrelay_test
