#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "afrelay/channel.hpp"

namespace afrelay::analytics {

/// One analytic outage evaluation point: link means, linear SNR and the gain
/// threshold the end-to-end gain is compared against.
struct OutageQuery {
    channel::LinkMeans means;
    double snr;
    double mu_th;
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 2000;
};

struct QuadratureResult {
    double value;
    double error_bound;
};

/// Raised when adaptive subdivision hits max_subdivisions before meeting the
/// tolerance; carries the best estimate obtained so far.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(double best_estimate, double error_bound);
    double best_estimate() const { return best_estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

void validate(const OutageQuery& query);
void validate(const QuadratureSpec& spec);

/// Globally adaptive Gauss-Kronrod (7-15) integration of f over [a, b].
/// Deterministic: identical inputs produce bit-identical results.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec = {});

/// Cdf of min(|h_sr|^2, |h_rd|^2); exact (the minimum is exponential with
/// mean M_r, 1/M_r = 1/mu_sr + 1/mu_rd).
double cdf_relay_min2(double mu, const channel::LinkMeans& means);

/// Cdf of |h_sd|^2 + min(|h_sr|^2, |h_rd|^2); exact two-exponential sum.
double cdf_af_min2(double mu, const channel::LinkMeans& means);

/// Outage probability from the min(u, v) bound: cdf_af_min2 at the threshold.
double outage_min2(const OutageQuery& query);

/// Approximate cdf of min(|h_sr|^2, |h_rd|^2, |h_sr|^2 |h_rd|^2 snr), built as
/// a product of the three survival probabilities as if independent:
/// 1 - exp(-mu/M_r) t K1(t), t = 2 sqrt((mu/snr)/(mu_sr mu_rd)).
double cdf_relay_min3(double mu, const channel::LinkMeans& means, double snr);

/// Approximate cdf of |h_sd|^2 + min(u, v, uv snr): the direct-path density
/// convolved with cdf_relay_min3; the integral is evaluated adaptively.
double cdf_af_min3(double mu, const channel::LinkMeans& means, double snr,
                   const QuadratureSpec& quad = {});

/// Outage probability from the min(u, v, uv snr) bound.
double outage_min3(const OutageQuery& query, const QuadratureSpec& quad = {});

/// Outage lower bound from the cut-set gain, as the product of the survival
/// probabilities of |h_sd|^2 + |h_sr|^2 and |h_sd|^2 + |h_rd|^2. The two sums
/// share |h_sd|^2, so the product form is an approximation.
double outage_cutset(const OutageQuery& query);

/// Per-thread tally of [0, 1] clamps applied by the analytic evaluators.
/// Excesses beyond 1e-9 indicate formula misuse rather than rounding and are
/// also reported on stderr.
struct ClampStats {
    std::uint64_t events = 0;
    double max_excess = 0.0;
};

ClampStats clamp_stats();
void reset_clamp_stats();

}  // namespace afrelay::analytics
