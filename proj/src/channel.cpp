#include "afrelay/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace afrelay::channel {

namespace {

void check_nonnegative(const char* fn, double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(fn) + ": argument " + std::to_string(x) +
                                " must be nonnegative and finite");
}

void check_positive(const char* fn, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(fn) + ": argument " + std::to_string(x) +
                                " must be positive and finite");
}

}  // namespace

void validate(const LinkMeans& means) {
    check_positive("LinkMeans", means.mu_sd);
    check_positive("LinkMeans", means.mu_sr);
    check_positive("LinkMeans", means.mu_rd);
}

void validate(const SystemParams& params) {
    check_positive("SystemParams", params.snr);
    if (params.n_relays < 1) throw std::domain_error("SystemParams: n_relays must be >= 1");
    check_nonnegative("SystemParams", params.rate_threshold);
}

void validate(const FadingDraw& draw) {
    check_nonnegative("FadingDraw", draw.h_sd2);
    check_nonnegative("FadingDraw", draw.h_sr2);
    check_nonnegative("FadingDraw", draw.h_rd2);
}

double relay_gain_alpha(double p_relay, double p_source, double h_sr2, double noise_var) {
    check_positive("relay_gain_alpha", p_relay);
    check_positive("relay_gain_alpha", p_source);
    check_nonnegative("relay_gain_alpha", h_sr2);
    check_positive("relay_gain_alpha", noise_var);
    return std::sqrt(p_relay / (p_source * h_sr2 + noise_var));
}

double relayed_snr(double gamma_sr, double gamma_rd) {
    check_nonnegative("relayed_snr", gamma_sr);
    check_nonnegative("relayed_snr", gamma_rd);
    if (gamma_sr == 0.0 || gamma_rd == 0.0) return 0.0;
    return gamma_sr * gamma_rd / (gamma_sr + gamma_rd + 1.0);
}

double total_snr(double gamma_sd, std::span<const HopSnrs> hops) {
    check_nonnegative("total_snr", gamma_sd);
    double sum = gamma_sd;
    for (const HopSnrs& hop : hops) sum += relayed_snr(hop.sr, hop.rd);
    return sum;
}

double e2e_gain_exact(const FadingDraw& draw, double snr) {
    validate(draw);
    check_positive("e2e_gain_exact", snr);
    const double u = draw.h_sr2;
    const double v = draw.h_rd2;
    if (u + v == 0.0) return draw.h_sd2;
    return draw.h_sd2 + u * v / (u + v + 1.0 / snr);
}

double bound_min2(const FadingDraw& draw) {
    validate(draw);
    return draw.h_sd2 + std::min(draw.h_sr2, draw.h_rd2);
}

double bound_min3(const FadingDraw& draw, double snr) {
    validate(draw);
    check_positive("bound_min3", snr);
    return draw.h_sd2 + std::min({draw.h_sr2, draw.h_rd2, draw.h_sr2 * draw.h_rd2 * snr});
}

double cutset_gain(const FadingDraw& draw) {
    validate(draw);
    return std::min(draw.h_sd2 + draw.h_sr2, draw.h_sd2 + draw.h_rd2);
}

double info_rate(double gain, double snr, int n_relays) {
    check_nonnegative("info_rate", gain);
    check_positive("info_rate", snr);
    if (n_relays < 1) throw std::domain_error("info_rate: n_relays must be >= 1");
    return std::log2(1.0 + gain * snr) / (1.0 + n_relays);
}

double gain_threshold(const SystemParams& params) {
    validate(params);
    return (std::exp2((params.n_relays + 1) * params.rate_threshold) - 1.0) / params.snr;
}

}  // namespace afrelay::channel
