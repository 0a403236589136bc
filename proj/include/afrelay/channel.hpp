#pragma once

#include <span>

namespace afrelay::channel {

/// Average squared channel gains of the three links (exponential means).
struct LinkMeans {
    double mu_sd;
    double mu_sr;
    double mu_rd;
};

/// Unfaded AWGN SNR (linear), relay count and rate threshold in
/// bits/channel-use.
struct SystemParams {
    double snr;
    int n_relays = 1;
    double rate_threshold = 0.0;
};

/// One realization of the three squared channel gains.
struct FadingDraw {
    double h_sd2;
    double h_sr2;
    double h_rd2;
};

/// Instantaneous SNRs of one relay hop pair, for the multi-relay sum.
struct HopSnrs {
    double sr;
    double rd;
};

void validate(const LinkMeans& means);
void validate(const SystemParams& params);
void validate(const FadingDraw& draw);

/// Relay amplification factor sqrt(P_r / (P_s |h_sr|^2 + noise_var)).
double relay_gain_alpha(double p_relay, double p_source, double h_sr2, double noise_var);

/// SNR of the relayed branch after combining: g_sr g_rd / (g_sr + g_rd + 1).
double relayed_snr(double gamma_sr, double gamma_rd);

/// MRC output SNR: direct-branch SNR plus every relayed-branch SNR.
double total_snr(double gamma_sd, std::span<const HopSnrs> hops);

/// Exact end-to-end fading gain of the single-relay network:
/// |h_sd|^2 + |h_sr|^2 |h_rd|^2 / (|h_sr|^2 + |h_rd|^2 + 1/snr).
double e2e_gain_exact(const FadingDraw& draw, double snr);

/// Upper bound |h_sd|^2 + min(|h_sr|^2, |h_rd|^2).
double bound_min2(const FadingDraw& draw);

/// Tighter upper bound |h_sd|^2 + min(|h_sr|^2, |h_rd|^2, |h_sr|^2 |h_rd|^2 snr),
/// which tracks the exact gain in both the low- and high-SNR regimes.
double bound_min3(const FadingDraw& draw, double snr);

/// Cut-set gain min(|h_sd|^2 + |h_sr|^2, |h_sd|^2 + |h_rd|^2); pointwise equal
/// to bound_min2.
double cutset_gain(const FadingDraw& draw);

/// Half-duplex information rate (1/(1+M)) log2(1 + gain * snr).
double info_rate(double gain, double snr, int n_relays);

/// Outage threshold on the end-to-end gain: (2^{(M+1) R_th} - 1) / snr.
double gain_threshold(const SystemParams& params);

}  // namespace afrelay::channel
