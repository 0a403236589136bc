#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "afrelay/channel.hpp"

namespace afrelay::mc {

/// Deterministic simulation plan. n_streams is the worker-thread count; the
/// estimate is bit-identical for any n_streams because random values are tied
/// to fixed sample-index blocks, not to workers (see docs/rng.md).
struct SimPlan {
    std::uint64_t master_seed = 1;
    std::uint64_t n_samples = 1'000'000;
    unsigned n_streams = 1;
};

/// Monte Carlo result with its binomial or sample standard error.
struct Estimate {
    double value;
    double std_error;
    std::uint64_t n;
    std::uint64_t master_seed;
};

/// Which end-to-end gain a draw is scored with.
enum class GainKind { exact, min2, min3, cutset };

/// Relay-hop-only gains (no direct path), for the mean-gain comparisons.
enum class RelayGainKind { exact_relay, min2_relay, min3_relay };

/// Samples in one logical substream (one fixed block of sample indices).
inline constexpr std::uint64_t kBlockSamples = 4096;

/// Counter-based generator: output n of stream s is
///   mix64(key_s + n * 0xD1342543DE82EF95),  key_s = mix64(seed + (s+1) * 0x9E3779B97F4A7C15)
/// with mix64 the splitmix64 finalizer. Full definition in docs/rng.md.
std::uint64_t mix64(std::uint64_t z) noexcept;

class CounterStream {
public:
    CounterStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;
    std::uint64_t next_u64() noexcept;
    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit() noexcept;
    /// Inverse-cdf exponential draw, -mean * ln(1 - r).
    double next_exp(double mean) noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

void validate(const SimPlan& plan);

/// One Rayleigh-fading realization: three independent exponential gains.
channel::FadingDraw sample_fading(const channel::LinkMeans& means, CounterStream& stream);

/// Fraction of draws whose selected gain falls below mu_th, with binomial
/// standard error. n_relays > 1 is supported for the exact gain only.
Estimate estimate_outage(const channel::LinkMeans& means, double snr, double mu_th,
                         GainKind kind, const SimPlan& plan, int n_relays = 1);

/// Sample mean of the selected relay-hop gain.
Estimate estimate_mean_gain(const channel::LinkMeans& means, double snr, RelayGainKind kind,
                            const SimPlan& plan);

/// Outage estimates at every grid point from one shared sample set.
/// The grid must be sorted ascending.
std::vector<Estimate> empirical_cdf(const channel::LinkMeans& means, double snr, GainKind kind,
                                    std::span<const double> grid, const SimPlan& plan);

/// Same single-pass estimator for the relay-hop-only gains.
std::vector<Estimate> empirical_relay_cdf(const channel::LinkMeans& means, double snr,
                                          RelayGainKind kind, std::span<const double> grid,
                                          const SimPlan& plan);

/// Draw-by-draw audit of the gain orderings exact <= min3 <= min2 and
/// cutset == min2; returns the number of violating draws.
std::uint64_t audit_bound_chain(const channel::LinkMeans& means, double snr, const SimPlan& plan);

}  // namespace afrelay::mc
