#include "afrelay/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace afrelay::mc {

namespace {

constexpr std::uint64_t kStreamKeyStride = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kCounterStride = 0xD1342543DE82EF95ULL;

std::uint64_t block_count(std::uint64_t n_samples) {
    return (n_samples + kBlockSamples - 1) / kBlockSamples;
}

// Runs fn(block_index, samples_in_block) for every block, spread over
// plan.n_streams workers. Blocks are the unit of reproducibility: each owns a
// fixed sub-stream and a fixed slot in the reduction, so the worker count
// never changes the result.
template <typename PerBlockFn>
void run_blocks(const SimPlan& plan, const PerBlockFn& fn) {
    const std::uint64_t blocks = block_count(plan.n_samples);
    const auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t b = begin; b < end; ++b) {
            const std::uint64_t first = b * kBlockSamples;
            const std::uint64_t count = std::min(kBlockSamples, plan.n_samples - first);
            fn(b, count);
        }
    };
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(plan.n_streams, blocks));
    if (workers <= 1) {
        run_range(0, blocks);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t per = (blocks + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = w * per;
        const std::uint64_t end = std::min(blocks, begin + per);
        if (begin >= end) break;
        pool.emplace_back(run_range, begin, end);
    }
    for (std::thread& t : pool) t.join();
}

double gain_of(GainKind kind, const channel::FadingDraw& draw, double snr) {
    switch (kind) {
        case GainKind::exact: return channel::e2e_gain_exact(draw, snr);
        case GainKind::min2: return channel::bound_min2(draw);
        case GainKind::min3: return channel::bound_min3(draw, snr);
        case GainKind::cutset: return channel::cutset_gain(draw);
    }
    throw std::invalid_argument("unknown GainKind");
}

double relay_gain_of(RelayGainKind kind, double u, double v, double snr) {
    switch (kind) {
        case RelayGainKind::exact_relay:
            return (u + v == 0.0) ? 0.0 : u * v / (u + v + 1.0 / snr);
        case RelayGainKind::min2_relay: return std::min(u, v);
        case RelayGainKind::min3_relay: return std::min({u, v, u * v * snr});
    }
    throw std::invalid_argument("unknown RelayGainKind");
}

void check_query(const channel::LinkMeans& means, double snr, const SimPlan& plan) {
    channel::validate(means);
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::domain_error("montecarlo: snr must be positive and finite");
    validate(plan);
}

double binomial_std_error(std::uint64_t hits, std::uint64_t n) {
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CounterStream::CounterStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
    : key_(mix64(master_seed + (stream_index + 1) * kStreamKeyStride)) {}

std::uint64_t CounterStream::next_u64() noexcept {
    return mix64(key_ + (counter_++) * kCounterStride);
}

double CounterStream::next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterStream::next_exp(double mean) noexcept {
    return -mean * std::log1p(-next_unit());
}

void validate(const SimPlan& plan) {
    if (plan.n_samples < 1) throw std::domain_error("SimPlan: n_samples must be >= 1");
    if (plan.n_streams < 1) throw std::domain_error("SimPlan: n_streams must be >= 1");
    if (plan.n_streams > plan.n_samples)
        throw std::domain_error("SimPlan: n_streams must not exceed n_samples");
}

channel::FadingDraw sample_fading(const channel::LinkMeans& means, CounterStream& stream) {
    channel::validate(means);
    const double sd = stream.next_exp(means.mu_sd);
    const double sr = stream.next_exp(means.mu_sr);
    const double rd = stream.next_exp(means.mu_rd);
    return {sd, sr, rd};
}

Estimate estimate_outage(const channel::LinkMeans& means, double snr, double mu_th,
                         GainKind kind, const SimPlan& plan, int n_relays) {
    check_query(means, snr, plan);
    if (!(mu_th >= 0.0) || !std::isfinite(mu_th))
        throw std::domain_error("estimate_outage: mu_th must be nonnegative and finite");
    if (n_relays < 1) throw std::domain_error("estimate_outage: n_relays must be >= 1");
    if (n_relays > 1 && kind != GainKind::exact)
        throw std::invalid_argument("estimate_outage: bounds are single-relay only");

    std::vector<std::uint64_t> hits(block_count(plan.n_samples), 0);
    run_blocks(plan, [&](std::uint64_t block, std::uint64_t count) {
        CounterStream stream(plan.master_seed, block);
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            double gain;
            if (n_relays == 1) {
                gain = gain_of(kind, sample_fading(means, stream), snr);
            } else {
                gain = stream.next_exp(means.mu_sd);
                for (int r = 0; r < n_relays; ++r) {
                    const double u = stream.next_exp(means.mu_sr);
                    const double v = stream.next_exp(means.mu_rd);
                    gain += relay_gain_of(RelayGainKind::exact_relay, u, v, snr);
                }
            }
            h += gain < mu_th ? 1 : 0;
        }
        hits[block] = h;
    });
    std::uint64_t total = 0;
    for (const std::uint64_t h : hits) total += h;
    const double p = static_cast<double>(total) / static_cast<double>(plan.n_samples);
    return {p, binomial_std_error(total, plan.n_samples), plan.n_samples, plan.master_seed};
}

Estimate estimate_mean_gain(const channel::LinkMeans& means, double snr, RelayGainKind kind,
                            const SimPlan& plan) {
    check_query(means, snr, plan);
    struct Moments {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    std::vector<Moments> partial(block_count(plan.n_samples));
    run_blocks(plan, [&](std::uint64_t block, std::uint64_t count) {
        CounterStream stream(plan.master_seed, block);
        Moments m;
        for (std::uint64_t i = 0; i < count; ++i) {
            // Keep the three-component layout so every kind sees the same draws.
            const channel::FadingDraw draw = sample_fading(means, stream);
            const double g = relay_gain_of(kind, draw.h_sr2, draw.h_rd2, snr);
            m.sum += g;
            m.sum_sq += g * g;
        }
        partial[block] = m;
    });
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const Moments& m : partial) {
        sum += m.sum;
        sum_sq += m.sum_sq;
    }
    const double n = static_cast<double>(plan.n_samples);
    const double mean = sum / n;
    double se = 0.0;
    if (plan.n_samples > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
        se = std::sqrt(var / n);
    }
    return {mean, se, plan.n_samples, plan.master_seed};
}

namespace {

template <typename GainFn>
std::vector<Estimate> empirical_cdf_impl(const channel::LinkMeans& means,
                                         std::span<const double> grid, const SimPlan& plan,
                                         const GainFn& gain_fn) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]))
            throw std::domain_error("empirical_cdf: grid values must be nonnegative and finite");
        if (i > 0 && grid[i] < grid[i - 1])
            throw std::domain_error("empirical_cdf: grid must be sorted ascending");
    }
    if (grid.empty()) return {};

    const std::uint64_t blocks = block_count(plan.n_samples);
    // cell[j] counts draws with grid[j-1] <= gain < grid[j]; prefix sums give
    // the per-point counts of gain < grid[k].
    std::vector<std::vector<std::uint64_t>> cells(blocks);
    run_blocks(plan, [&](std::uint64_t block, std::uint64_t count) {
        CounterStream stream(plan.master_seed, block);
        std::vector<std::uint64_t> cell(grid.size() + 1, 0);
        for (std::uint64_t i = 0; i < count; ++i) {
            const double gain = gain_fn(sample_fading(means, stream));
            const std::size_t idx =
                std::upper_bound(grid.begin(), grid.end(), gain) - grid.begin();
            ++cell[idx];
        }
        cells[block] = std::move(cell);
    });
    std::vector<std::uint64_t> below(grid.size(), 0);
    std::uint64_t running = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::uint64_t at_k = 0;
        for (const std::vector<std::uint64_t>& cell : cells) at_k += cell[k];
        running += at_k;
        below[k] = running;
    }
    std::vector<Estimate> out;
    out.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double p = static_cast<double>(below[k]) / static_cast<double>(plan.n_samples);
        out.push_back({p, binomial_std_error(below[k], plan.n_samples), plan.n_samples,
                       plan.master_seed});
    }
    return out;
}

}  // namespace

std::vector<Estimate> empirical_cdf(const channel::LinkMeans& means, double snr, GainKind kind,
                                    std::span<const double> grid, const SimPlan& plan) {
    check_query(means, snr, plan);
    return empirical_cdf_impl(means, grid, plan, [&](const channel::FadingDraw& draw) {
        return gain_of(kind, draw, snr);
    });
}

std::vector<Estimate> empirical_relay_cdf(const channel::LinkMeans& means, double snr,
                                          RelayGainKind kind, std::span<const double> grid,
                                          const SimPlan& plan) {
    check_query(means, snr, plan);
    return empirical_cdf_impl(means, grid, plan, [&](const channel::FadingDraw& draw) {
        return relay_gain_of(kind, draw.h_sr2, draw.h_rd2, snr);
    });
}

std::uint64_t audit_bound_chain(const channel::LinkMeans& means, double snr,
                                const SimPlan& plan) {
    check_query(means, snr, plan);
    std::vector<std::uint64_t> bad(block_count(plan.n_samples), 0);
    run_blocks(plan, [&](std::uint64_t block, std::uint64_t count) {
        CounterStream stream(plan.master_seed, block);
        std::uint64_t v = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            const channel::FadingDraw draw = sample_fading(means, stream);
            const double exact = channel::e2e_gain_exact(draw, snr);
            const double min3 = channel::bound_min3(draw, snr);
            const double min2 = channel::bound_min2(draw);
            const double cutset = channel::cutset_gain(draw);
            if (exact > min3 || min3 > min2 || cutset != min2) ++v;
        }
        bad[block] = v;
    });
    std::uint64_t total = 0;
    for (const std::uint64_t v : bad) total += v;
    return total;
}

}  // namespace afrelay::mc
