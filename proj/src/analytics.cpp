#include "afrelay/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "afrelay/distributions.hpp"
#include "afrelay/special_functions.hpp"

namespace afrelay::analytics {

namespace {

constexpr double kClampWarnThreshold = 1e-9;

thread_local ClampStats tl_clamp_stats;

double clamp_unit(double v, const char* what) {
    const double excess = std::max(-v, v - 1.0);
    if (excess <= 0.0) return v;
    tl_clamp_stats.events += 1;
    tl_clamp_stats.max_excess = std::max(tl_clamp_stats.max_excess, excess);
    if (excess > kClampWarnThreshold)
        std::fprintf(stderr, "afrelay: %s clamped to [0,1] by %.3e\n", what, excess);
    return std::clamp(v, 0.0, 1.0);
}

void check_nonnegative(const char* fn, double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(fn) + ": argument must be nonnegative and finite");
}

void check_snr(const char* fn, double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::domain_error(std::string(fn) + ": snr must be positive and finite");
}

double harmonic_hop_mean(const channel::LinkMeans& means) {
    return 1.0 / (1.0 / means.mu_sr + 1.0 / means.mu_rd);
}

// 15-point Kronrod nodes (positive half) with the embedded 7-point Gauss rule.
// Standard QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
};

double eval_checked(const std::function<double(double)>& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y))
        throw std::domain_error("integrate_adaptive: integrand is not finite at x = " +
                                std::to_string(x));
    return y;
}

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv[15];
    fv[7] = eval_checked(f, center);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j] = eval_checked(f, center - dx);
        fv[14 - j] = eval_checked(f, center + dx);
    }
    double resk = kWgk[7] * fv[7];
    double resabs = std::abs(resk);
    double resg = kWg[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
        resk += kWgk[j] * (fv[j] + fv[14 - j]);
        resabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
        if (j % 2 == 1) resg += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fv[7] - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[14 - j] - reskh));
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    if (resabs > tiny)
        err = std::max(err, std::numeric_limits<double>::epsilon() * 50.0 * resabs);
    return {a, b, resk * half, err};
}

QuadratureSpec halved(const QuadratureSpec& spec) {
    return {0.5 * spec.abs_tol, 0.5 * spec.rel_tol, spec.max_subdivisions};
}

}  // namespace

quadrature_error::quadrature_error(double best_estimate, double error_bound)
    : std::runtime_error("integrate_adaptive: tolerance not reached within max_subdivisions"),
      best_estimate_(best_estimate),
      error_bound_(error_bound) {}

void validate(const OutageQuery& query) {
    channel::validate(query.means);
    check_snr("OutageQuery", query.snr);
    check_nonnegative("OutageQuery", query.mu_th);
}

void validate(const QuadratureSpec& spec) {
    if (!(spec.abs_tol >= 0.0) || !(spec.rel_tol >= 0.0))
        throw std::invalid_argument("QuadratureSpec: tolerances must be nonnegative");
    if (!(spec.abs_tol > 0.0) && !(spec.rel_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: at least one tolerance must be positive");
    if (spec.max_subdivisions < 10)
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 10");
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec) {
    validate(spec);
    if (!(a <= b)) throw std::domain_error("integrate_adaptive: requires a <= b");
    if (a == b) return {0.0, 0.0};

    std::vector<Segment> segments;
    segments.reserve(64);
    segments.push_back(gk15(f, a, b));
    for (;;) {
        double total = 0.0;
        double err = 0.0;
        for (const Segment& s : segments) {
            total += s.value;
            err += s.error;
        }
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) return {total, err};
        if (segments.size() >= static_cast<std::size_t>(spec.max_subdivisions))
            throw quadrature_error(total, err);
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segments.size(); ++i)
            if (segments[i].error > segments[worst].error) worst = i;
        const Segment seg = segments[worst];
        const double mid = 0.5 * (seg.a + seg.b);
        segments[worst] = gk15(f, seg.a, mid);
        segments.push_back(gk15(f, mid, seg.b));
    }
}

double cdf_relay_min2(double mu, const channel::LinkMeans& means) {
    channel::validate(means);
    check_nonnegative("cdf_relay_min2", mu);
    return dist::min2_exp_cdf(mu, {means.mu_sr}, {means.mu_rd});
}

double cdf_af_min2(double mu, const channel::LinkMeans& means) {
    channel::validate(means);
    check_nonnegative("cdf_af_min2", mu);
    return dist::sum2_exp_cdf(mu, {means.mu_sd}, {harmonic_hop_mean(means)});
}

double outage_min2(const OutageQuery& query) {
    validate(query);
    return cdf_af_min2(query.mu_th, query.means);
}

double cdf_relay_min3(double mu, const channel::LinkMeans& means, double snr) {
    channel::validate(means);
    check_nonnegative("cdf_relay_min3", mu);
    check_snr("cdf_relay_min3", snr);
    const double m_r = harmonic_hop_mean(means);
    const double t = 2.0 * std::sqrt(mu / (snr * means.mu_sr * means.mu_rd));
    // 1 - e^{-mu/M_r} t K1(t) rearranged as (1 - e^{-mu/M_r}) + e^{-mu/M_r} (1 - t K1(t)),
    // both terms nonnegative, so no cancellation near 0.
    const double survival_scale = std::exp(-mu / m_r);
    const double f = dist::one_minus_exp(mu / m_r) +
                     survival_scale * special::x_k1_complement(t);
    return clamp_unit(f, "cdf_relay_min3");
}

double cdf_af_min3(double mu, const channel::LinkMeans& means, double snr,
                   const QuadratureSpec& quad) {
    channel::validate(means);
    check_nonnegative("cdf_af_min3", mu);
    check_snr("cdf_af_min3", snr);
    validate(quad);
    if (mu == 0.0) return 0.0;

    const double m_r = harmonic_hop_mean(means);
    const double t_scale = 1.0 / (snr * means.mu_sr * means.mu_rd);
    // The e^{-mu/mu_sd} prefactor is folded into the integrand, whose
    // exponent -((mu - y)/mu_sd + y/M_r) then never goes positive; the raw
    // e^{-y (1/M_r - 1/mu_sd)} form overflows when mu_sd << mu.
    const auto integrand = [&](double y) {
        const double t = 2.0 * std::sqrt(y * t_scale);
        return std::exp(-((mu - y) / means.mu_sd + y / m_r)) *
               (1.0 - special::x_k1_complement(t));
    };

    // The integrand's derivative has a log singularity at y = 0; substituting
    // y = w^2 on an initial subinterval keeps the subdivision count bounded.
    const double y0 = std::min(mu, 0.01 * m_r * snr * means.mu_sr * means.mu_rd);
    const QuadratureSpec part = halved(quad);
    double scaled_integral = 0.0;
    if (y0 > 0.0) {
        const auto squared = [&](double w) { return 2.0 * w * integrand(w * w); };
        const QuadratureResult head = integrate_adaptive(squared, 0.0, std::sqrt(y0), part);
        scaled_integral += head.value;
    }
    if (mu > y0) {
        const QuadratureResult tail = integrate_adaptive(integrand, y0, mu, part);
        scaled_integral += tail.value;
    }

    const double f = dist::one_minus_exp(mu / means.mu_sd) - scaled_integral / means.mu_sd;
    return clamp_unit(f, "cdf_af_min3");
}

double outage_min3(const OutageQuery& query, const QuadratureSpec& quad) {
    validate(query);
    return cdf_af_min3(query.mu_th, query.means, query.snr, quad);
}

double outage_cutset(const OutageQuery& query) {
    validate(query);
    // 1 - S_sr S_rd == F_sr + F_rd - F_sr F_rd with F the cdf of each
    // two-exponential sum; this form is stable when both survivals are near 1.
    const double f_sr =
        dist::sum2_exp_cdf(query.mu_th, {query.means.mu_sd}, {query.means.mu_sr});
    const double f_rd =
        dist::sum2_exp_cdf(query.mu_th, {query.means.mu_sd}, {query.means.mu_rd});
    return clamp_unit(f_sr + f_rd - f_sr * f_rd, "outage_cutset");
}

ClampStats clamp_stats() { return tl_clamp_stats; }

void reset_clamp_stats() { tl_clamp_stats = {}; }

}  // namespace afrelay::analytics
