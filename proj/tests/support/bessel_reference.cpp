#include "support/bessel_reference.hpp"

#include <quadmath.h>

#include <stdexcept>

namespace afrelay_test {

namespace {

using quad = __float128;

// Euler-Mascheroni constant to quad precision.
const quad kGamma = strtoflt128("0.57721566490153286060651209008240243104", nullptr);
const quad kPi = strtoflt128("3.14159265358979323846264338327950288419", nullptr);

// Quad cancellation in the ascending series grows like e^{2x}; the
// asymptotic series bottoms out near e^{-2x}. Both are beyond 1e-16 at 19.
constexpr double kSeriesAsymptoticSplit = 19.0;

struct SeriesK {
    quad k0;
    quad k1;
};

// Ascending series for both orders at once:
//   I0 = sum q^k/(k!)^2,                 S0 = sum H_k q^k/(k!)^2
//   B  = sum q^k/(k!(k+1)!),             C  = sum (2H_k + 1/(k+1) - 2g) q^k/(k!(k+1)!)
//   K0 = -(ln(x/2)+g) I0 + S0
//   K1 = 1/x + ln(x/2)(x/2) B - (x/4) C
SeriesK series_k01(quad x) {
    const quad q = x * x / 4;
    quad t0 = 1;  // q^k/(k!)^2
    quad t1 = 1;  // q^k/(k!(k+1)!)
    quad harmonic = 0;
    quad i0 = 1;
    quad s0 = 0;
    quad b = 1;
    quad c = 1 - 2 * kGamma;
    for (int k = 1; k < 400; ++k) {
        t0 *= q / ((quad)k * k);
        t1 *= q / ((quad)k * (k + 1));
        harmonic += quad(1) / k;
        i0 += t0;
        s0 += harmonic * t0;
        b += t1;
        c += t1 * (2 * harmonic + quad(1) / (k + 1) - 2 * kGamma);
        if (t0 * (harmonic + 1) < 1e-40Q * i0) break;
    }
    const quad log_half_x = logq(x / 2);
    SeriesK out;
    out.k0 = -(log_half_x + kGamma) * i0 + s0;
    out.k1 = 1 / x + log_half_x * (x / 2) * b - (x / 4) * c;
    return out;
}

// Large-argument series K_nu(x) ~ sqrt(pi/(2x)) e^{-x} sum a_k(nu)/x^k with
// a_0 = 1 and a_{k+1} = a_k (4 nu^2 - (2k+1)^2) / (8(k+1)); truncated at the
// smallest term.
quad asymptotic_k(int nu, quad x) {
    const quad four_nu2 = 4 * quad(nu) * nu;
    quad term = 1;
    quad sum = 1;
    quad prev_mag = 1e40Q;
    for (int k = 0; k < 200; ++k) {
        const quad step = (four_nu2 - (2 * quad(k) + 1) * (2 * quad(k) + 1)) / (8 * (quad(k) + 1));
        term *= step / x;
        const quad mag = fabsq(term);
        if (mag >= prev_mag) break;  // divergent tail reached
        sum += term;
        prev_mag = mag;
        if (mag < 1e-40Q * fabsq(sum)) break;
    }
    return sqrtq(kPi / (2 * x)) * expq(-x) * sum;
}

quad ref_k(int nu, double xd) {
    if (!(xd > 0.0)) throw std::domain_error("ref_k: x must be positive");
    const quad x = xd;
    if (xd <= kSeriesAsymptoticSplit) {
        const SeriesK s = series_k01(x);
        return nu == 0 ? s.k0 : s.k1;
    }
    return asymptotic_k(nu, x);
}

}  // namespace

long double ref_k0(double x) { return static_cast<long double>(ref_k(0, x)); }

long double ref_k1(double x) { return static_cast<long double>(ref_k(1, x)); }

long double ref_x_k1_complement(double x) {
    if (x == 0.0) return 0.0L;
    const quad xx = x;
    return static_cast<long double>(1 - xx * ref_k(1, x));
}

}  // namespace afrelay_test
