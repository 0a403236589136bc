#pragma once

namespace afrelay::special {

/// Evaluation policy for the modified Bessel functions of the second kind.
///
/// Below the crossover the ascending series (with its logarithmic term) is
/// summed directly; above it the exponentially scaled functions e^x K0(x),
/// e^x K1(x) are evaluated from their large-argument (confluent
/// hypergeometric) representation and unscaled afterwards. Arguments at or
/// beyond underflow_argument are flushed to exactly zero.
///
/// Both branches hold full accuracy on the overlap x in [0.5, 4], so the
/// crossover is a tunable within that window; outside it one side degrades
/// (series cancellation above, continued-fraction convergence below).
struct BesselEvalPolicy {
    double target_rel_err = 1e-13;
    double series_to_asymptotic_crossover = 2.0;
    double underflow_argument = 700.0;
};

/// Throws std::invalid_argument if the policy violates its invariants
/// (target_rel_err in (0, 1e-10], positive crossover and underflow argument).
void validate(const BesselEvalPolicy& policy);

/// K0(x) for x > 0. Strictly decreasing; 0 for x >= underflow_argument.
double bessel_k0(double x, const BesselEvalPolicy& policy = {});

/// K1(x) for x > 0. Strictly decreasing; K1(x) > K0(x) everywhere.
double bessel_k1(double x, const BesselEvalPolicy& policy = {});

/// 1 - x*K1(x) for x >= 0, in [0, 1] and increasing.
///
/// Direct subtraction loses all significant digits below x ~ 1e-4, so a
/// dedicated small-argument series takes over below an internal cutoff.
double x_k1_complement(double x, const BesselEvalPolicy& policy = {});

}  // namespace afrelay::special
