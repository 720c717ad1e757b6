#pragma once

#include <cstdint>

#include "rgg/constants.hpp"
#include "rgg/rng.hpp"

namespace rgg {

// A probability carried in log space. Values below exp(-700) underflow the
// double representation; the log value stays exact.
struct LogProb {
    double log_value = 0.0;

    double value() const {
        const double v = std::exp(log_value);
        return v > 1.0 ? 1.0 : v;
    }
    bool underflow() const { return log_value < -700.0; }
};

// Pr(X >= (1+delta) E[X]) <= ((1+delta)/e^delta)^N for a sum X of N i.i.d.
// exponentials; any delta > 0.
LogProb upper_tail_bound(std::int64_t n_summands, double delta);

// Pr(X <= (1-delta) E[X]) <= ((1-delta) e^delta)^N; 0 < delta < 1.
LogProb lower_tail_bound(std::int64_t n_summands, double delta);

// g(x) = x - log(1+x); x > -1.
double g_function(double x);

struct TailQuery {
    enum class Side { upper, lower };

    std::int64_t n_summands = 1;
    double delta = 0.5;
    double rate = 1.0;
    Side side = Side::upper;
};

struct TailCheckResult {
    double analytic_bound = 0.0;
    double analytic_log = 0.0;
    double empirical = 0.0;
    std::int64_t trials = 0;
    double ci_radius = 0.0;  // 3 sigma binomial
    bool pass = false;       // empirical <= analytic + ci_radius
};

TailCheckResult monte_carlo_tail(const TailQuery& query, std::int64_t trials, SeedSpec seed);

// Two-term failure bounds for the strip-path constructions, evaluated in log
// space.
struct FailureBound {
    double log_term_points = 0.0;  // chance some step rectangle is empty
    double log_term_sum = 0.0;     // chance the shortfall sum is too large
    double log_total = 0.0;
    bool underflow = false;

    double value() const {
        const double v = std::exp(log_total);
        return v > 1.0 ? 1.0 : v;
    }
};

// n exp(-(F+1) delta^(1/2) r^(4/3) / (2 J^(3/2))) + exp(-g((delta/J)^(3/2)) t/r),
// for J <= delta <= F r^(4/3).
FailureBound failure_probability_upper(double t, double r, double n, double delta,
                                       const ProofConstants& consts);

// (t/r) exp(-sqrt(delta/2) (t r)^(2/3)) + exp(-(1-sqrt(2 delta^3))^2 t/(2r)),
// for 0 < delta < 2^(-1/3).
FailureBound failure_probability_lower(double t, double r, double delta);

}  // namespace rgg
