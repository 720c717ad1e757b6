#include "rgg/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rgg {

namespace {

double log_sum_exp(double a, double b) {
    const double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

LogProb upper_tail_bound(std::int64_t n_summands, double delta) {
    if (n_summands < 1) throw std::invalid_argument("upper_tail_bound: N must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("upper_tail_bound: delta must be > 0");
    const double per = std::log1p(delta) - delta;  // <= 0
    return {static_cast<double>(n_summands) * per};
}

LogProb lower_tail_bound(std::int64_t n_summands, double delta) {
    if (n_summands < 1) throw std::invalid_argument("lower_tail_bound: N must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("lower_tail_bound: delta must be in (0,1)");
    const double per = std::log1p(-delta) + delta;  // <= 0
    return {static_cast<double>(n_summands) * per};
}

double g_function(double x) {
    if (!(x > -1.0)) throw std::invalid_argument("g_function: x must be > -1");
    return x - std::log1p(x);
}

TailCheckResult monte_carlo_tail(const TailQuery& query, std::int64_t trials, SeedSpec seed) {
    if (trials < 1000) throw std::invalid_argument("monte_carlo_tail: trials must be >= 1000");
    if (!(query.rate > 0.0)) throw std::invalid_argument("monte_carlo_tail: rate must be > 0");
    const LogProb bound = query.side == TailQuery::Side::upper
                              ? upper_tail_bound(query.n_summands, query.delta)
                              : lower_tail_bound(query.n_summands, query.delta);
    const double mean = static_cast<double>(query.n_summands) / query.rate;
    const double threshold = query.side == TailQuery::Side::upper
                                 ? (1.0 + query.delta) * mean
                                 : (1.0 - query.delta) * mean;
    Rng rng(seed);
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        double sum = 0.0;
        for (std::int64_t i = 0; i < query.n_summands; ++i)
            sum += rng.exponential(query.rate);
        const bool hit = query.side == TailQuery::Side::upper ? sum >= threshold
                                                              : sum <= threshold;
        if (hit) ++hits;
    }
    TailCheckResult res;
    res.analytic_log = bound.log_value;
    res.analytic_bound = bound.value();
    res.trials = trials;
    res.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    res.ci_radius = 3.0 * std::sqrt(res.empirical * (1.0 - res.empirical) /
                                    static_cast<double>(trials));
    res.pass = res.empirical <= res.analytic_bound + res.ci_radius;
    return res;
}

FailureBound failure_probability_upper(double t, double r, double n, double delta,
                                       const ProofConstants& consts) {
    consts.validate();
    if (!(t > 0.0) || !(r > 0.0) || !(n >= 1.0))
        throw std::invalid_argument("failure_probability_upper: need t, r > 0 and n >= 1");
    if (delta < consts.delta_min() || delta > consts.delta_max(r))
        throw std::invalid_argument(
            "failure_probability_upper: delta outside [J, F r^(4/3)]");
    FailureBound fb;
    fb.log_term_points = std::log(n) - (consts.f + 1.0) * std::sqrt(delta) *
                                           std::pow(r, 4.0 / 3.0) /
                                           (2.0 * std::pow(consts.j, 1.5));
    fb.log_term_sum = -g_function(std::pow(delta / consts.j, 1.5)) * t / r;
    fb.log_total = log_sum_exp(fb.log_term_points, fb.log_term_sum);
    fb.underflow = fb.log_total < -700.0;
    return fb;
}

FailureBound failure_probability_lower(double t, double r, double delta) {
    if (!(t > 0.0) || !(r > 0.0))
        throw std::invalid_argument("failure_probability_lower: need t, r > 0");
    if (!(delta > 0.0 && delta < std::pow(2.0, -1.0 / 3.0)))
        throw std::invalid_argument(
            "failure_probability_lower: delta must be in (0, 2^(-1/3))");
    FailureBound fb;
    fb.log_term_points =
        std::log(t / r) - std::sqrt(delta / 2.0) * std::pow(t * r, 2.0 / 3.0);
    const double s = 1.0 - std::sqrt(2.0 * delta * delta * delta);
    fb.log_term_sum = -s * s * t / (2.0 * r);
    fb.log_total = log_sum_exp(fb.log_term_points, fb.log_term_sum);
    fb.underflow = fb.log_total < -700.0;
    return fb;
}

}  // namespace rgg
