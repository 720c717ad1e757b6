#include <doctest.h>

#include <cmath>
#include <limits>

#include "rgg/concentration.hpp"

using namespace rgg;

TEST_CASE("upper_tail_bound") {
    CHECK(upper_tail_bound(50, 0.5).value() ==
          doctest::Approx(0.0088552516020668649).epsilon(1e-12));
    CHECK(upper_tail_bound(10, 1e-12).value() == doctest::Approx(1.0).epsilon(1e-9));
    double prev = 1.0;
    for (const std::int64_t n : {1, 5, 25, 125, 625}) {
        const double v = upper_tail_bound(n, 0.5).value();
        CHECK(v < prev);  // strictly decreasing in N
        prev = v;
    }
    CHECK_THROWS_AS(upper_tail_bound(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(upper_tail_bound(5, 0.0), std::invalid_argument);
}

TEST_CASE("lower_tail_bound") {
    CHECK(lower_tail_bound(100, 0.3).value() ==
          doctest::Approx(0.0034565151004642939).epsilon(1e-12));
    CHECK(lower_tail_bound(10, 1e-12).value() == doctest::Approx(1.0).epsilon(1e-9));
    // per-summand base is tighter than the upper tail at delta = 0.3
    CHECK(lower_tail_bound(1, 0.3).value() < upper_tail_bound(1, 0.3).value());
    CHECK_THROWS_AS(lower_tail_bound(5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lower_tail_bound(5, -0.1), std::invalid_argument);
}

TEST_CASE("g_function") {
    CHECK(g_function(0.0) == 0.0);
    CHECK(g_function(3.0) == doctest::Approx(1.6137056388801094).epsilon(1e-12));
    for (double x = 3.0; x <= 500.0; x += 0.37) CHECK(g_function(x) >= x / 2.0);
    for (double x = -0.99; x <= 10.0; x += 0.173)
        if (std::fabs(x) > 1e-12) CHECK(g_function(x) > 0.0);
    CHECK_THROWS_AS(g_function(-1.0), std::invalid_argument);
}

TEST_CASE("monte_carlo_tail against analytic bounds") {
    TailQuery q;
    q.n_summands = 50;
    q.delta = 0.5;
    q.rate = 1.0;
    q.side = TailQuery::Side::upper;
    const TailCheckResult res = monte_carlo_tail(q, 20000, {1234, 0});
    CHECK(res.pass);
    CHECK(res.analytic_bound == doctest::Approx(0.0088552516020668649).epsilon(1e-12));
    CHECK(res.trials == 20000);
    CHECK(res.empirical >= 0.0);
    CHECK(res.empirical <= 1.0);

    q.side = TailQuery::Side::lower;
    CHECK(monte_carlo_tail(q, 20000, {1235, 0}).pass);
    CHECK_THROWS_AS(monte_carlo_tail(q, 10, {1, 0}), std::invalid_argument);
}

TEST_CASE("single exponential, delta = 1: exact tail known") {
    TailQuery q;
    q.n_summands = 1;
    q.delta = 1.0;
    q.rate = 3.0;
    q.side = TailQuery::Side::upper;
    const TailCheckResult res = monte_carlo_tail(q, 100000, {77, 0});
    // Pr(X >= 2 E[X]) = e^{-2}; the analytic bound is 2/e
    CHECK(res.analytic_bound == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-12));
    CHECK(std::fabs(res.empirical - std::exp(-2.0)) <= 3.0 * std::sqrt(0.14 * 0.86 / 100000.0));
    CHECK(res.pass);
}

TEST_CASE("tail frequency is rate-invariant") {
    TailQuery a;
    a.n_summands = 20;
    a.delta = 0.4;
    a.rate = 1.0;
    a.side = TailQuery::Side::upper;
    TailQuery b = a;
    b.rate = 7.0;
    const std::int64_t trials = 50000;
    const TailCheckResult ra = monte_carlo_tail(a, trials, {5, 0});
    const TailCheckResult rb = monte_carlo_tail(b, trials, {6, 0});
    const double p = 0.5 * (ra.empirical + rb.empirical);
    const double sigma = std::sqrt(2.0 * p * (1.0 - p) / static_cast<double>(trials));
    CHECK(std::fabs(ra.empirical - rb.empirical) <= 4.0 * sigma + 1e-9);
}

TEST_CASE("failure_probability_upper matches an independent plug-in") {
    const ProofConstants k;
    const double t = 1414.21, r = 260.17, n = 1e6, delta = 81.9;
    const FailureBound fb = failure_probability_upper(t, r, n, delta, k);

    const long double rl = r, tl = t, dl = delta;
    const long double term1 =
        logl(static_cast<long double>(n)) -
        (static_cast<long double>(k.f) + 1.0L) * sqrtl(dl) * powl(rl, 4.0L / 3.0L) /
            (2.0L * powl(static_cast<long double>(k.j), 1.5L));
    const long double x = powl(dl / static_cast<long double>(k.j), 1.5L);
    const long double term2 = -(x - logl(1.0L + x)) * tl / rl;
    CHECK(fb.log_term_points == doctest::Approx(static_cast<double>(term1)).epsilon(1e-9));
    CHECK(fb.log_term_sum == doctest::Approx(static_cast<double>(term2)).epsilon(1e-9));
    CHECK(fb.value() ==
          doctest::Approx(static_cast<double>(expl(term1) + expl(term2))).epsilon(1e-9));
    CHECK_FALSE(fb.underflow);

    // monotone decreasing in delta across the admissible range
    double prev = std::numeric_limits<double>::infinity();
    for (double d = k.delta_min(); d <= k.delta_max(r); d *= 1.2) {
        const double v = failure_probability_upper(t, r, n, d, k).log_total;
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(failure_probability_upper(t, r, n, k.delta_min() * 0.5, k),
                    std::invalid_argument);
    CHECK_THROWS_AS(failure_probability_upper(t, r, n, k.delta_max(r) * 1.01, k),
                    std::invalid_argument);
}

TEST_CASE("failure_probability_upper underflow path") {
    const ProofConstants k;
    const double r = 2000.0;
    const FailureBound fb =
        failure_probability_upper(5e4, r, 1e6, k.delta_max(r) * 0.9, k);
    CHECK(fb.underflow);
    CHECK(fb.log_total < -700.0);
    CHECK(fb.value() == 0.0);  // representation boundary only
}

TEST_CASE("failure_probability_lower at the boundary t = 20 r log n") {
    const double n = 1e6, r = 2.097;
    const double t = 20.0 * r * std::log(n);
    const FailureBound fb = failure_probability_lower(t, r, 0.5);
    // the second exponent collapses to exactly (5/2) log n; r cancels
    CHECK(fb.log_term_sum == doctest::Approx(-2.5 * std::log(n)).epsilon(1e-12));
    CHECK(fb.log_term_points < fb.log_term_sum - 15.0);
    CHECK(fb.value() <= std::pow(n, -2.5) * (1.0 + 1e-6));
    CHECK(fb.value() >= std::pow(n, -2.5) * (1.0 - 1e-9));

    // t/r -> infinity drives the bound to zero
    CHECK(failure_probability_lower(1e6 * r, r, 0.5).log_total <
          failure_probability_lower(1e3 * r, r, 0.5).log_total);

    // delta near 2^(-1/3): the sum term degrades to order one
    const double near = std::pow(2.0, -1.0 / 3.0) - 1e-6;
    CHECK(failure_probability_lower(10.0 * r, r, near).value() > 0.5);

    CHECK_THROWS_AS(failure_probability_lower(t, r, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(failure_probability_lower(t, r, 0.7938), std::invalid_argument);
}

TEST_CASE("analytic bounds stay within [0, 1]") {
    for (const std::int64_t n : {1, 10, 200})
        for (const double d : {1e-9, 0.1, 0.9, 5.0}) {
            CHECK(upper_tail_bound(n, d).value() <= 1.0);
            CHECK(upper_tail_bound(n, d).value() >= 0.0);
            if (d < 1.0) {
                CHECK(lower_tail_bound(n, d).value() <= 1.0);
                CHECK(lower_tail_bound(n, d).value() >= 0.0);
            }
        }
    // vacuous parameter corner: value clamps at the representation boundary 1
    const ProofConstants k;
    const FailureBound vac = failure_probability_upper(1.0, 60.0, 1e12, k.delta_min(), k);
    CHECK(vac.value() <= 1.0);
}
