#include "rgg/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace rgg {

namespace {

void check_params(const BoundParams& p) {
    if (!(p.n >= 1.0) || !(p.r > 0.0) || !(p.d_e >= 0.0))
        throw std::invalid_argument("BoundParams: need n >= 1, r > 0, d_E >= 0");
}

}  // namespace

double connectivity_threshold(double n) {
    if (!(n > 1.0)) throw std::invalid_argument("connectivity_threshold: n must be > 1");
    return std::sqrt(std::log(n) / M_PI);
}

GammaBreakdown gamma_coefficient(const BoundParams& p) {
    check_params(p);
    const double ln = std::log(p.n);
    GammaBreakdown g;
    g.term_log = 31.0 * std::pow(2.0 * p.r * ln / (p.r + p.d_e), 2.0 / 3.0);
    g.term_poly = 70.0 * ln * ln / std::pow(p.r, 8.0 / 3.0);
    g.term_const = std::pow(300.0, 2.0 / 3.0);
    g.gamma = std::max({g.term_log, g.term_poly, g.term_const});
    return g;
}

HopLowerBound lower_bound_hops(const BoundParams& p) {
    check_params(p);
    HopLowerBound b;
    // Algebraically (d_E/r)(1 + 1/(2 (r d_E)^{2/3})); this form is finite at
    // d_E = 0.
    b.value = p.d_e / p.r + std::cbrt(p.d_e) / (2.0 * std::pow(p.r, 5.0 / 3.0));
    b.applicable = p.d_e >= 20.0 * p.r * std::log(p.n);
    return b;
}

HopUpperBound upper_bound_hops(const BoundParams& p) {
    check_params(p);
    const GammaBreakdown g = gamma_coefficient(p);
    HopUpperBound b;
    b.raw = (p.d_e / p.r) * (1.0 + g.gamma * std::pow(p.r, -4.0 / 3.0));
    b.value = static_cast<std::int64_t>(std::ceil(b.raw));
    b.applicable = p.r >= 70.0 * std::sqrt(std::log(p.n));
    return b;
}

DiameterBoundValue diameter_bound(double n, double r) {
    const double diag = std::sqrt(2.0 * n);
    const BoundParams p{n, r, diag};
    check_params(p);
    DiameterBoundValue d;
    d.gamma = gamma_coefficient(p);
    d.value = (diag / r) * (1.0 + d.gamma.gamma * std::pow(r, -4.0 / 3.0));
    d.ceil_value = static_cast<std::int64_t>(std::ceil(d.value));
    d.applicable = r >= 70.0 * std::sqrt(std::log(n));
    return d;
}

double reference_prior_diameter(double n, double r, double c) {
    if (!(n >= 16.0))
        throw std::invalid_argument("reference_prior_diameter: n must be >= 16");
    if (!(r > 0.0)) throw std::invalid_argument("reference_prior_diameter: r must be > 0");
    const double ln = std::log(n);
    return (std::sqrt(2.0 * n) / r) * (1.0 + c * std::sqrt(std::log(ln) / ln));
}

BoundReport evaluate_pair(const BoundParams& p, std::int32_t d_g_observed) {
    BoundReport rep;
    rep.params = p;
    rep.d_g = d_g_observed;
    rep.gamma = gamma_coefficient(p);
    rep.lower = lower_bound_hops(p);
    rep.upper = upper_bound_hops(p);
    if (rep.lower.applicable) rep.lower_satisfied = d_g_observed >= rep.lower.value;
    if (rep.upper.applicable) rep.upper_satisfied = d_g_observed <= rep.upper.value;
    return rep;
}

nlohmann::json to_json(const BoundReport& rep) {
    nlohmann::json j;
    j["n"] = rep.params.n;
    j["r"] = rep.params.r;
    j["d_E"] = rep.params.d_e;
    j["d_G"] = rep.d_g;
    j["gamma"] = {{"term_log", rep.gamma.term_log},
                  {"term_poly", rep.gamma.term_poly},
                  {"term_const", rep.gamma.term_const}};
    j["lower"] = {{"applicable", rep.lower.applicable},
                  {"value", rep.lower.value},
                  {"satisfied", rep.lower_satisfied ? nlohmann::json(*rep.lower_satisfied)
                                                    : nlohmann::json()}};
    j["upper"] = {{"applicable", rep.upper.applicable},
                  {"value", rep.upper.value},
                  {"satisfied", rep.upper_satisfied ? nlohmann::json(*rep.upper_satisfied)
                                                    : nlohmann::json()}};
    return j;
}

}  // namespace rgg
