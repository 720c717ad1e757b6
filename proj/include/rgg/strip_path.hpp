#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "rgg/constants.hpp"
#include "rgg/spatial_graph.hpp"

namespace rgg {

struct ChainEntry {
    static constexpr std::int64_t kSynthetic = -1;

    std::int64_t vertex = kSynthetic;  // graph index, or kSynthetic
    double x = 0.0;                    // strip-frame x after this step
    double a = 0.0;                    // shortfall of this step

    bool synthetic() const { return vertex == kSynthetic; }
};

// One run of a rightmost-vertex chain. Invariants: x_i = x_{i-1} + rho - a_i
// with x_0 = a_0 = 0, and 0 <= a_i <= rho - a_{i-1}; consecutive step
// rectangles share only an endpoint, so they are disjoint.
struct ChainRecord {
    std::int64_t hop_budget = 0;
    double alpha = 0.0;
    double rho = 0.0;  // r for the certificate chain, r - alpha^2/r for greedy
    std::vector<ChainEntry> entries;
};

enum class StripPathStatus { success, failed_synthetic, failed_short };

const char* strip_path_status_name(StripPathStatus s);

struct StripPathResult {
    StripPathStatus status = StripPathStatus::failed_short;
    std::vector<std::uint32_t> path;  // u ... v on success
    std::int32_t hops = 0;
    ChainRecord chain;
    double delta_used = 0.0;
    double alpha_used = 0.0;
};

// alpha = B delta^(1/2) r^(1/3); requires J <= delta <= F r^(4/3), which
// keeps alpha < r.
double choose_alpha(double delta, double r, const ProofConstants& consts);

// max(J, gamma(n, r, t)) clamped into [J, F r^(4/3)]. Throws when the range
// is empty (J > F r^(4/3)); lower J via ProofConstants::with_delta_reach for
// radii below the regime.
double default_delta(double n, double r, double t, const ProofConstants& consts);

// Greedy one-sided strip path from u to v. Walks rectangles
// R'_i = (x_{i-1}+a_{i-1}, x_{i-1}+rho] x [0, alpha] in the strip frame,
// taking the rightmost vertex of each; an empty rectangle records a
// synthetic entry (bookkeeping only — a run with any synthetic entry cannot
// succeed). Succeeds as soon as x_j + rho >= t, appending v; budget
// k = ceil((t/r)(1 + delta r^(-4/3))). t <= r short-circuits to the direct
// one-hop path.
StripPathResult greedy_strip_path(const GeoGraph& g, const StripPlacement& placement,
                                  std::uint32_t u, std::uint32_t v, double delta,
                                  const ProofConstants& consts);

struct ChainCertificate {
    ChainRecord chain;
    bool certified = false;  // x_k < t
};

// Rightmost-vertex chain on the two-sided strip [0,t] x [-alpha,alpha] with
// step length r. If certified and strip_precondition(t, k, r, alpha) holds,
// then no u-v path of at most k hops exists. The labelled endpoints are
// pinned to exact strip coordinates (0,0) and (t,0), and selection bounds
// carry a 1e-9 inclusion slack, so rounding can only withhold a certificate,
// never grant a false one.
ChainCertificate lower_chain_certificate(const GeoGraph& g, const StripPlacement& placement,
                                         std::uint32_t u, std::uint32_t v, std::int64_t k);

// sqrt(delta/2) (k^3 r^2 / t)^(1/3) with delta = 1/2: the certificate-chain
// strip half-width used when the caller has no better choice.
double default_chain_alpha(std::int64_t k, double r, double t);

// Empirical survival curve of the first-step shortfall a_1 against
// exp(-2 alpha beta) (truncated at r), over Poissonized instances with u
// pinned at the origin.
struct ShortfallCurve {
    double alpha = 0.0;
    double r = 0.0;
    std::int64_t trials = 0;
    std::vector<double> beta;
    std::vector<double> empirical;
    std::vector<double> ci_radius;  // 3 sigma binomial
    std::vector<double> analytic;
};

ShortfallCurve empirical_shortfall_law(std::int64_t n, double r, double alpha,
                                       const std::vector<double>& beta_grid,
                                       std::int64_t trials, SeedSpec seed);

nlohmann::json to_json(const StripPathResult& res);

}  // namespace rgg
