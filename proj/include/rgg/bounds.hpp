#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

namespace rgg {

struct BoundParams {
    double n = 0.0;    // point count / area
    double r = 0.0;    // radius
    double d_e = 0.0;  // Euclidean distance of the pair
};

// The three branches of the hop-bound error coefficient and their max.
struct GammaBreakdown {
    double term_log = 0.0;    // 31 * (2 r log n / (r + d_E))^(2/3)
    double term_poly = 0.0;   // 70 * log^2 n / r^(8/3)
    double term_const = 0.0;  // 300^(2/3)
    double gamma = 0.0;
};

struct HopLowerBound {
    double value = 0.0;       // (d_E/r) * (1 + 1/(2 (r d_E)^(2/3)))
    bool applicable = false;  // d_E >= 20 r log n
};

struct HopUpperBound {
    std::int64_t value = 0;   // ceil of raw
    double raw = 0.0;         // (d_E/r) * (1 + gamma r^(-4/3))
    bool applicable = false;  // r >= 70 sqrt(log n)
};

struct DiameterBoundValue {
    double value = 0.0;
    std::int64_t ceil_value = 0;
    bool applicable = false;  // r >= 70 sqrt(log n)
    GammaBreakdown gamma;     // evaluated at d_E = sqrt(2n)
};

// Evaluated bounds for one observed pair.
struct BoundReport {
    BoundParams params;
    std::int32_t d_g = 0;
    GammaBreakdown gamma;
    HopLowerBound lower;
    HopUpperBound upper;
    std::optional<bool> lower_satisfied;  // set only when applicable
    std::optional<bool> upper_satisfied;
};

// sqrt(log n / pi), natural log; n > 1.
double connectivity_threshold(double n);

GammaBreakdown gamma_coefficient(const BoundParams& p);
HopLowerBound lower_bound_hops(const BoundParams& p);
HopUpperBound upper_bound_hops(const BoundParams& p);

// Diameter bound (sqrt(2n)/r) * (1 + gamma r^(-4/3)) with gamma at the
// diagonal distance sqrt(2n) (the conservative choice: gamma is
// non-increasing in d_E).
DiameterBoundValue diameter_bound(double n, double r);

// Comparison curve (sqrt(2n)/r) * (1 + c sqrt(loglog n / log n)); the
// constant c is a caller parameter. Requires n >= 16.
double reference_prior_diameter(double n, double r, double c);

BoundReport evaluate_pair(const BoundParams& p, std::int32_t d_g_observed);

nlohmann::json to_json(const BoundReport& rep);

}  // namespace rgg
