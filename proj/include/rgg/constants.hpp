#pragma once

#include <cmath>
#include <stdexcept>

namespace rgg {

// Constants of the short-path construction. Defaults are the published
// values; all fields may be overridden. With the defaults, 3^(2/3)*j equals
// 300^(2/3), the constant branch of the hop-bound coefficient.
struct ProofConstants {
    double b = 47.0 / 50.0;
    double c = 1e-2;
    double f = 23.0 / 200.0;
    double d = 70.0;  // mirrors the polylog branch coefficient
    double e = 31.0;  // mirrors the log branch coefficient
    double j = 21.544346900318832;  // 10^(4/3)

    // Smallest/largest admissible delta for the greedy construction.
    double delta_min() const { return j; }
    double delta_max(double r) const { return f * std::pow(r, 4.0 / 3.0); }

    // Hard feasibility checks; throws on violation.
    void validate() const {
        if (!(b > 0.0) || !(c > 0.0) || !(f > 0.0) || !(d > 0.0) || !(e > 0.0) || !(j > 0.0))
            throw std::invalid_argument("ProofConstants: all constants must be > 0");
        if (b * b + c / b > 1.0 / (f + 1.0))
            throw std::invalid_argument("ProofConstants: B^2 + C/B <= 1/(F+1) violated");
    }

    // True when j satisfies the relations the failure-probability derivation
    // needs (j > 3(F+1)/2^(2/3) and c = 1/j^(3/2)). Desk-scale runs may
    // lower j below this regime to make the delta range non-empty.
    bool paper_regime() const {
        return j > 3.0 * (f + 1.0) / std::pow(2.0, 2.0 / 3.0) &&
               std::fabs(c * std::pow(j, 1.5) - 1.0) <= 1e-9;
    }

    // Copy with j lowered so that delta_value is admissible at radius r.
    ProofConstants with_delta_reach(double delta_value, double r) const {
        ProofConstants k = *this;
        k.j = std::min({k.j, delta_value, delta_max(r)});
        return k;
    }
};

}  // namespace rgg
