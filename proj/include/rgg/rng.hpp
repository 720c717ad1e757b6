#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace rgg {

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Master seed plus trial index. The per-trial substream seed is
// mix64(master ^ mix64(trial+1)); distinct trial indices give independent
// streams, so trials may run concurrently.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;

    std::uint64_t substream() const noexcept {
        return mix64(master_seed ^ mix64(trial_index + 1));
    }
    SeedSpec trial(std::uint64_t idx) const noexcept { return {master_seed, idx}; }
    // Independent child stream for a named purpose within one trial.
    std::uint64_t child(std::uint64_t tag) const noexcept {
        return mix64(substream() ^ mix64(tag ^ 0xa076bc9d10a83fd5ULL));
    }
};

// mt19937_64 engine (bit-exact per the standard) with pinned variate
// transforms. std::* distributions are implementation-defined, so they are
// not used anywhere results must reproduce.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    explicit Rng(const SeedSpec& s) : eng_(s.substream()) {}

    std::uint64_t next() { return eng_(); }

    // Uniform on [0,1), 53-bit mantissa.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1); never returns an endpoint.
    double open01() { return (static_cast<double>(eng_() >> 12) + 0.5) * 0x1.0p-52; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // Exp(rate); strictly positive.
    double exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
        return -std::log(open01()) / rate;
    }

    // Unbiased integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("below: bound must be > 0");
        const std::uint64_t lim = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do { x = eng_(); } while (x >= lim);
        return x % bound;
    }

    // Poisson(mean): inversion for small means, Hörmann PTRS otherwise.
    std::int64_t poisson(double mean) {
        if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        return mean < 10.0 ? poisson_inversion(mean) : poisson_ptrs(mean);
    }

  private:
    std::int64_t poisson_inversion(double mean) {
        const double limit = std::exp(-mean);
        std::int64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    std::int64_t poisson_ptrs(double mean) {
        const double slam = std::sqrt(mean);
        const double loglam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = uniform01() - 0.5;
            const double v = uniform01();
            const double us = 0.5 - std::fabs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (v <= 0.0) continue;
            const double k = kf;
            if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
                k * loglam - mean - log_factorial(static_cast<std::int64_t>(k)))
                return static_cast<std::int64_t>(kf);
        }
    }

    // log(k!) without touching lgamma's global sign state.
    static double log_factorial(std::int64_t k) {
        static const auto table = [] {
            std::array<double, 128> t{};
            t[0] = 0.0;
            for (std::size_t i = 1; i < t.size(); ++i)
                t[i] = t[i - 1] + std::log(static_cast<double>(i));
            return t;
        }();
        if (k < static_cast<std::int64_t>(table.size())) return table[static_cast<std::size_t>(k)];
        const double x = static_cast<double>(k);
        return x * std::log(x) - x + 0.5 * std::log(2.0 * M_PI * x) + 1.0 / (12.0 * x) -
               1.0 / (360.0 * x * x * x);
    }

    std::mt19937_64 eng_;
};

}  // namespace rgg
