#include "rgg/strip_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgg/bounds.hpp"

namespace rgg {

const char* strip_path_status_name(StripPathStatus s) {
    switch (s) {
        case StripPathStatus::success: return "success";
        case StripPathStatus::failed_synthetic: return "failed-synthetic";
        case StripPathStatus::failed_short: return "failed-short";
    }
    return "?";
}

double choose_alpha(double delta, double r, const ProofConstants& consts) {
    consts.validate();
    if (!(r > 0.0)) throw std::invalid_argument("choose_alpha: r must be > 0");
    if (delta < consts.delta_min() || delta > consts.delta_max(r))
        throw std::invalid_argument("choose_alpha: delta outside [J, F r^(4/3)]");
    return consts.b * std::sqrt(delta) * std::cbrt(r);
}

double default_delta(double n, double r, double t, const ProofConstants& consts) {
    consts.validate();
    const double hi = consts.delta_max(r);
    if (consts.delta_min() > hi)
        throw std::invalid_argument("default_delta: empty delta range at this radius");
    const double g = gamma_coefficient({n, r, t}).gamma;
    return std::clamp(std::max(consts.delta_min(), g), consts.delta_min(), hi);
}

namespace {

// Strip-frame candidates sorted by (x, index); rightmost selection scans a
// half-open x interval from its upper end.
struct Candidates {
    std::vector<double> xs;
    std::vector<std::uint32_t> idx;
};

Candidates collect_strip_points(const GeoGraph& g, const StripPlacement& pl, double x_lo,
                                double x_hi, double w_lo, double w_hi,
                                std::uint32_t skip_a = UINT32_MAX,
                                std::uint32_t skip_b = UINT32_MAX) {
    // Plane bounding box of the strip-frame rectangle.
    const Point c0 = pl.from_strip_frame({x_lo, w_lo});
    const Point c1 = pl.from_strip_frame({x_hi, w_lo});
    const Point c2 = pl.from_strip_frame({x_hi, w_hi});
    const Point c3 = pl.from_strip_frame({x_lo, w_hi});
    const double bx_lo = std::min({c0.x, c1.x, c2.x, c3.x});
    const double bx_hi = std::max({c0.x, c1.x, c2.x, c3.x});
    const double by_lo = std::min({c0.y, c1.y, c2.y, c3.y});
    const double by_hi = std::max({c0.y, c1.y, c2.y, c3.y});

    std::vector<std::pair<double, std::uint32_t>> found;
    g.for_each_in_box(bx_lo, bx_hi, by_lo, by_hi, [&](std::uint32_t i) {
        if (i == skip_a || i == skip_b) return;
        const Point s = pl.to_strip_frame(g.instance().points[i]);
        if (s.x >= x_lo && s.x <= x_hi && s.y >= w_lo && s.y <= w_hi)
            found.emplace_back(s.x, i);
    });
    std::sort(found.begin(), found.end());
    Candidates c;
    c.xs.reserve(found.size());
    c.idx.reserve(found.size());
    for (const auto& [x, i] : found) {
        c.xs.push_back(x);
        c.idx.push_back(i);
    }
    return c;
}

// Position of the rightmost candidate with x in (lo, hi], ties broken toward
// the smallest vertex index; SIZE_MAX when the interval is empty.
std::size_t rightmost_in(const Candidates& c, double lo, double hi) {
    auto it = std::upper_bound(c.xs.begin(), c.xs.end(), hi);
    if (it == c.xs.begin()) return SIZE_MAX;
    std::size_t pos = static_cast<std::size_t>(it - c.xs.begin()) - 1;
    if (!(c.xs[pos] > lo)) return SIZE_MAX;
    while (pos > 0 && c.xs[pos - 1] == c.xs[pos]) --pos;  // smallest index among ties
    return pos;
}

void validate_endpoint(const GeoGraph& g, const StripPlacement& pl, std::uint32_t v,
                       Point expect) {
    const Point s = pl.to_strip_frame(g.instance().points[v]);
    const double scale = std::max(1.0, pl.t());
    if (std::fabs(s.x - expect.x) > 1e-6 * scale || std::fabs(s.y - expect.y) > 1e-6 * scale)
        throw std::invalid_argument("strip placement does not map the given endpoints");
}

}  // namespace

StripPathResult greedy_strip_path(const GeoGraph& g, const StripPlacement& pl,
                                  std::uint32_t u, std::uint32_t v, double delta,
                                  const ProofConstants& consts) {
    if (u >= g.vertex_count() || v >= g.vertex_count())
        throw std::out_of_range("greedy_strip_path: vertex index out of range");
    validate_endpoint(g, pl, u, {0.0, 0.0});
    validate_endpoint(g, pl, v, {pl.t(), 0.0});

    const double r = g.radius();
    const double t = pl.t();
    StripPathResult res;
    res.delta_used = delta;

    if (t <= r) {
        res.status = StripPathStatus::success;
        res.path = {u, v};
        res.hops = 1;
        res.chain.hop_budget = 1;
        res.chain.rho = r;
        return res;
    }

    const double alpha = choose_alpha(delta, r, consts);
    const double rho = r - alpha * alpha / r;
    const auto budget = static_cast<std::int64_t>(
        std::ceil((t / r) * (1.0 + delta * std::pow(r, -4.0 / 3.0))));
    res.alpha_used = alpha;
    res.chain.alpha = alpha;
    res.chain.rho = rho;
    res.chain.hop_budget = budget;

    const Candidates cand = collect_strip_points(g, pl, 0.0, t, 0.0, alpha, u, v);

    double x_prev = 0.0, a_prev = 0.0;
    std::int64_t steps = 0;
    bool any_synthetic = false;
    bool reached = false;
    while (true) {
        if (x_prev + rho >= t) {
            reached = true;
            break;
        }
        if (steps >= budget - 1) break;
        const std::size_t pick = rightmost_in(cand, x_prev + a_prev, x_prev + rho);
        ChainEntry entry;
        if (pick == SIZE_MAX) {
            entry.vertex = ChainEntry::kSynthetic;
            entry.x = x_prev + a_prev;
            entry.a = rho - a_prev;
            any_synthetic = true;
        } else {
            entry.vertex = cand.idx[pick];
            entry.x = cand.xs[pick];
            entry.a = x_prev + rho - entry.x;
        }
        res.chain.entries.push_back(entry);
        x_prev = entry.x;
        a_prev = entry.a;
        ++steps;
    }

    if (!reached) {
        res.status = any_synthetic ? StripPathStatus::failed_synthetic
                                   : StripPathStatus::failed_short;
        return res;
    }
    if (any_synthetic) {
        // The construction reached v only through placeholder positions.
        res.status = StripPathStatus::failed_synthetic;
        return res;
    }

    res.status = StripPathStatus::success;
    res.hops = static_cast<std::int32_t>(steps + 1);
    res.path.reserve(static_cast<std::size_t>(steps) + 2);
    res.path.push_back(u);
    for (const ChainEntry& e : res.chain.entries)
        res.path.push_back(static_cast<std::uint32_t>(e.vertex));
    res.path.push_back(v);

    const double rr = r * r;
    const auto& pts = g.instance().points;
    for (std::size_t i = 0; i + 1 < res.path.size(); ++i)
        if (sq_dist(pts[res.path[i]], pts[res.path[i + 1]]) > rr)
            throw std::logic_error("greedy_strip_path: constructed hop longer than r");
    return res;
}

ChainCertificate lower_chain_certificate(const GeoGraph& g, const StripPlacement& pl,
                                         std::uint32_t u, std::uint32_t v, std::int64_t k) {
    if (k < 1) throw std::invalid_argument("lower_chain_certificate: k must be >= 1");
    if (u >= g.vertex_count() || v >= g.vertex_count())
        throw std::out_of_range("lower_chain_certificate: vertex index out of range");
    validate_endpoint(g, pl, u, {0.0, 0.0});
    validate_endpoint(g, pl, v, {pl.t(), 0.0});
    const double r = g.radius();
    const double t = pl.t();
    const double alpha = pl.alpha();
    // Frame-transform rounding must only ever raise the chain, so candidate
    // bounds are inflated by the geometry tolerance and the labelled
    // endpoints enter with exact strip coordinates.
    const double slack = 1e-9;

    ChainCertificate cert;
    cert.chain.hop_budget = k;
    cert.chain.alpha = alpha;
    cert.chain.rho = r;

    // Rectangles can reach x = k*r at most.
    const double reach = static_cast<double>(k) * r + r;
    Candidates cand =
        collect_strip_points(g, pl, 0.0, reach + slack, -alpha - slack, alpha + slack);
    for (std::size_t i = 0; i < cand.idx.size(); ++i) {
        if (cand.idx[i] == u) cand.xs[i] = 0.0;
        if (cand.idx[i] == v) cand.xs[i] = t;
    }
    // Re-sort: the pinned coordinates may move by a few ulp.
    {
        std::vector<std::size_t> order(cand.xs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return cand.xs[a] != cand.xs[b] ? cand.xs[a] < cand.xs[b]
                                            : cand.idx[a] < cand.idx[b];
        });
        Candidates sorted;
        for (const std::size_t i : order) {
            sorted.xs.push_back(cand.xs[i]);
            sorted.idx.push_back(cand.idx[i]);
        }
        cand = std::move(sorted);
    }

    double x_prev = 0.0, a_prev = 0.0;
    for (std::int64_t i = 1; i <= k; ++i) {
        const std::size_t pick = rightmost_in(cand, x_prev + a_prev, x_prev + r + slack);
        ChainEntry entry;
        if (pick == SIZE_MAX) {
            entry.vertex = ChainEntry::kSynthetic;
            entry.x = x_prev + a_prev;
            entry.a = r - a_prev;
        } else {
            entry.vertex = cand.idx[pick];
            entry.x = cand.xs[pick];
            entry.a = x_prev + r - entry.x;
        }
        cert.chain.entries.push_back(entry);
        x_prev = entry.x;
        a_prev = entry.a;
    }
    cert.certified = x_prev < t;
    return cert;
}

double default_chain_alpha(std::int64_t k, double r, double t) {
    if (k < 1 || !(r > 0.0) || !(t > 0.0))
        throw std::invalid_argument("default_chain_alpha: need k >= 1, r > 0, t > 0");
    const double kd = static_cast<double>(k);
    return std::sqrt(0.25) * std::cbrt(kd * kd * kd * r * r / t);
}

ShortfallCurve empirical_shortfall_law(std::int64_t n, double r, double alpha,
                                       const std::vector<double>& beta_grid,
                                       std::int64_t trials, SeedSpec seed) {
    if (!(r > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("empirical_shortfall_law: need r > 0, alpha > 0");
    if (trials < 1) throw std::invalid_argument("empirical_shortfall_law: trials must be >= 1");
    const double half = std::sqrt(static_cast<double>(n)) * 0.5;
    if (!(half >= 2.0 * r) || !(half >= alpha))
        throw std::invalid_argument("empirical_shortfall_law: square too small for the strip");

    const Point u{0.0, 0.0};
    const Point v{2.0 * r, 0.0};  // outside the first rectangle
    std::vector<double> a1(static_cast<std::size_t>(trials));
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        const RggInstance inst = sample_poissonized(n, r, seed.trial(trial), u, v);
        double x1 = 0.0;
        for (const Point& p : inst.points)
            if (p.x > 0.0 && p.x <= r && std::fabs(p.y) <= alpha) x1 = std::max(x1, p.x);
        a1[static_cast<std::size_t>(trial)] = r - x1;
    }

    ShortfallCurve curve;
    curve.alpha = alpha;
    curve.r = r;
    curve.trials = trials;
    for (const double beta : beta_grid) {
        std::int64_t hits = 0;
        for (const double a : a1)
            if (a >= beta) ++hits;
        const double p = static_cast<double>(hits) / static_cast<double>(trials);
        curve.beta.push_back(beta);
        curve.empirical.push_back(p);
        curve.ci_radius.push_back(3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)));
        curve.analytic.push_back(beta <= r ? std::exp(-2.0 * alpha * beta) : 0.0);
    }
    return curve;
}

nlohmann::json to_json(const StripPathResult& res) {
    nlohmann::json j;
    j["status"] = strip_path_status_name(res.status);
    j["hops"] = res.hops;
    j["budget_k"] = res.chain.hop_budget;
    j["delta"] = res.delta_used;
    j["alpha"] = res.alpha_used;
    j["rho"] = res.chain.rho;
    nlohmann::json chain = nlohmann::json::array();
    for (const ChainEntry& e : res.chain.entries) {
        nlohmann::json item;
        item["vertex"] = e.synthetic() ? nlohmann::json("SYNTHETIC") : nlohmann::json(e.vertex);
        item["x"] = e.x;
        item["a"] = e.a;
        chain.push_back(item);
    }
    j["chain"] = chain;
    j["path"] = res.path;
    return j;
}

}  // namespace rgg
