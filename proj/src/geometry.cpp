#include "rgg/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace rgg {

double rect_connectivity_width(double r, double alpha) {
    if (!(r > 0.0)) throw std::invalid_argument("rect_connectivity_width: r must be > 0");
    if (!(alpha >= 0.0) || alpha > r)
        throw std::invalid_argument("rect_connectivity_width: need 0 <= alpha <= r");
    return r - alpha * alpha / r;
}

bool strip_precondition(double t, std::int64_t k, double r, double alpha) {
    if (!(t >= 0.0) || k < 1 || !(r > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("strip_precondition: need t >= 0, k >= 1, r > 0, alpha > 0");
    const double kr = static_cast<double>(k) * r;
    return t >= kr - 2.0 * alpha * alpha / kr;
}

StripPlacement StripPlacement::frame(Point u, Point v, double alpha, StripSide side) {
    const double t = euclid_dist(u, v);
    if (!(t > 0.0)) throw std::invalid_argument("StripPlacement: u and v must differ");
    if (!(alpha > 0.0)) throw std::invalid_argument("StripPlacement: alpha must be > 0");
    StripPlacement pl;
    pl.origin_ = u;
    pl.cos_ = (v.x - u.x) / t;
    pl.sin_ = (v.y - u.y) / t;
    pl.t_ = t;
    pl.alpha_ = alpha;
    pl.inner_margin_ = kInnerMarginFactor * alpha;
    pl.side_ = side;
    return pl;
}

namespace {

// Composition of square symmetries: optional coordinate swap, then sign flips.
struct Sym {
    bool swap_xy = false, neg_x = false, neg_y = false;

    Point fwd(Point p) const {
        if (swap_xy) std::swap(p.x, p.y);
        if (neg_x) p.x = -p.x;
        if (neg_y) p.y = -p.y;
        return p;
    }
    Point inv(Point p) const {
        if (neg_x) p.x = -p.x;
        if (neg_y) p.y = -p.y;
        if (swap_xy) std::swap(p.x, p.y);
        return p;
    }
};

// Largest s >= 0 with p + s*dir still inside the square.
double exit_distance(Point p, double dx, double dy, double half) {
    double s = std::numeric_limits<double>::infinity();
    if (dx > 0.0)
        s = std::min(s, (half - p.x) / dx);
    else if (dx < 0.0)
        s = std::min(s, (-half - p.x) / dx);
    if (dy > 0.0)
        s = std::min(s, (half - p.y) / dy);
    else if (dy < 0.0)
        s = std::min(s, (-half - p.y) / dy);
    return std::max(0.0, s);
}

struct Frame {
    Point u, v;
    double ex, ey;  // unit direction u -> v
    double nx, ny;  // left normal
    double t;
};

bool tri_contained(const Square& sq, Point a, Point b, Point c) {
    const double tol = 1e-9;
    return sq.contains(a, tol) && sq.contains(b, tol) && sq.contains(c, tol);
}

// Safe-triangle test for one side, run on the segment extended to the square
// boundary. A corner triangle passes when its uv-parallel side is at most
// 1.01*alpha or it lies inside the square entirely; both triangles of the
// side must pass.
bool triangle_test(const Frame& f, const Square& sq, double alpha, double margin, double sgn) {
    const double dy = f.v.y - f.u.y;
    if (dy <= 0.0) return false;  // beta == 0 handled by the direct check
    const double dx = f.v.x - f.u.x;
    const double tanb = dy / dx;  // beta in (0, pi/4]
    const double near_len = alpha * tanb;
    const double far_len = alpha / tanb;

    const double su = exit_distance(f.u, -f.ex, -f.ey, sq.half);
    const double sv = exit_distance(f.v, f.ex, f.ey, sq.half);
    const Point us{f.u.x - su * f.ex, f.u.y - su * f.ey};
    const Point vs{f.v.x + sv * f.ex, f.v.y + sv * f.ey};
    const double ox = sgn * alpha * f.nx, oy = sgn * alpha * f.ny;

    Point near_a, near_b, near_c, far_a, far_b, far_c;
    if (sgn > 0.0) {
        near_a = us;
        near_b = {us.x + ox, us.y + oy};
        near_c = {near_b.x + near_len * f.ex, near_b.y + near_len * f.ey};
        far_a = vs;
        far_b = {vs.x + ox, vs.y + oy};
        far_c = {far_b.x - far_len * f.ex, far_b.y - far_len * f.ey};
    } else {
        near_a = vs;
        near_b = {vs.x + ox, vs.y + oy};
        near_c = {near_b.x - near_len * f.ex, near_b.y - near_len * f.ey};
        far_a = us;
        far_b = {us.x + ox, us.y + oy};
        far_c = {far_b.x + far_len * f.ex, far_b.y + far_len * f.ey};
    }
    const bool near_ok = near_len <= margin || tri_contained(sq, near_a, near_b, near_c);
    const bool far_ok = far_len <= margin || tri_contained(sq, far_a, far_b, far_c);
    return near_ok && far_ok;
}

bool corners_inside(const Frame& f, const Square& sq, double alpha, double margin, double sgn) {
    const double lo = margin, hi = f.t - margin;
    for (const double s : {lo, hi})
        for (const double w : {0.0, alpha}) {
            const Point p{f.u.x + s * f.ex + w * sgn * f.nx,
                          f.u.y + s * f.ey + w * sgn * f.ny};
            if (!sq.contains(p, 1e-9)) return false;
        }
    return true;
}

}  // namespace

StripPlacement fit_strip(Point u, Point v, double alpha, double n) {
    const Square sq = Square::of_area(n);
    if (!sq.contains(u) || !sq.contains(v))
        throw std::invalid_argument("fit_strip: endpoints must lie in the square");
    if (!(alpha > 0.0)) throw std::invalid_argument("fit_strip: alpha must be > 0");
    const double t = euclid_dist(u, v);
    const double margin = StripPlacement::kInnerMarginFactor * alpha;
    if (!(t > 2.0 * margin))
        throw std::invalid_argument("fit_strip: need d_E(u,v) > 2.02*alpha");

    // Reduce to x_u < x_v, y_u <= y_v, beta in [0, pi/4] via square symmetries.
    Sym sym;
    Point cu = u, cv = v;
    if (std::fabs(cv.y - cu.y) > std::fabs(cv.x - cu.x)) {
        sym.swap_xy = true;
        std::swap(cu.x, cu.y);
        std::swap(cv.x, cv.y);
    }
    if (cv.x < cu.x) {
        sym.neg_x = true;
        cu.x = -cu.x;
        cv.x = -cv.x;
    }
    if (cv.y < cu.y) {
        sym.neg_y = true;
        cu.y = -cu.y;
        cv.y = -cv.y;
    }

    Frame f;
    f.u = cu;
    f.v = cv;
    f.t = t;
    f.ex = (cv.x - cu.x) / t;
    f.ey = (cv.y - cu.y) / t;
    f.nx = -f.ey;
    f.ny = f.ex;

    for (const double sgn : {1.0, -1.0}) {
        const bool by_triangles = triangle_test(f, sq, alpha, margin, sgn);
        const bool by_corners = corners_inside(f, sq, alpha, margin, sgn);
        if (!(by_triangles || by_corners)) continue;
        if (!by_corners)
            throw std::logic_error("fit_strip: triangle test accepted a side whose inner "
                                   "rectangle leaves the square");
        // Map a strip-interior witness back to decide the side in original
        // coordinates.
        const Point mid_canon{f.u.x + 0.5 * f.t * f.ex + 0.5 * alpha * sgn * f.nx,
                              f.u.y + 0.5 * f.t * f.ey + 0.5 * alpha * sgn * f.ny};
        const Point mid = sym.inv(mid_canon);
        const double cross =
            (v.x - u.x) * (mid.y - u.y) - (v.y - u.y) * (mid.x - u.x);
        return StripPlacement::frame(u, v, alpha,
                                     cross > 0.0 ? StripSide::plus : StripSide::minus);
    }
    throw StripFitError("fit_strip: no side admits the inner rectangle inside the square");
}

}  // namespace rgg
