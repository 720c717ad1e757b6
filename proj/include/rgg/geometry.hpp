#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace rgg {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double sq_dist(Point p, Point q) {
    const double dx = p.x - q.x, dy = p.y - q.y;
    return dx * dx + dy * dy;
}

inline double euclid_dist(Point p, Point q) { return std::sqrt(sq_dist(p, q)); }

struct Rectangle {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

    bool contains(Point p, double tol = 0.0) const {
        return p.x >= x_min - tol && p.x <= x_max + tol && p.y >= y_min - tol &&
               p.y <= y_max + tol;
    }
};

// The square [-half, half]^2 of area n.
struct Square {
    double half = 0.0;

    static Square of_area(double n) {
        if (!(n > 0.0)) throw std::invalid_argument("Square: area must be > 0");
        return {std::sqrt(n) * 0.5};
    }
    bool contains(Point p, double tol = 0.0) const {
        return std::fabs(p.x) <= half + tol && std::fabs(p.y) <= half + tol;
    }
};

// rho = r - alpha^2/r. Any two points of a [0,rho] x [0,alpha] rectangle are
// within distance r of each other (sqrt(rho^2 + alpha^2) <= r).
double rect_connectivity_width(double r, double alpha);

// True iff t >= k*r - 2*alpha^2/(k*r). When true, every u-v path of at most
// k edges (u=(0,0), v=(t,0)) stays inside [0,t] x [-alpha,alpha].
bool strip_precondition(double t, std::int64_t k, double r, double alpha);

enum class StripSide { plus, minus };

// Rigid frame in which u = (0,0) and v = (t,0). `side` selects which
// geometric side of uv the strip's positive-w half maps to; with
// side = minus the transform carries a reflection (still an isometry).
class StripPlacement {
  public:
    static constexpr double kInnerMarginFactor = 1.01;

    static StripPlacement frame(Point u, Point v, double alpha,
                                StripSide side = StripSide::plus);

    Point to_strip_frame(Point p) const {
        const double dx = p.x - origin_.x, dy = p.y - origin_.y;
        return {dx * cos_ + dy * sin_, sign() * (-dx * sin_ + dy * cos_)};
    }
    Point from_strip_frame(Point q) const {
        const double w = sign() * q.y;
        return {origin_.x + q.x * cos_ - w * sin_, origin_.y + q.x * sin_ + w * cos_};
    }

    Point origin() const { return origin_; }
    double t() const { return t_; }
    double alpha() const { return alpha_; }
    double inner_margin() const { return inner_margin_; }
    double angle() const { return std::atan2(sin_, cos_); }
    StripSide side() const { return side_; }

    // [1.01a, t-1.01a] x [0, alpha] in strip coordinates.
    Rectangle inner_rect_strip() const {
        return {inner_margin_, t_ - inner_margin_, 0.0, alpha_};
    }
    std::array<Point, 4> inner_rect_corners() const {
        const Rectangle rc = inner_rect_strip();
        return {from_strip_frame({rc.x_min, rc.y_min}), from_strip_frame({rc.x_max, rc.y_min}),
                from_strip_frame({rc.x_max, rc.y_max}), from_strip_frame({rc.x_min, rc.y_max})};
    }

  private:
    double sign() const { return side_ == StripSide::plus ? 1.0 : -1.0; }

    Point origin_;
    double cos_ = 1.0, sin_ = 0.0;
    double t_ = 0.0, alpha_ = 0.0, inner_margin_ = 0.0;
    StripSide side_ = StripSide::plus;
};

struct StripFitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Places the strip for the pair (u, v) so that the inner rectangle
// [1.01a, t-1.01a] x [0, alpha] lies inside the square of area n. Tries the
// left side of uv first, then the right, deciding with the safe-triangle
// test on the boundary-extended segment and falling back to a direct
// four-corner containment check. Throws StripFitError when neither side
// admits the inner rectangle.
StripPlacement fit_strip(Point u, Point v, double alpha, double n);

}  // namespace rgg
