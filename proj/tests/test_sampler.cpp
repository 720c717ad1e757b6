#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "rgg/sampler.hpp"

using namespace rgg;

TEST_CASE("sample_uniform basics") {
    const RggInstance one = sample_uniform(1, 0.5, {5, 0});
    REQUIRE(one.points.size() == 1);
    CHECK(std::fabs(one.points[0].x) <= 0.5);
    CHECK(std::fabs(one.points[0].y) <= 0.5);
    CHECK_THROWS_AS(sample_uniform(0, 1.0, {1, 0}), std::invalid_argument);
}

TEST_CASE("sample_uniform determinism and domain closure") {
    const RggInstance a = sample_uniform(5000, 2.0, {77, 3});
    const RggInstance b = sample_uniform(5000, 2.0, {77, 3});
    REQUIRE(a.points.size() == b.points.size());
    const double half = a.half_side();
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].x == b.points[i].x);  // bit-identical
        CHECK(a.points[i].y == b.points[i].y);
        CHECK(std::fabs(a.points[i].x) <= half);
        CHECK(std::fabs(a.points[i].y) <= half);
    }
    const RggInstance c = sample_uniform(5000, 2.0, {77, 4});
    CHECK(a.points[0].x != c.points[0].x);  // distinct trials differ
}

TEST_CASE("sample_uniform mean near zero (CLT envelope)") {
    const std::int64_t n = 10000;
    const RggInstance inst = sample_uniform(n, 1.0, {11, 0});
    double mx = 0.0, my = 0.0;
    for (const Point& p : inst.points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    const double side = 2.0 * inst.half_side();
    const double envelope = 3.0 * (side / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(mx) <= envelope);
    CHECK(std::fabs(my) <= envelope);
}

TEST_CASE("sample_poissonized labels and counts") {
    const Point u{0.0, 0.0}, v{3.0, 0.0};
    const RggInstance inst = sample_poissonized(400, 1.0, {9, 0}, u, v);
    REQUIRE(inst.labelled_u.has_value());
    REQUIRE(inst.labelled_v.has_value());
    CHECK(inst.points[*inst.labelled_u].x == u.x);
    CHECK(inst.points[*inst.labelled_u].y == u.y);
    CHECK(inst.points[*inst.labelled_v].x == v.x);
    CHECK(inst.points[*inst.labelled_v].y == v.y);
    CHECK(inst.realized_count() >= 2);
    CHECK(*inst.labelled_v == inst.realized_count() - 1);

    CHECK_THROWS_AS(sample_poissonized(100, 1.0, {1, 0}, Point{99.0, 0.0}, std::nullopt),
                    std::invalid_argument);
}

TEST_CASE("poissonized region count has mean equal to its area") {
    const std::int64_t n = 256;  // square side 16
    const int trials = 10000;
    const Rectangle region{-4.0, -2.0, -3.0, 2.0};  // area 10
    const double area = (region.x_max - region.x_min) * (region.y_max - region.y_min);
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const RggInstance inst =
            sample_poissonized(n, 1.0, {123, static_cast<std::uint64_t>(t)});
        int count = 0;
        for (std::size_t i = 0; i + 2 < inst.points.size(); ++i)  // background only
            if (region.contains(inst.points[i])) ++count;
        sum += count;
    }
    const double mean = sum / trials;
    CHECK(std::fabs(mean - area) <= 3.0 * std::sqrt(area / trials));
}

TEST_CASE("poissonized total count concentrates around n") {
    const std::int64_t n = 10000;
    const int trials = 1000;
    int within = 0;
    for (int t = 0; t < trials; ++t) {
        const RggInstance inst =
            sample_poissonized(n, 1.0, {321, static_cast<std::uint64_t>(t)});
        const double realized = static_cast<double>(inst.realized_count()) - 2.0;
        if (std::fabs(realized - static_cast<double>(n)) <=
            5.0 * std::sqrt(static_cast<double>(n)))
            ++within;
    }
    CHECK(within >= static_cast<int>(0.99 * trials));
}

TEST_CASE("poisson counts in disjoint rectangles are uncorrelated") {
    const std::int64_t n = 100;  // side 10
    const int trials = 10000;
    const Rectangle a{-4.0, -1.0, -4.0, -1.0}, b{1.0, 4.0, 1.0, 4.0};
    std::vector<double> xs, ys;
    xs.reserve(trials);
    ys.reserve(trials);
    for (int t = 0; t < trials; ++t) {
        const RggInstance inst = sample_poissonized(n, 1.0, {55, static_cast<std::uint64_t>(t)});
        int ca = 0, cb = 0;
        for (std::size_t i = 0; i + 2 < inst.points.size(); ++i) {
            if (a.contains(inst.points[i])) ++ca;
            if (b.contains(inst.points[i])) ++cb;
        }
        xs.push_back(ca);
        ys.push_back(cb);
    }
    double mx = 0, my = 0;
    for (int t = 0; t < trials; ++t) {
        mx += xs[t];
        my += ys[t];
    }
    mx /= trials;
    my /= trials;
    double sxy = 0, sxx = 0, syy = 0;
    for (int t = 0; t < trials; ++t) {
        sxy += (xs[t] - mx) * (ys[t] - my);
        sxx += (xs[t] - mx) * (xs[t] - mx);
        syy += (ys[t] - my) * (ys[t] - my);
    }
    const double corr = sxy / std::sqrt(sxx * syy);
    CHECK(std::fabs(corr) <= 3.0 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("sample_exponentials moments and support") {
    const double rate = 2.0;
    const auto xs = sample_exponentials(rate, 1000000, {42, 0});
    double sum = 0.0;
    std::int64_t above = 0;
    const double beta = 1.0 / rate;
    for (const double x : xs) {
        REQUIRE(x > 0.0);
        sum += x;
        if (x >= beta) ++above;
    }
    const double mean = sum / static_cast<double>(xs.size());
    CHECK(std::fabs(mean - 1.0 / rate) <= 0.005 / rate);
    const double survival = static_cast<double>(above) / static_cast<double>(xs.size());
    CHECK(std::fabs(survival - std::exp(-1.0)) <= 0.01);
    CHECK_THROWS_AS(sample_exponentials(0.0, 10, {1, 0}), std::invalid_argument);
}

TEST_CASE("points CSV + sidecar round trip") {
    const RggInstance inst = sample_poissonized(50, 1.5, {7, 2});
    const std::string path = "roundtrip_test_points.csv";
    write_points_csv(inst, path);
    const RggInstance back = load_points_csv(path);
    CHECK(back.n == inst.n);
    CHECK(back.r == inst.r);
    CHECK(back.model == inst.model);
    CHECK(back.seed.master_seed == inst.seed.master_seed);
    CHECK(back.seed.trial_index == inst.seed.trial_index);
    REQUIRE(back.points.size() == inst.points.size());
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
        CHECK(back.points[i].x == inst.points[i].x);  // exact via %.17g
        CHECK(back.points[i].y == inst.points[i].y);
    }
    CHECK(back.labelled_u == inst.labelled_u);
    CHECK(back.labelled_v == inst.labelled_v);
    std::filesystem::remove(path);
    std::filesystem::remove(sidecar_path(path));
    CHECK(sidecar_path("pts.csv") == "pts.meta.json");
    CHECK(sidecar_path("pts.dat") == "pts.dat.meta.json");
}
