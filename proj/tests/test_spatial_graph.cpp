#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rgg/spatial_graph.hpp"

using namespace rgg;

namespace {

RggInstance make_instance(std::vector<Point> pts, double r, double n_area) {
    RggInstance inst;
    inst.n = static_cast<std::int64_t>(n_area);
    inst.r = r;
    inst.model = Model::uniform_n;
    inst.points = std::move(pts);
    return inst;
}

std::vector<std::vector<std::uint32_t>> brute_adjacency(const RggInstance& inst) {
    const double rr = inst.r * inst.r;
    std::vector<std::vector<std::uint32_t>> adj(inst.points.size());
    for (std::uint32_t i = 0; i < inst.points.size(); ++i)
        for (std::uint32_t j = i + 1; j < inst.points.size(); ++j)
            if (sq_dist(inst.points[i], inst.points[j]) <= rr) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    return adj;
}

GeoGraph build_eager(const RggInstance& inst) {
    BuildOptions o;
    o.adjacency = BuildOptions::Adjacency::eager;
    return GeoGraph::build(inst, o);
}

GeoGraph build_lazy(const RggInstance& inst) {
    BuildOptions o;
    o.adjacency = BuildOptions::Adjacency::lazy;
    return GeoGraph::build(inst, o);
}

}  // namespace

TEST_CASE("edge rule is inclusive at distance exactly r") {
    const double r = 2.0;
    const GeoGraph g = build_eager(make_instance({{0, 0}, {r, 0}, {r + 1e-9, 5}}, r, 100));
    CHECK(g.neighbors(0) == std::vector<std::uint32_t>{1});
    CHECK(g.neighbors(1) == std::vector<std::uint32_t>{0});
    CHECK(g.neighbors(2).empty());  // isolated, degree 0
    CHECK(g.edge_count() == 1);
}

TEST_CASE("build rejects bad input") {
    CHECK_THROWS_AS(build_eager(make_instance({{0, 0}}, 0.0, 4)), std::invalid_argument);
    CHECK_THROWS_AS(build_eager(make_instance({}, 1.0, 4)), std::invalid_argument);
}

TEST_CASE("grid adjacency equals brute force") {
    for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const std::int64_t n = 1000;
        const double r = 1.0 + 0.7 * static_cast<double>(seed);
        const RggInstance inst = sample_uniform(n, r, {seed, 0});
        const GeoGraph g = build_eager(inst);
        const auto brute = brute_adjacency(inst);
        for (std::uint32_t i = 0; i < n; ++i) {
            auto expect = brute[i];
            std::sort(expect.begin(), expect.end());
            CHECK(g.neighbors(i) == expect);
        }
    }
}

TEST_CASE("bfs_distance trivial cases") {
    const GeoGraph g = build_eager(make_instance({{0, 0}, {1, 0}, {5, 5}}, 1.5, 400));
    const DistanceResult self = g.bfs_distance(0, 0, true);
    CHECK(self.hops == 0);
    CHECK(self.path == std::vector<std::uint32_t>{0});
    const DistanceResult adj = g.bfs_distance(0, 1, true);
    CHECK(adj.hops == 1);
    CHECK(adj.path == std::vector<std::uint32_t>{0, 1});
    const DistanceResult far = g.bfs_distance(0, 2);
    CHECK_FALSE(far.reachable());
    CHECK(far.hops == DistanceResult::kUnreachable);
    CHECK_THROWS_AS(g.bfs_distance(0, 99), std::out_of_range);
}

TEST_CASE("bfs_distance equals Floyd-Warshall on small instances") {
    const std::int64_t n = 20;
    for (const std::uint64_t seed : {10ull, 11ull, 12ull}) {
        const RggInstance inst = sample_uniform(n, 1.6, {seed, 0});
        const GeoGraph g = build_eager(inst);
        const auto adj = brute_adjacency(inst);
        constexpr int INF = 1 << 20;
        std::vector<std::vector<int>> d(n, std::vector<int>(n, INF));
        for (int i = 0; i < n; ++i) d[i][i] = 0;
        for (int i = 0; i < n; ++i)
            for (const auto j : adj[i]) d[i][j] = 1;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const DistanceResult res = g.bfs_distance(i, j);
                if (d[i][j] == INF)
                    CHECK_FALSE(res.reachable());
                else
                    CHECK(res.hops == d[i][j]);
            }
    }
}

TEST_CASE("bfs path is valid and deterministic") {
    const RggInstance inst = sample_uniform(800, 2.2, {21, 0});
    for (const bool lazy : {false, true}) {
        const GeoGraph g = lazy ? build_lazy(inst) : build_eager(inst);
        const DistanceResult a = g.bfs_distance(3, 700, true);
        const DistanceResult b = g.bfs_distance(3, 700, true);
        CHECK(a.hops == b.hops);
        CHECK(a.path == b.path);  // deterministic per mode
        if (a.reachable()) {
            REQUIRE(a.path.size() == static_cast<std::size_t>(a.hops) + 1);
            CHECK(a.path.front() == 3);
            CHECK(a.path.back() == 700);
            const double rr = inst.r * inst.r;
            for (std::size_t i = 0; i + 1 < a.path.size(); ++i)
                CHECK(sq_dist(inst.points[a.path[i]], inst.points[a.path[i + 1]]) <= rr);
        }
    }
}

TEST_CASE("lazy BFS distances equal eager BFS distances") {
    for (const std::uint64_t seed : {31ull, 32ull}) {
        for (const double r : {0.9, 2.0, 6.0}) {
            const RggInstance inst = sample_uniform(1500, r, {seed, 0});
            const GeoGraph ge = build_eager(inst);
            const GeoGraph gl = build_lazy(inst);
            for (const std::uint32_t src : {0u, 400u, 1499u}) {
                const auto de = ge.bfs_all(src);
                const auto dl = gl.bfs_all(src);
                CHECK(de == dl);
            }
            CHECK(ge.is_connected() == gl.is_connected());
        }
    }
}

TEST_CASE("deterministic hop floor and triangle inequality") {
    const RggInstance inst = sample_uniform(1200, 2.5, {41, 0});
    const GeoGraph g = build_eager(inst);
    const auto d0 = g.bfs_all(0);
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
        if (d0[v] < 0) continue;
        const double de = euclid_dist(inst.points[0], inst.points[v]);
        CHECK(d0[v] >= static_cast<std::int32_t>(std::ceil(de / inst.r)));
    }
    const auto d7 = g.bfs_all(7);
    for (std::uint32_t v = 0; v < g.vertex_count(); v += 13) {
        if (d0[v] < 0 || d7[v] < 0 || d0[7] < 0) continue;
        CHECK(d0[v] <= d0[7] + d7[v]);  // hop metric triangle inequality
    }
}

TEST_CASE("is_connected") {
    CHECK(build_eager(make_instance({{0, 0}}, 1.0, 4)).is_connected());
    CHECK_FALSE(build_eager(make_instance({{0, 0}, {5, 0}}, 1.0, 400)).is_connected());

    const RggInstance inst = sample_uniform(1000, 1.0, {51, 0});
    const GeoGraph g = build_eager(inst);
    // oracle: union-find over the brute-force adjacency
    const auto adj = brute_adjacency(inst);
    std::vector<int> comp(inst.points.size(), -1);
    int comps = 0;
    for (std::uint32_t s = 0; s < inst.points.size(); ++s) {
        if (comp[s] >= 0) continue;
        ++comps;
        std::vector<std::uint32_t> stack{s};
        comp[s] = comps;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (const auto w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = comps;
                    stack.push_back(w);
                }
        }
    }
    CHECK(g.is_connected() == (comps == 1));
}

TEST_CASE("diameter trivial cases") {
    const double r = 1.0;
    const GeoGraph path3 = build_eager(make_instance({{0, 0}, {r, 0}, {2 * r, 0}}, r, 100));
    const DiameterEstimate de = path3.diameter(DiameterMode::exact);
    CHECK(de.mode == DiameterMode::exact);
    CHECK(de.lower == 2);
    CHECK(de.upper == 2);

    // complete graph: every pair within r
    const RggInstance dense = sample_uniform(200, 100.0, {61, 0});
    CHECK(build_eager(dense).diameter(DiameterMode::exact).upper == 1);

    const GeoGraph split = build_eager(make_instance({{0, 0}, {5, 0}}, 1.0, 400));
    CHECK_THROWS_AS(split.diameter(DiameterMode::exact), std::invalid_argument);
}

TEST_CASE("bounded diameter bracket contains the exact value") {
    for (const std::uint64_t seed : {71ull, 72ull, 73ull}) {
        const RggInstance inst = sample_uniform(2000, 3.2, {seed, 0});
        const GeoGraph g = build_eager(inst);
        if (!g.is_connected()) continue;
        const DiameterEstimate exact = g.diameter(DiameterMode::exact);
        const DiameterEstimate bracket = g.diameter(DiameterMode::bounded);
        CHECK(bracket.lower <= exact.lower);
        CHECK(bracket.upper >= exact.upper);
        CHECK(bracket.lower <= bracket.upper);
        if (bracket.mode == DiameterMode::exact) CHECK(bracket.lower == bracket.upper);
    }
}

TEST_CASE("exact diameter vertex-count cutoff") {
    const RggInstance inst = sample_uniform(5001, 80.0, {81, 0});
    const GeoGraph g = build_eager(inst);
    CHECK_THROWS_AS(g.diameter(DiameterMode::exact), std::invalid_argument);
    CHECK_NOTHROW(g.diameter(DiameterMode::bounded));
}

TEST_CASE("corner_vertices") {
    // n = 10^4: half = 50, corner squares of side log(1e4) ~ 9.21
    std::vector<Point> pts{{-50, -50}, {50, -50}, {-45, 45}, {0, 0}};
    const GeoGraph g = build_eager(make_instance(pts, 1.0, 1e4));
    const auto corners = g.corner_vertices();
    REQUIRE(corners[0].has_value());  // (-,-): exact corner point
    CHECK(*corners[0] == 0);
    REQUIRE(corners[1].has_value());  // (+,-)
    CHECK(*corners[1] == 1);
    REQUIRE(corners[2].has_value());  // (-,+): (-45,45) inside the 9.21 square
    CHECK(*corners[2] == 2);
    CHECK_FALSE(corners[3].has_value());  // (+,+) empty

    // all four corners occupied with high probability at n = 10^4
    int all_present = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        const RggInstance inst = sample_uniform(10000, 1.0, {91, static_cast<std::uint64_t>(t)});
        const auto cs = GeoGraph::build(inst).corner_vertices();
        if (cs[0] && cs[1] && cs[2] && cs[3]) ++all_present;
    }
    CHECK(all_present == trials);
}

TEST_CASE("edge list export") {
    const RggInstance inst = sample_uniform(300, 2.0, {101, 0});
    const GeoGraph g = build_eager(inst);
    std::ostringstream eager_out;
    g.export_edges_csv(eager_out);
    std::ostringstream lazy_out;
    build_lazy(inst).export_edges_csv(lazy_out);
    CHECK(eager_out.str() == lazy_out.str());

    std::istringstream in(eager_out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "src,dst");
    std::int64_t lines = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++lines;
    CHECK(lines == g.edge_count());
}

TEST_CASE("both sampling models give the same degree statistics") {
    // Mean degree approaches pi r^2 (unit intensity) in either model; the
    // fixed-count and the Poissonized instances must agree within noise.
    const std::int64_t n = 4000;
    const double r = 2.0;
    auto mean_degree = [](const GeoGraph& g) {
        double sum = 0.0;
        for (std::uint32_t i = 0; i < g.vertex_count(); ++i)
            sum += static_cast<double>(g.neighbors(i).size());
        return sum / static_cast<double>(g.vertex_count());
    };
    double uni = 0.0, poi = 0.0;
    const int trials = 4;
    for (int t = 0; t < trials; ++t) {
        uni += mean_degree(GeoGraph::build(
            sample_uniform(n, r, {555, static_cast<std::uint64_t>(t)})));
        poi += mean_degree(GeoGraph::build(
            sample_poissonized(n, r, {556, static_cast<std::uint64_t>(t)})));
    }
    uni /= trials;
    poi /= trials;
    const double expect = M_PI * r * r;  // boundary effects shave a little
    CHECK(std::fabs(uni - poi) <= 0.05 * expect);
    CHECK(uni > 0.8 * expect);
    CHECK(uni < 1.02 * expect);
}
