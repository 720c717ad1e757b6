#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rgg/sampler.hpp"

namespace rgg {

struct DistanceResult {
    static constexpr std::int32_t kUnreachable = -1;

    std::uint32_t source = 0;
    std::uint32_t target = 0;
    std::int32_t hops = kUnreachable;
    std::vector<std::uint32_t> path;  // filled only when requested and reachable

    bool reachable() const { return hops >= 0; }
};

enum class DiameterMode { exact, bounded };

struct DiameterEstimate {
    DiameterMode mode = DiameterMode::bounded;
    std::int32_t lower = 0;
    std::int32_t upper = 0;
};

struct BuildOptions {
    enum class Adjacency { automatic, eager, lazy };

    Adjacency adjacency = Adjacency::automatic;
    // Lazy mode: grid cells per radius (finer cells tighten the per-cell
    // absorb/skip classification).
    int lazy_subdivision = 8;
    // Automatic mode switches to lazy when n * pi * r^2 exceeds this.
    double eager_candidate_limit = 8.0e7;
};

// Geometric graph over an instance: edge (i,j) iff squared distance <= r^2
// (exact comparison, no square roots). Immutable after build; queries may run
// concurrently from any number of threads.
//
// Eager mode materializes sorted CSR adjacency (memory ~ n * pi * r^2
// indices). Lazy mode keeps only the cell grid and answers BFS by scanning
// not-yet-visited points near the frontier, absorbing whole cells whose
// farthest corner is within r.
class GeoGraph {
  public:
    static GeoGraph build(RggInstance instance, BuildOptions opts = {});

    const RggInstance& instance() const { return inst_; }
    double radius() const { return inst_.r; }
    double half_side() const { return inst_.half_side(); }
    std::size_t vertex_count() const { return inst_.points.size(); }
    bool eager() const { return eager_; }

    // Sorted neighbor indices (grid scan in lazy mode).
    std::vector<std::uint32_t> neighbors(std::uint32_t i) const;
    std::int64_t edge_count() const;  // eager mode only

    DistanceResult bfs_distance(std::uint32_t u, std::uint32_t v, bool want_path = false) const;
    // Hop counts from source to every vertex (-1 when unreachable).
    std::vector<std::int32_t> bfs_all(std::uint32_t source) const;
    bool is_connected() const;
    DiameterEstimate diameter(DiameterMode mode) const;

    // For each corner square of side log(n): the vertex inside it closest to
    // the square's corner, if any. Order: (-,-), (+,-), (-,+), (+,+).
    std::array<std::optional<std::uint32_t>, 4> corner_vertices() const;

    // Edge list "src,dst" with src < j, one line per edge.
    void export_edges_csv(std::ostream& out) const;

    // Indices of vertices whose position lies in the closed axis-aligned box.
    template <typename Fn>
    void for_each_in_box(double x_lo, double x_hi, double y_lo, double y_hi, Fn&& fn) const {
        const int c_lo = grid_col(x_lo), c_hi = grid_col(x_hi);
        const int r_lo = grid_row(y_lo), r_hi = grid_row(y_hi);
        for (int row = r_lo; row <= r_hi; ++row)
            for (int col = c_lo; col <= c_hi; ++col) {
                const std::size_t c = static_cast<std::size_t>(row) * cols_ + col;
                for (std::int32_t p = cell_start_[c]; p < cell_start_[c + 1]; ++p) {
                    const std::uint32_t idx = items_[p];
                    const Point pt = inst_.points[idx];
                    if (pt.x >= x_lo && pt.x <= x_hi && pt.y >= y_lo && pt.y <= y_hi)
                        fn(idx);
                }
            }
    }

  private:
    struct BfsOutcome {
        std::int32_t ecc = 0;
        std::uint32_t farthest = 0;
        std::size_t reached = 0;
    };

    BfsOutcome run_bfs(std::uint32_t source, std::uint32_t target,
                       std::vector<std::int32_t>& dist,
                       std::vector<std::uint32_t>* parent) const;
    BfsOutcome run_bfs_eager(std::uint32_t source, std::uint32_t target,
                             std::vector<std::int32_t>& dist,
                             std::vector<std::uint32_t>* parent) const;
    BfsOutcome run_bfs_lazy(std::uint32_t source, std::uint32_t target,
                            std::vector<std::int32_t>& dist,
                            std::vector<std::uint32_t>* parent) const;
    void check_index(std::uint32_t i) const;

    int grid_col(double x) const {
        int c = static_cast<int>(std::floor((x + origin_) / cell_));
        return c < 0 ? 0 : (c >= cols_ ? cols_ - 1 : c);
    }
    int grid_row(double y) const {
        int r = static_cast<int>(std::floor((y + origin_) / cell_));
        return r < 0 ? 0 : (r >= rows_ ? rows_ - 1 : r);
    }

    RggInstance inst_;
    double origin_ = 0.0;  // grid offset: cell (0,0) starts at (-origin, -origin)
    double cell_ = 1.0;
    int cols_ = 1;
    int rows_ = 1;
    std::vector<std::int32_t> cell_start_;  // CSR offsets, cells + 1
    std::vector<std::uint32_t> items_;      // point indices grouped by cell

    bool eager_ = false;
    std::vector<std::int64_t> adj_start_;  // n + 1 (eager)
    std::vector<std::uint32_t> adj_;       // 2|E| (eager)
};

}  // namespace rgg
