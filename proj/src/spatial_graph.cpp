#include "rgg/spatial_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rgg {

namespace {

constexpr std::uint32_t kNoTarget = UINT32_MAX;
constexpr std::size_t kExactDiameterLimit = 5000;

}  // namespace

GeoGraph GeoGraph::build(RggInstance instance, BuildOptions opts) {
    if (!(instance.r > 0.0)) throw std::invalid_argument("build: r must be > 0");
    if (instance.points.empty()) throw std::invalid_argument("build: instance has no points");
    if (instance.points.size() >= static_cast<std::size_t>(INT32_MAX))
        throw std::invalid_argument("build: too many points");

    GeoGraph g;
    g.inst_ = std::move(instance);
    const std::size_t n = g.inst_.points.size();
    const double r = g.inst_.r;
    const double half = g.inst_.half_side();
    const double side = 2.0 * half;

    const double expected_candidates =
        static_cast<double>(n) * std::min(static_cast<double>(n), M_PI * r * r);
    g.eager_ = opts.adjacency == BuildOptions::Adjacency::eager ||
               (opts.adjacency == BuildOptions::Adjacency::automatic &&
                expected_candidates <= opts.eager_candidate_limit);

    double cell = r;
    if (!g.eager_) {
        const int sub = std::max(1, opts.lazy_subdivision);
        // Keep the grid at most ~4n cells even for tiny radii.
        const double floor_cell = side / std::sqrt(std::max(1.0, 4.0 * static_cast<double>(n)));
        cell = std::max(r / sub, floor_cell);
    }
    g.cell_ = cell;
    g.origin_ = half;
    g.cols_ = std::max(1, static_cast<int>(std::ceil(side / cell)));
    g.rows_ = g.cols_;

    const std::size_t cells = static_cast<std::size_t>(g.cols_) * g.rows_;
    g.cell_start_.assign(cells + 1, 0);
    for (const Point& p : g.inst_.points) {
        const std::size_t c = static_cast<std::size_t>(g.grid_row(p.y)) * g.cols_ + g.grid_col(p.x);
        ++g.cell_start_[c + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) g.cell_start_[c + 1] += g.cell_start_[c];
    g.items_.resize(n);
    {
        std::vector<std::int32_t> cursor(g.cell_start_.begin(), g.cell_start_.end() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const Point p = g.inst_.points[i];
            const std::size_t c =
                static_cast<std::size_t>(g.grid_row(p.y)) * g.cols_ + g.grid_col(p.x);
            g.items_[cursor[c]++] = static_cast<std::uint32_t>(i);
        }
    }

    if (g.eager_) {
        const double rr = r * r;
        const auto& pts = g.inst_.points;
        g.adj_start_.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const Point pi = pts[i];
            std::int64_t deg = 0;
            g.for_each_in_box(pi.x - r, pi.x + r, pi.y - r, pi.y + r,
                              [&](std::uint32_t j) {
                                  if (j != i && sq_dist(pi, pts[j]) <= rr) ++deg;
                              });
            g.adj_start_[i + 1] = deg;
        }
        for (std::size_t i = 0; i < n; ++i) g.adj_start_[i + 1] += g.adj_start_[i];
        g.adj_.resize(static_cast<std::size_t>(g.adj_start_[n]));
        std::vector<std::int64_t> cursor(g.adj_start_.begin(), g.adj_start_.end() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const Point pi = pts[i];
            g.for_each_in_box(pi.x - r, pi.x + r, pi.y - r, pi.y + r,
                              [&](std::uint32_t j) {
                                  if (j != i && sq_dist(pi, pts[j]) <= rr)
                                      g.adj_[cursor[i]++] = j;
                              });
        }
        for (std::size_t i = 0; i < n; ++i)
            std::sort(g.adj_.begin() + g.adj_start_[i], g.adj_.begin() + g.adj_start_[i + 1]);
    }
    return g;
}

void GeoGraph::check_index(std::uint32_t i) const {
    if (i >= vertex_count()) throw std::out_of_range("vertex index out of range");
}

std::vector<std::uint32_t> GeoGraph::neighbors(std::uint32_t i) const {
    check_index(i);
    if (eager_)
        return {adj_.begin() + adj_start_[i], adj_.begin() + adj_start_[i + 1]};
    const Point pi = inst_.points[i];
    const double r = inst_.r, rr = r * r;
    std::vector<std::uint32_t> out;
    for_each_in_box(pi.x - r, pi.x + r, pi.y - r, pi.y + r, [&](std::uint32_t j) {
        if (j != i && sq_dist(pi, inst_.points[j]) <= rr) out.push_back(j);
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t GeoGraph::edge_count() const {
    if (!eager_) throw std::logic_error("edge_count: adjacency not materialized (lazy mode)");
    return adj_start_[vertex_count()] / 2;
}

GeoGraph::BfsOutcome GeoGraph::run_bfs(std::uint32_t source, std::uint32_t target,
                                       std::vector<std::int32_t>& dist,
                                       std::vector<std::uint32_t>* parent) const {
    dist.assign(vertex_count(), -1);
    if (parent) parent->assign(vertex_count(), UINT32_MAX);
    return eager_ ? run_bfs_eager(source, target, dist, parent)
                  : run_bfs_lazy(source, target, dist, parent);
}

GeoGraph::BfsOutcome GeoGraph::run_bfs_eager(std::uint32_t source, std::uint32_t target,
                                             std::vector<std::int32_t>& dist,
                                             std::vector<std::uint32_t>* parent) const {
    std::vector<std::uint32_t> queue;
    queue.reserve(vertex_count());
    queue.push_back(source);
    dist[source] = 0;
    BfsOutcome out;
    out.reached = 1;
    out.farthest = source;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t w = queue[head];
        const std::int32_t dw = dist[w];
        if (target != kNoTarget && w == target) break;
        for (std::int64_t p = adj_start_[w]; p < adj_start_[w + 1]; ++p) {
            const std::uint32_t q = adj_[p];
            if (dist[q] >= 0) continue;
            dist[q] = dw + 1;
            if (parent) (*parent)[q] = w;
            queue.push_back(q);
            ++out.reached;
            out.ecc = dw + 1;
            out.farthest = q;
        }
    }
    return out;
}

GeoGraph::BfsOutcome GeoGraph::run_bfs_lazy(std::uint32_t source, std::uint32_t target,
                                            std::vector<std::int32_t>& dist,
                                            std::vector<std::uint32_t>* parent) const {
    // Layer-synchronous BFS over the cell grid. Per layer, live cells are
    // classified against frontier cells: when even the farthest box corners
    // are within r the whole cell is absorbed without point tests; only
    // straddling cells fall back to per-point checks (exact d^2 <= r^2).
    // Each live point is therefore scanned O(layers) times, not once per
    // frontier vertex.
    const auto& pts = inst_.points;
    const double r = inst_.r, rr = r * r;
    const double s = cell_, s2 = s * s;
    const std::size_t cells = static_cast<std::size_t>(cols_) * rows_;
    const int wpr = (cols_ + 63) / 64;
    const int reach = static_cast<int>(std::ceil(r / s)) + 1;
    // Box-bound comparisons carry slack so rounding can only widen the scan
    // or skip an absorb; adjacency itself is always the exact squared test.
    const double rr_skip = rr * (1.0 + 1e-12);
    const double rr_absorb = rr * (1.0 - 1e-12);

    std::vector<std::uint32_t> live(items_);
    std::vector<std::int32_t> live_end(cells);
    for (std::size_t c = 0; c < cells; ++c) live_end[c] = cell_start_[c + 1];
    std::vector<std::uint64_t> occ(static_cast<std::size_t>(rows_) * wpr, 0);
    for (int row = 0; row < rows_; ++row) {
        std::uint64_t* mask = &occ[static_cast<std::size_t>(row) * wpr];
        for (int col = 0; col < cols_; ++col) {
            const std::size_t c = static_cast<std::size_t>(row) * cols_ + col;
            if (cell_start_[c + 1] > cell_start_[c]) mask[col >> 6] |= 1ULL << (col & 63);
        }
    }
    std::int64_t global_live = static_cast<std::int64_t>(vertex_count());

    auto cell_of = [&](std::uint32_t v) {
        return static_cast<std::size_t>(grid_row(pts[v].y)) * cols_ + grid_col(pts[v].x);
    };
    auto clear_occ = [&](std::size_t c) {
        occ[(c / cols_) * wpr + ((c % cols_) >> 6)] &= ~(1ULL << ((c % cols_) & 63));
    };

    // Detach the source from its cell.
    {
        const std::size_t c = cell_of(source);
        for (std::int32_t p = cell_start_[c]; p < live_end[c]; ++p)
            if (live[p] == source) {
                live[p] = live[--live_end[c]];
                --global_live;
                if (live_end[c] == cell_start_[c]) clear_occ(c);
                break;
            }
    }

    dist[source] = 0;
    BfsOutcome out;
    out.reached = 1;
    out.farthest = source;
    if (target == source) return out;

    std::vector<std::uint32_t> frontier{source}, next;
    std::vector<std::uint32_t> f_items(1);
    std::vector<std::int32_t> f_begin(cells), f_size(cells, 0), f_cursor(cells);
    std::vector<std::uint64_t> focc(static_cast<std::size_t>(rows_) * wpr, 0);
    std::vector<std::int32_t> cand_stamp(cells, -1);
    std::vector<std::int32_t> fcells, cand, straddle;
    bool found = false;
    std::int32_t layer = 0;

    while (!frontier.empty() && global_live > 0 && !found) {
        const std::int32_t dnext = ++layer;

        // Bucket the frontier by cell.
        fcells.clear();
        for (const std::uint32_t v : frontier) {
            const std::size_t c = cell_of(v);
            if (f_size[c]++ == 0) fcells.push_back(static_cast<std::int32_t>(c));
        }
        std::int32_t acc = 0;
        for (const std::int32_t c : fcells) {
            f_begin[c] = acc;
            f_cursor[c] = acc;
            acc += f_size[c];
            focc[(static_cast<std::size_t>(c) / cols_) * wpr + ((c % cols_) >> 6)] |=
                1ULL << ((c % cols_) & 63);
        }
        if (f_items.size() < frontier.size()) f_items.resize(frontier.size());
        for (const std::uint32_t v : frontier) f_items[f_cursor[cell_of(v)]++] = v;

        // Live cells within reach of any frontier cell.
        cand.clear();
        const std::int32_t epoch = layer;
        for (const std::int32_t cd : fcells) {
            const int rowD = cd / cols_, colD = cd % cols_;
            const int r_lo = std::max(0, rowD - reach), r_hi = std::min(rows_ - 1, rowD + reach);
            const int c_lo = std::max(0, colD - reach), c_hi = std::min(cols_ - 1, colD + reach);
            const int w_lo = c_lo >> 6, w_hi = c_hi >> 6;
            for (int row = r_lo; row <= r_hi; ++row) {
                const std::uint64_t* mask = &occ[static_cast<std::size_t>(row) * wpr];
                for (int word = w_lo; word <= w_hi; ++word) {
                    std::uint64_t bits = mask[word];
                    if (bits == 0) continue;
                    if (word == w_lo) bits &= ~0ULL << (c_lo & 63);
                    if (word == w_hi) {
                        const int top = c_hi & 63;
                        if (top != 63) bits &= (1ULL << (top + 1)) - 1;
                    }
                    while (bits != 0) {
                        const int col = (word << 6) | std::countr_zero(bits);
                        bits &= bits - 1;
                        const std::int32_t cc = row * cols_ + col;
                        if (cand_stamp[cc] != epoch) {
                            cand_stamp[cc] = epoch;
                            cand.push_back(cc);
                        }
                    }
                }
            }
        }

        for (const std::int32_t cc : cand) {
            if (found) break;
            if (live_end[cc] == cell_start_[cc]) continue;
            const int rowC = cc / cols_, colC = cc % cols_;

            // Classify against nearby frontier cells.
            std::int32_t absorber = -1;
            straddle.clear();
            const int r_lo = std::max(0, rowC - reach), r_hi = std::min(rows_ - 1, rowC + reach);
            const int c_lo = std::max(0, colC - reach), c_hi = std::min(cols_ - 1, colC + reach);
            const int w_lo = c_lo >> 6, w_hi = c_hi >> 6;
            for (int row = r_lo; row <= r_hi && absorber < 0; ++row) {
                const std::uint64_t* mask = &focc[static_cast<std::size_t>(row) * wpr];
                for (int word = w_lo; word <= w_hi && absorber < 0; ++word) {
                    std::uint64_t bits = mask[word];
                    if (bits == 0) continue;
                    if (word == w_lo) bits &= ~0ULL << (c_lo & 63);
                    if (word == w_hi) {
                        const int top = c_hi & 63;
                        if (top != 63) bits &= (1ULL << (top + 1)) - 1;
                    }
                    while (bits != 0) {
                        const int col = (word << 6) | std::countr_zero(bits);
                        bits &= bits - 1;
                        const int dr = std::abs(rowC - row), dc = std::abs(colC - col);
                        const double gr = dr > 1 ? dr - 1 : 0, gc = dc > 1 ? dc - 1 : 0;
                        if ((gr * gr + gc * gc) * s2 > rr_skip) continue;
                        const double hr = dr + 1, hc = dc + 1;
                        const std::int32_t cd = row * cols_ + col;
                        if ((hr * hr + hc * hc) * s2 <= rr_absorb) {
                            absorber = cd;
                            break;
                        }
                        straddle.push_back(cd);
                    }
                }
            }

            auto assign = [&](std::uint32_t q, std::uint32_t from) {
                dist[q] = dnext;
                if (parent) (*parent)[q] = from;
                next.push_back(q);
                ++out.reached;
                out.ecc = dnext;
                out.farthest = q;
                if (target != kNoTarget && q == target) found = true;
            };

            if (absorber >= 0) {
                const std::uint32_t from = f_items[f_begin[absorber]];
                const std::int32_t cnt = live_end[cc] - cell_start_[cc];
                for (std::int32_t p = cell_start_[cc]; p < live_end[cc]; ++p)
                    assign(live[p], from);
                live_end[cc] = cell_start_[cc];
                global_live -= cnt;
                clear_occ(static_cast<std::size_t>(cc));
                continue;
            }
            if (straddle.empty()) continue;

            for (std::int32_t p = cell_start_[cc]; p < live_end[cc];) {
                const std::uint32_t q = live[p];
                const double qx = pts[q].x, qy = pts[q].y;
                std::uint32_t from = UINT32_MAX;
                for (const std::int32_t cd : straddle) {
                    const int rowD = cd / cols_, colD = cd % cols_;
                    const double bx = -origin_ + colD * s, by = -origin_ + rowD * s;
                    const double dxm = std::max({0.0, bx - qx, qx - (bx + s)});
                    const double dym = std::max({0.0, by - qy, qy - (by + s)});
                    if (dxm * dxm + dym * dym > rr_skip) continue;
                    const std::int32_t fe = f_begin[cd] + f_size[cd];
                    for (std::int32_t fi = f_begin[cd]; fi < fe; ++fi) {
                        const std::uint32_t pf = f_items[fi];
                        const double dx = pts[pf].x - qx, dy = pts[pf].y - qy;
                        if (dx * dx + dy * dy <= rr) {
                            from = pf;
                            break;
                        }
                    }
                    if (from != UINT32_MAX) break;
                }
                if (from != UINT32_MAX) {
                    assign(q, from);
                    live[p] = live[--live_end[cc]];
                    --global_live;
                    if (found) break;
                } else {
                    ++p;
                }
            }
            if (live_end[cc] == cell_start_[cc]) clear_occ(static_cast<std::size_t>(cc));
        }

        // Reset the per-layer frontier structures (touched entries only).
        for (const std::int32_t c : fcells) {
            f_size[c] = 0;
            focc[(static_cast<std::size_t>(c) / cols_) * wpr + ((c % cols_) >> 6)] &=
                ~(1ULL << ((c % cols_) & 63));
        }
        frontier.swap(next);
        next.clear();
    }
    return out;
}

DistanceResult GeoGraph::bfs_distance(std::uint32_t u, std::uint32_t v, bool want_path) const {
    check_index(u);
    check_index(v);
    DistanceResult res;
    res.source = u;
    res.target = v;
    if (u == v) {
        res.hops = 0;
        if (want_path) res.path = {u};
        return res;
    }
    std::vector<std::int32_t> dist;
    std::vector<std::uint32_t> parent;
    run_bfs(u, v, dist, want_path ? &parent : nullptr);
    res.hops = dist[v];
    if (want_path && res.reachable()) {
        std::vector<std::uint32_t> rev;
        for (std::uint32_t x = v; x != u; x = parent[x]) rev.push_back(x);
        rev.push_back(u);
        res.path.assign(rev.rbegin(), rev.rend());
    }
    return res;
}

std::vector<std::int32_t> GeoGraph::bfs_all(std::uint32_t source) const {
    check_index(source);
    std::vector<std::int32_t> dist;
    run_bfs(source, kNoTarget, dist, nullptr);
    return dist;
}

bool GeoGraph::is_connected() const {
    std::vector<std::int32_t> dist;
    const BfsOutcome out = run_bfs(0, kNoTarget, dist, nullptr);
    return out.reached == vertex_count();
}

DiameterEstimate GeoGraph::diameter(DiameterMode mode) const {
    const std::size_t n = vertex_count();
    std::vector<std::int32_t> dist;
    const BfsOutcome first = run_bfs(0, kNoTarget, dist, nullptr);
    if (first.reached != n) throw std::invalid_argument("diameter: graph is disconnected");

    if (mode == DiameterMode::exact) {
        if (n > kExactDiameterLimit)
            throw std::invalid_argument("diameter: exact mode is limited to 5000 vertices");
        std::int32_t best = 0;
        for (std::uint32_t s = 0; s < n; ++s) {
            const BfsOutcome o = run_bfs(s, kNoTarget, dist, nullptr);
            best = std::max(best, o.ecc);
        }
        return {DiameterMode::exact, best, best};
    }

    // Double-sweep / midpoint bracket:
    //   lower = max eccentricity over probes, upper = 2 * min eccentricity.
    std::int32_t lb = first.ecc, min_ecc = first.ecc;
    auto probe = [&](std::uint32_t s, std::vector<std::uint32_t>* parent) {
        const BfsOutcome o = run_bfs(s, kNoTarget, dist, parent);
        lb = std::max(lb, o.ecc);
        min_ecc = std::min(min_ecc, o.ecc);
        return o;
    };

    // Vertex closest to the domain center has near-minimal eccentricity.
    std::uint32_t center = 0;
    double best_c = std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < n; ++i) {
        const double d2 = inst_.points[i].x * inst_.points[i].x +
                          inst_.points[i].y * inst_.points[i].y;
        if (d2 < best_c) {
            best_c = d2;
            center = i;
        }
    }
    const BfsOutcome oc = probe(center, nullptr);

    // Sweep: farthest vertex, then farthest-from-farthest, then the midpoint
    // of the connecting path.
    std::vector<std::uint32_t> parent;
    const BfsOutcome oa = probe(oc.farthest, &parent);
    std::uint32_t mid = oa.farthest;
    for (std::int32_t step = 0; step < oa.ecc / 2; ++step) mid = parent[mid];
    probe(mid, nullptr);

    for (const auto& cv : corner_vertices())
        if (cv && lb < 2 * min_ecc) probe(*cv, nullptr);

    const std::int32_t ub = 2 * min_ecc;
    return {lb == ub ? DiameterMode::exact : DiameterMode::bounded, lb, ub};
}

std::array<std::optional<std::uint32_t>, 4> GeoGraph::corner_vertices() const {
    const double half = inst_.half_side();
    const double ell = inst_.n > 1 ? std::log(static_cast<double>(inst_.n)) : 0.0;
    const std::array<Point, 4> corners{Point{-half, -half}, Point{half, -half},
                                       Point{-half, half}, Point{half, half}};
    std::array<std::optional<std::uint32_t>, 4> out;
    for (int k = 0; k < 4; ++k) {
        const Point c = corners[k];
        double best = std::numeric_limits<double>::infinity();
        std::optional<std::uint32_t> pick;
        for (std::uint32_t i = 0; i < vertex_count(); ++i) {
            const Point p = inst_.points[i];
            if (std::fabs(p.x - c.x) > ell || std::fabs(p.y - c.y) > ell) continue;
            const double d2 = sq_dist(p, c);
            if (d2 < best) {
                best = d2;
                pick = i;
            }
        }
        out[k] = pick;
    }
    return out;
}

void GeoGraph::export_edges_csv(std::ostream& out) const {
    out << "src,dst\n";
    const double r = inst_.r, rr = r * r;
    for (std::uint32_t i = 0; i < vertex_count(); ++i) {
        if (eager_) {
            for (std::int64_t p = adj_start_[i]; p < adj_start_[i + 1]; ++p)
                if (adj_[p] > i) out << i << ',' << adj_[p] << '\n';
        } else {
            const Point pi = inst_.points[i];
            std::vector<std::uint32_t> up;
            for_each_in_box(pi.x - r, pi.x + r, pi.y - r, pi.y + r, [&](std::uint32_t j) {
                if (j > i && sq_dist(pi, inst_.points[j]) <= rr) up.push_back(j);
            });
            std::sort(up.begin(), up.end());
            for (const std::uint32_t j : up) out << i << ',' << j << '\n';
        }
    }
}

}  // namespace rgg
