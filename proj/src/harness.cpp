#include "rgg/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rgg/bounds.hpp"
#include "rgg/concentration.hpp"
#include "rgg/spatial_graph.hpp"
#include "rgg/strip_path.hpp"

namespace rgg {

namespace {

constexpr std::uint64_t kPairTag = 0x70616972;   // pair selection stream
constexpr std::uint64_t kSetupTag = 0x73657475;  // per-trial auxiliary draws

double wall_ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct Cell {
    std::int64_t n;
    double r;
    std::string r_token;
};

std::vector<Cell> resolve_grid(const ExperimentConfig& cfg) {
    if (cfg.n_list.empty() || cfg.r_list.empty())
        throw std::invalid_argument("experiment needs at least one n and one r");
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<Cell> cells;
    for (const std::int64_t n : cfg.n_list)
        for (const std::string& tok : cfg.r_list)
            cells.push_back({n, resolve_r(tok, static_cast<double>(n)), tok});
    return cells;
}

RggInstance sample_instance(const ExperimentConfig& cfg, std::int64_t n, double r,
                            SeedSpec seed) {
    return cfg.model == Model::uniform_n ? sample_uniform(n, r, seed)
                                         : sample_poissonized(n, r, seed);
}

// Distinct random vertex pair.
std::pair<std::uint32_t, std::uint32_t> draw_pair(Rng& rng, std::size_t count) {
    const auto a = static_cast<std::uint32_t>(rng.below(count));
    std::uint32_t b = a;
    while (b == a) b = static_cast<std::uint32_t>(rng.below(count));
    return {a, b};
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> corner_pairs(const GeoGraph& g) {
    const auto corners = g.corner_vertices();
    std::vector<std::uint32_t> present;
    for (const auto& c : corners)
        if (c) present.push_back(*c);
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::size_t i = 0; i < present.size(); ++i)
        for (std::size_t j = i + 1; j < present.size(); ++j)
            pairs.emplace_back(present[i], present[j]);
    return pairs;
}

nlohmann::json base_meta(const ExperimentConfig& cfg, const char* name) {
    nlohmann::json meta;
    meta["experiment"] = name;
    meta["n_list"] = cfg.n_list;
    meta["r_list"] = cfg.r_list;
    meta["trials"] = cfg.trials;
    meta["pairs_per_trial"] = cfg.pairs_per_trial;
    meta["master_seed"] = cfg.master_seed;
    meta["model"] = model_name(cfg.model);
    return meta;
}

}  // namespace

double resolve_r(const std::string& token, double n) {
    if (token == "rc") return connectivity_threshold(n);
    if (token == "70sqrtlog") {
        if (!(n > 1.0)) throw std::invalid_argument("70sqrtlog needs n > 1");
        return 70.0 * std::sqrt(std::log(n));
    }
    if (token.rfind("rc*", 0) == 0) {
        const double factor = std::stod(token.substr(3));
        if (!(factor > 0.0)) throw std::invalid_argument("rc* factor must be > 0");
        return factor * connectivity_threshold(n);
    }
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("bad r token: " + token);
    if (!(value > 0.0)) throw std::invalid_argument("r must be > 0");
    return value;
}

int default_jobs() {
    if (const char* env = std::getenv("RGG_JOBS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

void parallel_for(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& fn) {
    if (jobs <= 0) jobs = default_jobs();
    jobs = static_cast<int>(std::min<std::int64_t>(jobs, std::max<std::int64_t>(1, count)));
    if (jobs == 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::uint64_t Report::canonical_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    auto feed = [&h](const std::string& s) {
        for (const unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
    };
    auto cell_text = [](const nlohmann::json& v) -> std::string {
        if (v.is_null()) return "";
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    };
    for (const std::string& c : columns)
        if (c != "wall_ms") feed(c + ",");
    feed("\n");
    for (const nlohmann::json& row : rows) {
        for (const std::string& c : columns) {
            if (c == "wall_ms") continue;
            feed(cell_text(row.contains(c) ? row.at(c) : nlohmann::json()) + ",");
        }
        feed("\n");
    }
    return h;
}

void Report::write_csv(std::ostream& out) const {
    auto cell_text = [](const nlohmann::json& v) -> std::string {
        if (v.is_null()) return "";
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    };
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? ',' : '\n');
    for (const nlohmann::json& row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out << cell_text(row.contains(columns[i]) ? row.at(columns[i]) : nlohmann::json());
            out << (i + 1 < columns.size() ? ',' : '\n');
        }
    }
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(canonical_hash()));
    out << "# summary " << summary.dump() << "\n";
    out << "# canonical_hash " << hex << "\n";
}

void Report::write_json(std::ostream& out) const {
    nlohmann::json j;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(canonical_hash()));
    j["meta"] = meta;
    j["meta"]["canonical_hash"] = hex;
    j["columns"] = columns;
    j["rows"] = rows;
    j["summary"] = summary;
    j["failed"] = failed;
    out << j.dump(2) << "\n";
}

void Report::write(std::ostream& out, ReportFormat fmt) const {
    if (fmt == ReportFormat::csv)
        write_csv(out);
    else
        write_json(out);
}

// ---------------------------------------------------------------------------
// verify-bounds

Report run_verify_bounds(const ExperimentConfig& cfg) {
    const std::vector<Cell> cells = resolve_grid(cfg);
    Report rep;
    rep.experiment = "verify-bounds";
    rep.meta = base_meta(cfg, "verify-bounds");
    rep.columns = {"experiment", "n",          "r",           "trial",      "seed_index", "pair_kind",
                   "u",          "v",          "d_e",         "reachable",  "d_g",
                   "det_floor",  "det_ok",     "term_log",    "term_poly",  "term_const",
                   "gamma",      "lower_applicable", "lower_value", "lower_ok",
                   "upper_applicable", "upper_value", "upper_ok", "wall_ms"};

    const std::int64_t total = static_cast<std::int64_t>(cells.size()) * cfg.trials;
    std::vector<std::vector<nlohmann::json>> slots(static_cast<std::size_t>(total));

    parallel_for(total, cfg.jobs, [&](std::int64_t flat) {
        const auto t0 = std::chrono::steady_clock::now();
        const Cell& cell = cells[static_cast<std::size_t>(flat / cfg.trials)];
        const std::int64_t trial = flat % cfg.trials;
        const SeedSpec seed{cfg.master_seed, static_cast<std::uint64_t>(flat)};
        const RggInstance inst = sample_instance(cfg, cell.n, cell.r, seed);
        const GeoGraph g = GeoGraph::build(inst);

        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        std::vector<const char*> kinds;
        Rng rng(seed.child(kPairTag));
        for (int p = 0; p < cfg.pairs_per_trial; ++p) {
            pairs.push_back(draw_pair(rng, g.vertex_count()));
            kinds.push_back("random");
        }
        for (const auto& pr : corner_pairs(g)) {
            pairs.push_back(pr);
            kinds.push_back("corner");
        }

        std::vector<nlohmann::json>& out = slots[static_cast<std::size_t>(flat)];
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto [a, b] = pairs[p];
            const double d_e = euclid_dist(inst.points[a], inst.points[b]);
            const DistanceResult dr = g.bfs_distance(a, b);
            nlohmann::json row;
            row["experiment"] = "verify-bounds";
            row["n"] = cell.n;
            row["r"] = cell.r;
            row["trial"] = trial;
            row["seed_index"] = flat;
            row["pair_kind"] = kinds[p];
            row["u"] = a;
            row["v"] = b;
            row["d_e"] = d_e;
            row["reachable"] = dr.reachable();
            row["d_g"] = dr.hops;
            if (dr.reachable()) {
                const BoundReport br =
                    evaluate_pair({static_cast<double>(cell.n), cell.r, d_e}, dr.hops);
                const auto det_floor = static_cast<std::int64_t>(std::ceil(d_e / cell.r));
                row["det_floor"] = det_floor;
                row["det_ok"] = dr.hops >= det_floor;
                row["term_log"] = br.gamma.term_log;
                row["term_poly"] = br.gamma.term_poly;
                row["term_const"] = br.gamma.term_const;
                row["gamma"] = br.gamma.gamma;
                row["lower_applicable"] = br.lower.applicable;
                row["lower_value"] = br.lower.value;
                row["lower_ok"] =
                    br.lower_satisfied ? nlohmann::json(*br.lower_satisfied) : nlohmann::json();
                row["upper_applicable"] = br.upper.applicable;
                row["upper_value"] = br.upper.value;
                row["upper_ok"] =
                    br.upper_satisfied ? nlohmann::json(*br.upper_satisfied) : nlohmann::json();
            }
            row["wall_ms"] = wall_ms_since(t0);
            out.push_back(std::move(row));
        }
    });

    // Aggregate per cell.
    struct Agg {
        std::int64_t pairs = 0, unreachable = 0, det_viol = 0;
        std::int64_t lower_checked = 0, lower_viol = 0, upper_checked = 0, upper_viol = 0;
    };
    std::vector<Agg> agg(cells.size());
    for (std::int64_t flat = 0; flat < total; ++flat) {
        Agg& a = agg[static_cast<std::size_t>(flat / cfg.trials)];
        for (const nlohmann::json& row : slots[static_cast<std::size_t>(flat)]) {
            rep.rows.push_back(row);
            ++a.pairs;
            if (!row.at("reachable").get<bool>()) {
                ++a.unreachable;
                continue;
            }
            if (!row.at("det_ok").get<bool>()) ++a.det_viol;
            if (row.at("lower_applicable").get<bool>()) {
                ++a.lower_checked;
                if (!row.at("lower_ok").get<bool>()) ++a.lower_viol;
            }
            if (row.at("upper_applicable").get<bool>()) {
                ++a.upper_checked;
                if (!row.at("upper_ok").get<bool>()) ++a.upper_viol;
            }
        }
    }
    nlohmann::json cells_json = nlohmann::json::array();
    std::int64_t violations = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Agg& a = agg[c];
        violations += a.det_viol + a.lower_viol + a.upper_viol;
        cells_json.push_back({{"n", cells[c].n},
                              {"r", cells[c].r},
                              {"pairs", a.pairs},
                              {"unreachable", a.unreachable},
                              {"det_violations", a.det_viol},
                              {"lower_checked", a.lower_checked},
                              {"lower_violations", a.lower_viol},
                              {"upper_checked", a.upper_checked},
                              {"upper_violations", a.upper_viol}});
    }
    rep.summary = {{"cells", cells_json}, {"violations_total", violations}};
    rep.failed = violations > 0;
    return rep;
}

// ---------------------------------------------------------------------------
// threshold-sweep

Report run_threshold_sweep(const ExperimentConfig& cfg) {
    const std::vector<Cell> cells = resolve_grid(cfg);
    Report rep;
    rep.experiment = "threshold-sweep";
    rep.meta = base_meta(cfg, "threshold-sweep");
    rep.columns = {"experiment", "n", "r", "r_token", "trial", "seed_index", "connected", "wall_ms"};

    const std::int64_t total = static_cast<std::int64_t>(cells.size()) * cfg.trials;
    std::vector<nlohmann::json> slots(static_cast<std::size_t>(total));
    parallel_for(total, cfg.jobs, [&](std::int64_t flat) {
        const auto t0 = std::chrono::steady_clock::now();
        const Cell& cell = cells[static_cast<std::size_t>(flat / cfg.trials)];
        const SeedSpec seed{cfg.master_seed, static_cast<std::uint64_t>(flat)};
        const RggInstance inst = sample_instance(cfg, cell.n, cell.r, seed);
        const GeoGraph g = GeoGraph::build(inst);
        nlohmann::json row;
        row["experiment"] = "threshold-sweep";
        row["n"] = cell.n;
        row["r"] = cell.r;
        row["r_token"] = cell.r_token;
        row["trial"] = flat % cfg.trials;
        row["seed_index"] = flat;
        row["connected"] = g.is_connected();
        row["wall_ms"] = wall_ms_since(t0);
        slots[static_cast<std::size_t>(flat)] = std::move(row);
    });

    nlohmann::json cells_json = nlohmann::json::array();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::int64_t connected = 0;
        for (int t = 0; t < cfg.trials; ++t) {
            const nlohmann::json& row = slots[c * cfg.trials + t];
            rep.rows.push_back(row);
            if (row.at("connected").get<bool>()) ++connected;
        }
        cells_json.push_back({{"n", cells[c].n},
                              {"r", cells[c].r},
                              {"r_token", cells[c].r_token},
                              {"trials", cfg.trials},
                              {"connected_freq",
                               static_cast<double>(connected) / cfg.trials}});
    }
    // Monotone-trend check across increasing r within each n (3 sigma slack).
    bool monotone = true;
    for (const std::int64_t n : cfg.n_list) {
        std::vector<std::pair<double, double>> curve;
        for (const auto& cell : cells_json)
            if (cell.at("n").get<std::int64_t>() == n)
                curve.emplace_back(cell.at("r").get<double>(),
                                   cell.at("connected_freq").get<double>());
        std::sort(curve.begin(), curve.end());
        for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
            const double p = 0.5 * (curve[i].second + curve[i + 1].second);
            const double sigma =
                std::sqrt(std::max(p * (1.0 - p), 1e-9) * 2.0 / cfg.trials);
            if (curve[i + 1].second < curve[i].second - 3.0 * sigma) monotone = false;
        }
    }
    rep.summary = {{"cells", cells_json}, {"monotone_within_noise", monotone}};
    return rep;
}

// ---------------------------------------------------------------------------
// diameter

Report run_diameter(const ExperimentConfig& cfg) {
    const std::vector<Cell> cells = resolve_grid(cfg);
    Report rep;
    rep.experiment = "diameter";
    rep.meta = base_meta(cfg, "diameter");
    rep.meta["ref_c"] = cfg.ref_c;
    rep.columns = {"experiment", "n",          "r",          "trial",     "seed_index", "connected",
                   "mode",       "diam_lower", "diam_upper", "bound_applicable",
                   "bound_value", "bound_ceil", "ref_prior", "within_bound", "wall_ms"};

    const std::int64_t total = static_cast<std::int64_t>(cells.size()) * cfg.trials;
    std::vector<nlohmann::json> slots(static_cast<std::size_t>(total));
    parallel_for(total, cfg.jobs, [&](std::int64_t flat) {
        const auto t0 = std::chrono::steady_clock::now();
        const Cell& cell = cells[static_cast<std::size_t>(flat / cfg.trials)];
        const SeedSpec seed{cfg.master_seed, static_cast<std::uint64_t>(flat)};
        const RggInstance inst = sample_instance(cfg, cell.n, cell.r, seed);
        const GeoGraph g = GeoGraph::build(inst);

        nlohmann::json row;
        row["experiment"] = "diameter";
        row["n"] = cell.n;
        row["r"] = cell.r;
        row["trial"] = flat % cfg.trials;
        row["seed_index"] = flat;
        const DiameterBoundValue bound =
            diameter_bound(static_cast<double>(cell.n), cell.r);
        row["bound_applicable"] = bound.applicable;
        row["bound_value"] = bound.value;
        row["bound_ceil"] = bound.ceil_value;
        row["ref_prior"] = cell.n >= 16
                               ? nlohmann::json(reference_prior_diameter(
                                     static_cast<double>(cell.n), cell.r, cfg.ref_c))
                               : nlohmann::json();
        if (g.is_connected()) {
            const DiameterMode mode = g.vertex_count() <= 5000 ? DiameterMode::exact
                                                               : DiameterMode::bounded;
            const DiameterEstimate est = g.diameter(mode);
            row["connected"] = true;
            row["mode"] = est.mode == DiameterMode::exact ? "exact" : "bounded";
            row["diam_lower"] = est.lower;
            row["diam_upper"] = est.upper;
            row["within_bound"] = bound.applicable
                                      ? nlohmann::json(est.upper <= bound.ceil_value)
                                      : nlohmann::json();
        } else {
            row["connected"] = false;
        }
        row["wall_ms"] = wall_ms_since(t0);
        slots[static_cast<std::size_t>(flat)] = std::move(row);
    });

    std::int64_t violations = 0, disconnected = 0;
    for (const nlohmann::json& row : slots) {
        rep.rows.push_back(row);
        if (!row.at("connected").get<bool>()) {
            ++disconnected;
            continue;
        }
        if (row.contains("within_bound") && row.at("within_bound").is_boolean() &&
            !row.at("within_bound").get<bool>())
            ++violations;
    }
    rep.summary = {{"violations", violations}, {"disconnected", disconnected}};
    rep.failed = violations > 0;
    return rep;
}

// ---------------------------------------------------------------------------
// strip-path

Report run_strip_path(const ExperimentConfig& cfg) {
    const std::vector<Cell> cells = resolve_grid(cfg);
    Report rep;
    rep.experiment = "strip-path";
    rep.meta = base_meta(cfg, "strip-path");
    rep.columns = {"experiment", "n",      "r",      "trial",  "seed_index", "pair",   "u",
                   "v",          "t",      "fit_ok", "delta",  "paper_regime",
                   "alpha",      "rho",    "budget_k", "status", "hops",
                   "bfs_hops",   "valid",  "fail_bound_log", "wall_ms"};

    const std::int64_t total = static_cast<std::int64_t>(cells.size()) * cfg.trials;
    std::vector<std::vector<nlohmann::json>> slots(static_cast<std::size_t>(total));
    parallel_for(total, cfg.jobs, [&](std::int64_t flat) {
        const auto t0 = std::chrono::steady_clock::now();
        const Cell& cell = cells[static_cast<std::size_t>(flat / cfg.trials)];
        const SeedSpec seed{cfg.master_seed, static_cast<std::uint64_t>(flat)};
        const RggInstance inst = sample_instance(cfg, cell.n, cell.r, seed);
        const GeoGraph g = GeoGraph::build(inst);
        Rng rng(seed.child(kPairTag));

        ProofConstants consts;
        const double dmax = consts.delta_max(cell.r);
        if (consts.j > dmax) consts = consts.with_delta_reach(dmax, cell.r);

        std::vector<nlohmann::json>& out = slots[static_cast<std::size_t>(flat)];
        for (int p = 0; p < cfg.pairs_per_trial; ++p) {
            // Pairs with t > r; the one-hop clause is exercised in unit tests.
            std::uint32_t a = 0, b = 0;
            double t = 0.0;
            for (int attempt = 0; attempt < 200; ++attempt) {
                std::tie(a, b) = draw_pair(rng, g.vertex_count());
                t = euclid_dist(inst.points[a], inst.points[b]);
                if (t > cell.r) break;
            }
            if (!(t > cell.r)) continue;

            nlohmann::json row;
            row["experiment"] = "strip-path";
            row["n"] = cell.n;
            row["r"] = cell.r;
            row["trial"] = flat % cfg.trials;
            row["seed_index"] = flat;
            row["pair"] = p;
            row["u"] = a;
            row["v"] = b;
            row["t"] = t;
            const double delta =
                default_delta(static_cast<double>(cell.n), cell.r, t, consts);
            row["delta"] = delta;
            row["paper_regime"] = consts.paper_regime();
            const double alpha = choose_alpha(delta, cell.r, consts);
            row["alpha"] = alpha;
            const FailureBound fb = failure_probability_upper(
                t, cell.r, static_cast<double>(cell.n), delta, consts);
            row["fail_bound_log"] = fb.log_total;
            bool fit_ok = t > 2.0 * StripPlacement::kInnerMarginFactor * alpha;
            if (fit_ok) {
                try {
                    const StripPlacement pl =
                        fit_strip(inst.points[a], inst.points[b], alpha,
                                  static_cast<double>(cell.n));
                    const StripPathResult res = greedy_strip_path(g, pl, a, b, delta, consts);
                    row["rho"] = res.chain.rho;
                    row["budget_k"] = res.chain.hop_budget;
                    row["status"] = strip_path_status_name(res.status);
                    if (res.status == StripPathStatus::success) {
                        const DistanceResult dr = g.bfs_distance(a, b);
                        row["hops"] = res.hops;
                        row["bfs_hops"] = dr.hops;
                        row["valid"] = res.hops <= res.chain.hop_budget && dr.reachable() &&
                                       dr.hops <= res.hops &&
                                       dr.hops <= res.chain.hop_budget;
                    }
                } catch (const StripFitError&) {
                    fit_ok = false;
                }
            }
            row["fit_ok"] = fit_ok;
            row["wall_ms"] = wall_ms_since(t0);
            out.push_back(std::move(row));
        }
    });

    std::int64_t attempted = 0, fit_failed = 0, success = 0, invalid = 0;
    double fail_bound_log_sum = 0.0;
    for (const auto& group : slots)
        for (const nlohmann::json& row : group) {
            rep.rows.push_back(row);
            ++attempted;
            fail_bound_log_sum += row.at("fail_bound_log").get<double>();
            if (!row.at("fit_ok").get<bool>()) {
                ++fit_failed;
                continue;
            }
            if (row.contains("status") && row.at("status") == "success") {
                ++success;
                if (!row.at("valid").get<bool>()) ++invalid;
            }
        }
    rep.summary = {{"attempted", attempted},
                   {"fit_failed", fit_failed},
                   {"success", success},
                   {"success_freq",
                    attempted ? static_cast<double>(success) / attempted : 0.0},
                   {"invalid_success_rows", invalid},
                   {"mean_fail_bound_log",
                    attempted ? fail_bound_log_sum / attempted : 0.0}};
    rep.failed = invalid > 0;
    return rep;
}

// ---------------------------------------------------------------------------
// certify

Report run_certify(const ExperimentConfig& cfg) {
    const std::vector<Cell> cells = resolve_grid(cfg);
    Report rep;
    rep.experiment = "certify";
    rep.meta = base_meta(cfg, "certify");
    rep.columns = {"experiment", "n", "r", "trial", "seed_index", "u", "v", "t", "k", "alpha",
                   "precondition", "certified", "bfs_hops", "consistent", "wall_ms"};

    const std::int64_t total = static_cast<std::int64_t>(cells.size()) * cfg.trials;
    std::vector<nlohmann::json> slots(static_cast<std::size_t>(total));
    parallel_for(total, cfg.jobs, [&](std::int64_t flat) {
        const auto t0 = std::chrono::steady_clock::now();
        const Cell& cell = cells[static_cast<std::size_t>(flat / cfg.trials)];
        const SeedSpec seed{cfg.master_seed, static_cast<std::uint64_t>(flat)};
        const RggInstance inst = sample_instance(cfg, cell.n, cell.r, seed);
        const GeoGraph g = GeoGraph::build(inst);
        Rng rng(seed.child(kSetupTag));

        const auto [a, b] = draw_pair(rng, g.vertex_count());
        const double t = euclid_dist(inst.points[a], inst.points[b]);
        const std::int64_t k_max =
            std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t / cell.r)) + 2);
        const std::int64_t k =
            cfg.cert_k > 0 ? cfg.cert_k
                           : 1 + static_cast<std::int64_t>(
                                     rng.below(static_cast<std::uint64_t>(k_max)));
        const double alpha = default_chain_alpha(k, cell.r, std::max(t, 1e-9));
        const StripPlacement pl = StripPlacement::frame(inst.points[a], inst.points[b], alpha);
        const ChainCertificate cert = lower_chain_certificate(g, pl, a, b, k);
        const bool pre = strip_precondition(t, k, cell.r, alpha);
        const DistanceResult dr = g.bfs_distance(a, b);
        const bool contradiction =
            cert.certified && pre && dr.reachable() && dr.hops <= k;

        nlohmann::json row;
        row["experiment"] = "certify";
        row["n"] = cell.n;
        row["r"] = cell.r;
        row["trial"] = flat % cfg.trials;
        row["seed_index"] = flat;
        row["u"] = a;
        row["v"] = b;
        row["t"] = t;
        row["k"] = k;
        row["alpha"] = alpha;
        row["precondition"] = pre;
        row["certified"] = cert.certified;
        row["bfs_hops"] = dr.hops;
        row["consistent"] = !contradiction;
        row["wall_ms"] = wall_ms_since(t0);
        slots[static_cast<std::size_t>(flat)] = std::move(row);
    });

    std::int64_t inconsistent = 0, certified = 0;
    for (const nlohmann::json& row : slots) {
        rep.rows.push_back(row);
        if (row.at("certified").get<bool>()) ++certified;
        if (!row.at("consistent").get<bool>()) ++inconsistent;
    }
    rep.summary = {{"certified", certified}, {"inconsistent", inconsistent}};
    rep.failed = inconsistent > 0;
    return rep;
}

// ---------------------------------------------------------------------------
// tails

Report run_tails(const ExperimentConfig& cfg) {
    Report rep;
    rep.experiment = "tails";
    rep.meta = base_meta(cfg, "tails");
    rep.meta["tail_trials"] = cfg.tail_trials;
    rep.meta["tail_rate"] = cfg.tail_rate;
    rep.columns = {"experiment", "n_summands", "delta",     "side",  "rate", "trials",
                   "analytic",   "analytic_log", "empirical", "ci_radius", "pass", "wall_ms"};

    std::vector<TailQuery> queries;
    for (const std::int64_t n : cfg.tail_summands)
        for (const double delta : cfg.tail_deltas) {
            queries.push_back({n, delta, cfg.tail_rate, TailQuery::Side::upper});
            if (delta < 1.0)
                queries.push_back({n, delta, cfg.tail_rate, TailQuery::Side::lower});
        }

    std::vector<nlohmann::json> slots(queries.size());
    parallel_for(static_cast<std::int64_t>(queries.size()), cfg.jobs, [&](std::int64_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        const TailQuery& q = queries[static_cast<std::size_t>(i)];
        const TailCheckResult res = monte_carlo_tail(
            q, cfg.tail_trials, SeedSpec{cfg.master_seed, static_cast<std::uint64_t>(i)});
        nlohmann::json row;
        row["experiment"] = "tails";
        row["n_summands"] = q.n_summands;
        row["delta"] = q.delta;
        row["side"] = q.side == TailQuery::Side::upper ? "upper" : "lower";
        row["rate"] = q.rate;
        row["trials"] = res.trials;
        row["analytic"] = res.analytic_bound;
        row["analytic_log"] = res.analytic_log;
        row["empirical"] = res.empirical;
        row["ci_radius"] = res.ci_radius;
        row["pass"] = res.pass;
        row["wall_ms"] = wall_ms_since(t0);
        slots[static_cast<std::size_t>(i)] = std::move(row);
    });

    std::int64_t failures = 0;
    for (const nlohmann::json& row : slots) {
        rep.rows.push_back(row);
        if (!row.at("pass").get<bool>()) ++failures;
    }
    rep.summary = {{"cells", slots.size()}, {"failures", failures}};
    rep.failed = failures > 0;
    return rep;
}

Report run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::verify_bounds: return run_verify_bounds(cfg);
        case ExperimentKind::threshold_sweep: return run_threshold_sweep(cfg);
        case ExperimentKind::diameter: return run_diameter(cfg);
        case ExperimentKind::strip_path: return run_strip_path(cfg);
        case ExperimentKind::certify: return run_certify(cfg);
        case ExperimentKind::tails: return run_tails(cfg);
    }
    throw std::logic_error("unknown experiment kind");
}

// ---------------------------------------------------------------------------
// CLI

namespace {

void emit_report(const Report& rep, const std::string& out_path, ReportFormat fmt) {
    if (out_path.empty()) {
        rep.write(std::cout, fmt);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open for write: " + out_path);
    rep.write(out, fmt);
}

ReportFormat parse_format(const std::string& s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw std::invalid_argument("--format must be csv or json");
}

bool parse_point(const std::string& s, Point& p) {
    std::istringstream in(s);
    char comma = 0;
    return static_cast<bool>(in >> p.x >> comma >> p.y) && comma == ',';
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"random geometric graph hop-distance experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 1;
    std::uint64_t trial = 0;
    std::string out_path;
    std::string format = "csv";
    int jobs = 0;
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "csv or json")->capture_default_str();
    app.add_option("--jobs", jobs, "worker threads (0 = auto / RGG_JOBS)");

    // gen
    auto* gen = app.add_subcommand("gen", "sample an instance to CSV + JSON sidecar")->fallthrough();
    std::int64_t gen_n = 1000;
    std::string gen_r = "rc*2";
    std::string gen_model = "uniform-n";
    std::string gen_u, gen_v;
    gen->add_option("--n", gen_n, "expected point count")->required();
    gen->add_option("--r", gen_r, "radius (number, rc, rc*X, 70sqrtlog)")->required();
    gen->add_option("--model", gen_model, "uniform-n or poissonized-uv")
        ->capture_default_str();
    gen->add_option("--trial", trial, "trial index of the seed");
    gen->add_option("--u", gen_u, "fixed u as 'x,y' (poissonized only)");
    gen->add_option("--v", gen_v, "fixed v as 'x,y' (poissonized only)");
    std::string gen_edges;
    gen->add_option("--edges-out", gen_edges, "also write the edge list CSV here");

    // dist
    auto* dist = app.add_subcommand("dist", "graph distance between two vertices")->fallthrough();
    std::string dist_in;
    std::uint32_t dist_u = 0, dist_v = 0;
    bool dist_path = false;
    dist->add_option("--in", dist_in, "points CSV (sidecar required)")->required();
    dist->add_option("--u", dist_u, "source vertex index")->required();
    dist->add_option("--v", dist_v, "target vertex index")->required();
    dist->add_flag("--path", dist_path, "include a shortest path");
    bool dist_bounds = false;
    dist->add_flag("--bounds", dist_bounds, "include the bound evaluation for the pair");

    auto add_grid = [&](CLI::App* cmd, ExperimentConfig& cfg) {
        cmd->add_option("--n", cfg.n_list, "point counts")->required();
        cmd->add_option("--r", cfg.r_list, "radii (number, rc, rc*X, 70sqrtlog)")->required();
        cmd->add_option("--trials", cfg.trials, "trials per (n, r)")->capture_default_str();
    };

    ExperimentConfig verify_cfg;
    verify_cfg.kind = ExperimentKind::verify_bounds;
    auto* verify = app.add_subcommand("verify", "check hop bounds over sampled pairs")->fallthrough();
    add_grid(verify, verify_cfg);
    verify->add_option("--pairs", verify_cfg.pairs_per_trial, "random pairs per trial")
        ->capture_default_str();
    std::string verify_model = "uniform-n";
    verify->add_option("--model", verify_model, "uniform-n or poissonized-uv")
        ->capture_default_str();

    ExperimentConfig threshold_cfg;
    threshold_cfg.kind = ExperimentKind::threshold_sweep;
    auto* threshold = app.add_subcommand("threshold", "connectivity frequency sweep")->fallthrough();
    add_grid(threshold, threshold_cfg);

    ExperimentConfig diameter_cfg;
    diameter_cfg.kind = ExperimentKind::diameter;
    auto* diameter = app.add_subcommand("diameter", "empirical diameter vs bound")->fallthrough();
    add_grid(diameter, diameter_cfg);
    diameter->add_option("--ref-c", diameter_cfg.ref_c,
                         "constant of the comparison curve")
        ->capture_default_str();

    ExperimentConfig strip_cfg;
    strip_cfg.kind = ExperimentKind::strip_path;
    auto* strip = app.add_subcommand("strip-path", "greedy strip-path construction study")->fallthrough();
    add_grid(strip, strip_cfg);
    strip->add_option("--pairs", strip_cfg.pairs_per_trial, "pairs per trial")
        ->capture_default_str();

    ExperimentConfig certify_cfg;
    certify_cfg.kind = ExperimentKind::certify;
    auto* certify = app.add_subcommand("certify", "lower-bound chain certificates vs BFS")->fallthrough();
    add_grid(certify, certify_cfg);
    certify->add_option("--k", certify_cfg.cert_k, "hop budget (0 = randomized)")
        ->capture_default_str();

    ExperimentConfig tails_cfg;
    tails_cfg.kind = ExperimentKind::tails;
    auto* tails = app.add_subcommand("tails", "Monte Carlo validation of tail bounds")->fallthrough();
    tails->add_option("--n-summands", tails_cfg.tail_summands, "summand counts")
        ->capture_default_str();
    tails->add_option("--delta", tails_cfg.tail_deltas, "relative deviations")
        ->capture_default_str();
    tails->add_option("--trials", tails_cfg.tail_trials, "Monte Carlo trials per cell")
        ->capture_default_str();
    tails->add_option("--rate", tails_cfg.tail_rate, "exponential rate")
        ->capture_default_str();

    std::vector<const char*> argv;
    argv.push_back("rgg");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const ReportFormat fmt = parse_format(format);
        if (gen->parsed()) {
            const double r = resolve_r(gen_r, static_cast<double>(gen_n));
            const SeedSpec s{seed, trial};
            RggInstance inst;
            if (model_from_name(gen_model) == Model::uniform_n) {
                if (!gen_u.empty() || !gen_v.empty())
                    throw std::invalid_argument("--u/--v need --model poissonized-uv");
                inst = sample_uniform(gen_n, r, s);
            } else {
                std::optional<Point> u, v;
                Point p;
                if (!gen_u.empty()) {
                    if (!parse_point(gen_u, p)) throw std::invalid_argument("bad --u");
                    u = p;
                }
                if (!gen_v.empty()) {
                    if (!parse_point(gen_v, p)) throw std::invalid_argument("bad --v");
                    v = p;
                }
                inst = sample_poissonized(gen_n, r, s, u, v);
            }
            if (out_path.empty()) throw std::invalid_argument("gen requires --out");
            write_points_csv(inst, out_path);
            std::cout << "wrote " << inst.points.size() << " points to " << out_path
                      << " (+ " << sidecar_path(out_path) << ")\n";
            if (!gen_edges.empty()) {
                std::ofstream eout(gen_edges);
                if (!eout) throw std::runtime_error("cannot open for write: " + gen_edges);
                GeoGraph::build(inst).export_edges_csv(eout);
                std::cout << "wrote edge list to " << gen_edges << "\n";
            }
            return 0;
        }
        if (dist->parsed()) {
            const RggInstance inst = load_points_csv(dist_in);
            const GeoGraph g = GeoGraph::build(inst);
            const DistanceResult res = g.bfs_distance(dist_u, dist_v, dist_path);
            nlohmann::json j;
            j["u"] = dist_u;
            j["v"] = dist_v;
            j["d_e"] = euclid_dist(inst.points[dist_u], inst.points[dist_v]);
            j["reachable"] = res.reachable();
            j["hops"] = res.hops;
            if (dist_path && res.reachable()) j["path"] = res.path;
            if (dist_bounds && res.reachable())
                j["bounds"] = to_json(evaluate_pair(
                    {static_cast<double>(inst.n), inst.r, j["d_e"].get<double>()}, res.hops));
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        ExperimentConfig* cfg = nullptr;
        if (verify->parsed()) {
            verify_cfg.model = model_from_name(verify_model);
            cfg = &verify_cfg;
        } else if (threshold->parsed())
            cfg = &threshold_cfg;
        else if (diameter->parsed())
            cfg = &diameter_cfg;
        else if (strip->parsed())
            cfg = &strip_cfg;
        else if (certify->parsed())
            cfg = &certify_cfg;
        else if (tails->parsed())
            cfg = &tails_cfg;
        if (!cfg) return 2;
        cfg->master_seed = seed;
        cfg->jobs = jobs;
        const Report rep = run_experiment(*cfg);
        emit_report(rep, out_path, fmt);
        return rep.failed ? 1 : 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rgg
