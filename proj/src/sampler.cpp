#include "rgg/sampler.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rgg {

const char* model_name(Model m) {
    return m == Model::uniform_n ? "uniform-n" : "poissonized-uv";
}

Model model_from_name(const std::string& name) {
    if (name == "uniform-n") return Model::uniform_n;
    if (name == "poissonized-uv") return Model::poissonized_uv;
    throw std::invalid_argument("unknown model: " + name);
}

namespace {

Point draw_point(Rng& rng, double half) {
    const double side = 2.0 * half;
    return {-half + rng.uniform01() * side, -half + rng.uniform01() * side};
}

}  // namespace

RggInstance sample_uniform(std::int64_t n, double r, SeedSpec seed) {
    if (n < 1) throw std::invalid_argument("sample_uniform: n must be >= 1");
    if (!(r >= 0.0)) throw std::invalid_argument("sample_uniform: r must be >= 0");
    RggInstance inst;
    inst.n = n;
    inst.r = r;
    inst.model = Model::uniform_n;
    inst.seed = seed;
    inst.points.reserve(static_cast<std::size_t>(n));
    Rng rng(seed);
    const double half = inst.half_side();
    for (std::int64_t i = 0; i < n; ++i) inst.points.push_back(draw_point(rng, half));
    return inst;
}

RggInstance sample_poissonized(std::int64_t n, double r, SeedSpec seed,
                               std::optional<Point> u, std::optional<Point> v) {
    if (n < 1) throw std::invalid_argument("sample_poissonized: n must be >= 1");
    if (!(r >= 0.0)) throw std::invalid_argument("sample_poissonized: r must be >= 0");
    RggInstance inst;
    inst.n = n;
    inst.r = r;
    inst.model = Model::poissonized_uv;
    inst.seed = seed;
    const double half = inst.half_side();
    const Square sq{half};
    if (u && !sq.contains(*u)) throw std::invalid_argument("sample_poissonized: u outside square");
    if (v && !sq.contains(*v)) throw std::invalid_argument("sample_poissonized: v outside square");

    Rng rng(seed);
    const std::int64_t count = rng.poisson(static_cast<double>(n));
    inst.points.reserve(static_cast<std::size_t>(count) + 2);
    for (std::int64_t i = 0; i < count; ++i) inst.points.push_back(draw_point(rng, half));
    const Point pu = u ? *u : draw_point(rng, half);
    const Point pv = v ? *v : draw_point(rng, half);
    inst.labelled_u = static_cast<std::uint32_t>(inst.points.size());
    inst.points.push_back(pu);
    inst.labelled_v = static_cast<std::uint32_t>(inst.points.size());
    inst.points.push_back(pv);
    return inst;
}

std::vector<double> sample_exponentials(double rate, std::size_t count, SeedSpec seed) {
    if (!(rate > 0.0)) throw std::invalid_argument("sample_exponentials: rate must be > 0");
    std::vector<double> out;
    out.reserve(count);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) out.push_back(rng.exponential(rate));
    return out;
}

std::string sidecar_path(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".meta.json";
    return csv_path + ".meta.json";
}

void write_points_csv(const RggInstance& inst, const std::string& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot open for write: " + csv_path);
    out << "id,x,y\n";
    char buf[96];
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, inst.points[i].x,
                      inst.points[i].y);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + csv_path);

    nlohmann::json meta;
    meta["n"] = inst.n;
    meta["r"] = inst.r;
    meta["model"] = model_name(inst.model);
    meta["seed"] = {{"master", inst.seed.master_seed}, {"trial", inst.seed.trial_index}};
    meta["realized_count"] = inst.points.size();
    meta["labelled_u"] = inst.labelled_u ? nlohmann::json(*inst.labelled_u) : nlohmann::json();
    meta["labelled_v"] = inst.labelled_v ? nlohmann::json(*inst.labelled_v) : nlohmann::json();
    std::ofstream mout(sidecar_path(csv_path));
    if (!mout) throw std::runtime_error("cannot open for write: " + sidecar_path(csv_path));
    mout << meta.dump(2) << "\n";
}

RggInstance load_points_csv(const std::string& csv_path) {
    std::ifstream min(sidecar_path(csv_path));
    if (!min) throw std::runtime_error("missing metadata sidecar: " + sidecar_path(csv_path));
    nlohmann::json meta = nlohmann::json::parse(min);

    RggInstance inst;
    inst.n = meta.at("n").get<std::int64_t>();
    inst.r = meta.at("r").get<double>();
    inst.model = model_from_name(meta.at("model").get<std::string>());
    inst.seed.master_seed = meta.at("seed").at("master").get<std::uint64_t>();
    inst.seed.trial_index = meta.at("seed").at("trial").get<std::uint64_t>();
    if (!meta.at("labelled_u").is_null())
        inst.labelled_u = meta.at("labelled_u").get<std::uint32_t>();
    if (!meta.at("labelled_v").is_null())
        inst.labelled_v = meta.at("labelled_v").get<std::uint32_t>();

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open: " + csv_path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("id,x,y", 0) != 0)
        throw std::runtime_error("bad point CSV header in " + csv_path);
    auto parse_double = [&](const std::string& s) {
        double val = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), val);
        if (res.ec != std::errc()) throw std::runtime_error("bad number in " + csv_path);
        return val;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::runtime_error("bad point CSV row in " + csv_path);
        inst.points.push_back({parse_double(line.substr(c1 + 1, c2 - c1 - 1)),
                               parse_double(line.substr(c2 + 1))});
    }
    const auto expected = meta.at("realized_count").get<std::size_t>();
    if (inst.points.size() != expected)
        throw std::runtime_error("point count does not match sidecar in " + csv_path);
    return inst;
}

}  // namespace rgg
