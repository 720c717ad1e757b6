#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rgg/geometry.hpp"
#include "rgg/rng.hpp"

namespace rgg {

enum class Model { uniform_n, poissonized_uv };

const char* model_name(Model m);
Model model_from_name(const std::string& name);

// A realized point set in the square of area n, plus the metadata needed to
// regenerate it. Vertex identity is by index; duplicate coordinates are kept.
struct RggInstance {
    std::int64_t n = 0;  // expected count; also the area of the square
    double r = 0.0;
    Model model = Model::uniform_n;
    std::vector<Point> points;
    std::optional<std::uint32_t> labelled_u;
    std::optional<std::uint32_t> labelled_v;
    SeedSpec seed;

    double half_side() const { return std::sqrt(static_cast<double>(n)) * 0.5; }
    std::size_t realized_count() const { return points.size(); }
};

// Exactly n i.i.d. uniform points. The (seed -> points) mapping uses only
// integer and IEEE multiply/add steps, so it is identical across platforms.
RggInstance sample_uniform(std::int64_t n, double r, SeedSpec seed);

// Poisson(n) background points plus the two labelled vertices appended at the
// end (indices N and N+1). Omitted labels are drawn uniformly.
RggInstance sample_poissonized(std::int64_t n, double r, SeedSpec seed,
                               std::optional<Point> u = std::nullopt,
                               std::optional<Point> v = std::nullopt);

// count i.i.d. Exp(rate) draws.
std::vector<double> sample_exponentials(double rate, std::size_t count, SeedSpec seed);

// Point-set file format: CSV "id,x,y" plus a JSON metadata sidecar at
// sidecar_path(csv_path).
std::string sidecar_path(const std::string& csv_path);
void write_points_csv(const RggInstance& inst, const std::string& csv_path);
RggInstance load_points_csv(const std::string& csv_path);

}  // namespace rgg
