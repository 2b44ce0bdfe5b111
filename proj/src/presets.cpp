#include "hpref/presets.hpp"

#include <stdexcept>

#include "hpref/random.hpp"

namespace hpref::presets {

Dataset toy_dataset() {
  // Three blobs of ten points on fixed offsets around (0,0), (4,0), (2,3).
  constexpr double centers[3][2] = {{0.0, 0.0}, {4.0, 0.0}, {2.0, 3.0}};
  constexpr double offsets[10][2] = {{0.0, 0.0},   {0.3, 0.1},  {-0.2, 0.25}, {0.1, -0.3}, {-0.3, -0.1},
                                     {0.25, 0.3},  {-0.1, 0.4}, {0.4, -0.2},  {-0.4, 0.2}, {0.05, 0.15}};
  std::vector<std::vector<double>> points;
  for (const auto& c : centers)
    for (const auto& o : offsets) points.push_back({c[0] + o[0], c[1] + o[1]});
  return Dataset(std::move(points));
}

GridSpec toy_grid() {
  GridSpec spec;
  spec.kmeans = GridSpec::Kmeans{3, 3, 3, 7, 300, 1e-4};
  return spec;
}

Dataset two_regime_dataset() {
  // Two heavy tight blobs side by side and two far pairs of light blobs on
  // either flank. k-means++ reaches the far blobs and keeps the heavy pair
  // together; uniform seeding lands in the heavy mass and splits it.
  struct Blob {
    double x, y;
    std::size_t count;
  };
  constexpr Blob blobs[] = {{0.0, 0.0, 4600},   {1.0, 0.0, 4600},   {-100.0, 0.0, 200},
                            {-160.0, 0.0, 200}, {100.0, 0.0, 200},  {160.0, 0.0, 200}};
  constexpr double half_width = 0.1;
  Rng rng(20210611);
  std::vector<std::vector<double>> points;
  points.reserve(10000);
  for (const auto& b : blobs)
    for (std::size_t i = 0; i < b.count; ++i)
      points.push_back({b.x + half_width * (2.0 * uniform_unit(rng) - 1.0),
                        b.y + half_width * (2.0 * uniform_unit(rng) - 1.0)});
  return Dataset(std::move(points));
}

GridSpec two_regime_grid() {
  GridSpec spec;
  spec.kmeans = GridSpec::Kmeans{4, 20, 20, 1, 300, 1e-4};
  return spec;
}

std::vector<std::string> preset_names() { return {"iris", "toy", "two-regime"}; }

Preset preset(const std::string& name) {
  if (name == "iris") return {name, iris_dataset(), iris_grid()};
  if (name == "toy") return {name, toy_dataset(), toy_grid()};
  if (name == "two-regime") return {name, two_regime_dataset(), two_regime_grid()};
  throw std::invalid_argument("unknown preset '" + name + "' (known: iris, toy, two-regime)");
}

}  // namespace hpref::presets
