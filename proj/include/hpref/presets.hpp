#pragma once

#include <string>
#include <vector>

#include "hpref/clustering.hpp"
#include "hpref/drivers.hpp"

namespace hpref::presets {

/// Fisher's Iris data, 150 x 4, raw units.
Dataset iris_dataset();
/// Species labels (0 setosa, 1 versicolor, 2 virginica).
Clustering iris_species();

/// Small 2-D dataset with three blobs, for quick k-means runs.
Dataset toy_dataset();
/// k = 3, three uniform and three k-means++ runs.
GridSpec toy_grid();

/// 10,000 points on which uniformly seeded k-means and k-means++ settle in
/// systematically different solutions.
Dataset two_regime_dataset();
/// k = 4, twenty uniform and twenty k-means++ runs.
GridSpec two_regime_grid();

struct Preset {
  std::string name;
  Dataset dataset;
  GridSpec grid;
};

/// Known names: "iris", "toy", "two-regime".
Preset preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace hpref::presets
