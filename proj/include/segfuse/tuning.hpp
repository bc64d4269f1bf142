#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "segfuse/metrics.hpp"

namespace segfuse {

struct SweepRow {
  double c = 0.0;
  double precision = 1.0;
  double recall = 1.0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

// One row per swept threshold, sorted ascending by c. Raising c only ever
// removes instances, so fp and recall are non-increasing down the table.
struct SweepTable {
  std::vector<SweepRow> rows;
};

struct SelectionPolicy {
  // Largest recall sacrifice tolerated relative to the best row.
  double max_recall_drop = 0.01;
};

// Runs fusion at every threshold in c_values against the per-image score
// maps, then summarizes each filtered prediction set against the ground
// truth at the given matching IoU.
SweepTable sweep_thresholds(std::span<const PredictionList> preds_per_image,
                            std::span<const GroundTruthList> gts_per_image,
                            std::span<const ScoreMap> map_per_image,
                            std::span<const double> c_values,
                            double iou_threshold = 0.5);

// Same sweep with maps supplied one at a time, for callers that stream
// them from disk instead of holding every map in memory.
SweepTable sweep_thresholds(
    std::span<const PredictionList> preds_per_image,
    std::span<const GroundTruthList> gts_per_image,
    const std::function<ScoreMap(std::size_t image_index)>& map_for,
    std::span<const double> c_values, double iou_threshold = 0.5);

// Smallest c with maximal precision among rows whose recall stays within
// max_recall_drop of the best recall in the table.
double select_threshold(const SweepTable& table, const SelectionPolicy& policy);

// The default sweep grid: 0.00 to 0.20 in steps of 0.005.
std::vector<double> default_sweep_grid();

}  // namespace segfuse
