#pragma once

#include <functional>

#include "segfuse/dataset_io.hpp"

namespace segfuse {

struct EvalOptions {
  double threshold_c = 0.04;
  double iou_threshold = 0.5;
  EmptyMaskPolicy empty_mask_policy = EmptyMaskPolicy::reject;
  int jobs = 1;
};

struct EvalReports {
  MetricsReport pre_fusion;
  MetricsReport post_fusion;
};

// Supplies the semantic score map for an image; must throw on failure.
using MapProvider = std::function<ScoreMap(const ImageInfo&)>;

// Evaluates the predictions against the ground truth twice, once as-is and
// once after fusion at threshold_c, over the union of images named by the
// two datasets. Both reports use the same matching IoU, so the pair shows
// exactly what the fusion filter changed.
EvalReports run_eval_pipeline(const DetectionData& preds,
                              const DetectionData& gts,
                              const MapProvider& load_map,
                              const EvalOptions& options = {});

}  // namespace segfuse
