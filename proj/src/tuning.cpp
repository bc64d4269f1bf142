#include "segfuse/tuning.hpp"

#include <algorithm>

#include "segfuse/fusion.hpp"

namespace segfuse {

SweepTable sweep_thresholds(std::span<const PredictionList> preds_per_image,
                            std::span<const GroundTruthList> gts_per_image,
                            std::span<const ScoreMap> map_per_image,
                            std::span<const double> c_values,
                            double iou_threshold) {
  if (preds_per_image.size() != map_per_image.size()) {
    throw Error(ErrorCode::invalid_config,
                "per-image prediction, ground truth and map lists differ in length");
  }
  return sweep_thresholds(
      preds_per_image, gts_per_image,
      [&](std::size_t i) { return map_per_image[i]; }, c_values,
      iou_threshold);
}

SweepTable sweep_thresholds(
    std::span<const PredictionList> preds_per_image,
    std::span<const GroundTruthList> gts_per_image,
    const std::function<ScoreMap(std::size_t image_index)>& map_for,
    std::span<const double> c_values, double iou_threshold) {
  if (c_values.empty()) {
    throw Error(ErrorCode::invalid_config, "sweep needs at least one c value");
  }
  for (double c : c_values) {
    if (c < 0.0 || c > 1.0) {
      throw Error(ErrorCode::invalid_config,
                  "sweep thresholds must lie in [0, 1]");
    }
  }
  if (preds_per_image.size() != gts_per_image.size()) {
    throw Error(ErrorCode::invalid_config,
                "per-image prediction, ground truth and map lists differ in length");
  }
  if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
    throw Error(ErrorCode::invalid_config, "IoU threshold must lie in (0, 1]");
  }

  std::vector<double> grid(c_values.begin(), c_values.end());
  std::sort(grid.begin(), grid.end());

  // The in-mask means do not depend on c; compute them once per instance
  // and re-partition per row. This matches fuse_instances exactly because
  // both share instance_mean_scores. Each map is fetched once.
  std::size_t image_count = preds_per_image.size();
  std::vector<std::vector<std::optional<double>>> means(image_count);
  std::vector<detail::ImageEvalData> full_data(image_count);
  for (std::size_t i = 0; i < image_count; ++i) {
    ScoreMap map = map_for(i);
    means[i] = detail::instance_mean_scores(preds_per_image[i], map);
    full_data[i] = detail::build_eval_data(preds_per_image[i],
                                           gts_per_image[i]);
  }

  SweepTable table;
  for (double c : grid) {
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < image_count; ++i) {
      const auto& data = full_data[i];
      // Filtering the matching order by acceptance yields the same order
      // that matching the accepted subset on its own would produce.
      std::vector<bool> gt_taken(data.gt_count, false);
      std::int64_t accepted = 0, matched = 0;
      for (std::size_t pos = 0; pos < data.pred_order.size(); ++pos) {
        const auto& mean = means[i][data.pred_order[pos]];
        if (!mean || *mean < c) continue;
        ++accepted;
        double best_iou = 0.0;
        std::ptrdiff_t best_gt = -1;
        for (std::size_t g = 0; g < data.gt_count; ++g) {
          if (gt_taken[g]) continue;
          double iou = data.iou[pos][g];
          if (iou >= iou_threshold && iou > best_iou) {
            best_iou = iou;
            best_gt = static_cast<std::ptrdiff_t>(g);
          }
        }
        if (best_gt >= 0) {
          gt_taken[best_gt] = true;
          ++matched;
        }
      }
      tp += matched;
      fp += accepted - matched;
      fn += static_cast<std::int64_t>(data.gt_count) - matched;
    }
    table.rows.push_back({c, detail::precision_of(tp, fp),
                          detail::recall_of(tp, fn), fp, fn});
  }
  return table;
}

double select_threshold(const SweepTable& table,
                        const SelectionPolicy& policy) {
  if (table.rows.empty()) {
    throw Error(ErrorCode::empty_table, "cannot select from an empty sweep");
  }
  if (policy.max_recall_drop < 0.0 || policy.max_recall_drop > 1.0) {
    throw Error(ErrorCode::invalid_config,
                "max_recall_drop must lie in [0, 1]");
  }

  std::vector<SweepRow> rows = table.rows;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.c < b.c; });

  double best_recall = 0.0;
  for (const auto& row : rows) best_recall = std::max(best_recall, row.recall);
  double floor = best_recall - policy.max_recall_drop;

  const SweepRow* best = nullptr;
  for (const auto& row : rows) {
    if (row.recall < floor) continue;
    if (!best || row.precision > best->precision) best = &row;
  }
  return best->c;
}

std::vector<double> default_sweep_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(i * 0.005);
  return grid;
}

}  // namespace segfuse
