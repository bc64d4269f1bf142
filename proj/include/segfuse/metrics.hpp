#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "segfuse/fusion.hpp"
#include "segfuse/mask.hpp"

namespace segfuse {

struct GroundTruthInstance {
  std::int64_t gt_id = 0;
  int category_id = 1;
  std::int64_t image_id = 0;
  BinaryMask mask;

  bool operator==(const GroundTruthInstance&) const = default;
};

struct Match {
  std::size_t pred_index = 0;
  std::size_t gt_index = 0;
  double iou = 0.0;
};

// One-to-one assignment between predictions and ground truths of a single
// image. Indices refer to the spans passed to match_detections.
struct MatchResult {
  std::vector<Match> matches;
  std::vector<std::size_t> false_positives;   // unmatched prediction indices
  std::vector<std::size_t> false_negatives;   // unmatched ground truth indices
};

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  double threshold = 0.0;  // confidence cut that produced this point
};

struct MetricsReport {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double precision = 1.0;  // 1.0 when there are no predictions
  double recall = 1.0;     // 1.0 when there is no ground truth
  double ap = 0.0;
  double ar = 0.0;
  std::vector<CurvePoint> pr_curve;       // x = recall, y = precision
  std::vector<CurvePoint> mr_fppi_curve;  // x = FP per image, y = miss rate

  // True for a default-constructed report with no counts and no curves.
  bool empty() const;
};

using PredictionList = std::vector<InstancePrediction>;
using GroundTruthList = std::vector<GroundTruthInstance>;

// Greedy one-to-one matching. Predictions are visited in order of
// descending confidence (ties broken by ascending instance_id); each claims
// the still-unmatched ground truth with the highest IoU at or above the
// threshold. Ground truth IoU ties resolve to the earlier list entry.
MatchResult match_detections(std::span<const InstancePrediction> preds,
                             std::span<const GroundTruthInstance> gts,
                             double iou_threshold);

// Counts and the precision/recall pair for one matching outcome.
MetricsReport summary_metrics(const MatchResult& match);

// Precision/recall per confidence threshold. Thresholds are the distinct
// prediction confidences; at each, predictions with confidence >= t are
// kept and re-matched. Points are sorted by ascending threshold.
std::vector<CurvePoint> pr_curve(std::span<const PredictionList> preds_per_image,
                                 std::span<const GroundTruthList> gts_per_image,
                                 double iou_threshold);

// 101-point interpolated average precision of a PR curve: the precision at
// recall r is the best precision among points with recall >= r, sampled at
// r = 0.00, 0.01, ..., 1.00.
double average_precision(std::span<const CurvePoint> curve);

// Miss rate (1 - recall) against false positives per image, per confidence
// threshold. A detector with no predictions yields the single point
// (fppi 0, miss rate over the full ground truth).
std::vector<CurvePoint> miss_rate_fppi_curve(
    std::span<const PredictionList> preds_per_image,
    std::span<const GroundTruthList> gts_per_image, double iou_threshold,
    std::int64_t image_count);

// Mean recall over mask IoU thresholds 0.50, 0.55, ..., 0.95 with every
// prediction retained.
double average_recall(std::span<const PredictionList> preds_per_image,
                      std::span<const GroundTruthList> gts_per_image);

// Full report: counts at the given IoU threshold plus both curves, AP and AR.
MetricsReport compute_report(std::span<const PredictionList> preds_per_image,
                             std::span<const GroundTruthList> gts_per_image,
                             double iou_threshold, std::int64_t image_count);

namespace detail {

// Per-image matching state that outlives the masks: confidences in match
// order, the prediction/ground-truth IoU matrix in that same order, and the
// ground truth count. Enough to re-run matching at any confidence or IoU
// cut without touching pixels again.
struct ImageEvalData {
  std::vector<std::size_t> pred_order;        // original index per position
  std::vector<double> confidences;            // sorted for matching
  std::vector<std::vector<double>> iou;       // [pred][gt], matching order
  std::size_t gt_count = 0;
};

ImageEvalData build_eval_data(std::span<const InstancePrediction> preds,
                              std::span<const GroundTruthInstance> gts);

// Matched flag per prediction (in matching order) from greedy matching over
// the first `retained` predictions.
std::vector<bool> greedy_matched_flags(const ImageEvalData& data,
                                       double iou_threshold,
                                       std::size_t retained);

MetricsReport report_from_images(std::span<const ImageEvalData> images,
                                 double iou_threshold,
                                 std::int64_t image_count);

double recall_of(std::int64_t tp, std::int64_t fn);
double precision_of(std::int64_t tp, std::int64_t fp);

}  // namespace detail

}  // namespace segfuse
