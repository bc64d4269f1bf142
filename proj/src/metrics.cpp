#include "segfuse/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace segfuse {

bool MetricsReport::empty() const {
  return tp == 0 && fp == 0 && fn == 0 && pr_curve.empty() &&
         mr_fppi_curve.empty();
}

namespace detail {

double precision_of(std::int64_t tp, std::int64_t fp) {
  if (tp + fp == 0) return 1.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double recall_of(std::int64_t tp, std::int64_t fn) {
  if (tp + fn == 0) return 1.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

ImageEvalData build_eval_data(std::span<const InstancePrediction> preds,
                              std::span<const GroundTruthInstance> gts) {
  int width = -1, height = -1;
  auto check_dims = [&](const BinaryMask& mask) {
    if (width < 0) {
      width = mask.width;
      height = mask.height;
    } else if (mask.width != width || mask.height != height) {
      throw Error(ErrorCode::dimension_mismatch,
                  "all masks of an image must share dimensions");
    }
  };
  for (const auto& p : preds) check_dims(p.mask);
  for (const auto& g : gts) check_dims(g.mask);

  ImageEvalData data;
  data.gt_count = gts.size();
  data.pred_order.resize(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) data.pred_order[i] = i;
  std::stable_sort(data.pred_order.begin(), data.pred_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (preds[a].confidence != preds[b].confidence) {
                       return preds[a].confidence > preds[b].confidence;
                     }
                     return preds[a].instance_id < preds[b].instance_id;
                   });

  std::vector<std::int64_t> gt_areas(gts.size());
  for (std::size_t g = 0; g < gts.size(); ++g) gt_areas[g] = gts[g].mask.area();

  data.confidences.resize(preds.size());
  data.iou.resize(preds.size());
  for (std::size_t pos = 0; pos < preds.size(); ++pos) {
    const auto& pred = preds[data.pred_order[pos]];
    data.confidences[pos] = pred.confidence;
    data.iou[pos].resize(gts.size());
    std::int64_t pred_area = pred.mask.area();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      data.iou[pos][g] = detail::iou_given_areas(pred.mask, gts[g].mask,
                                                 pred_area, gt_areas[g]);
    }
  }
  return data;
}

namespace {

// Claimed ground truth index per prediction position, -1 for unmatched.
// Only the first `retained` predictions participate.
std::vector<std::ptrdiff_t> greedy_claims(const ImageEvalData& data,
                                          double iou_threshold,
                                          std::size_t retained) {
  std::vector<std::ptrdiff_t> claims(data.confidences.size(), -1);
  std::vector<bool> gt_taken(data.gt_count, false);
  for (std::size_t pos = 0; pos < retained; ++pos) {
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
      claims[pos] = best_gt;
    }
  }
  return claims;
}

struct ThresholdRecords {
  // (confidence, matched at the report IoU threshold), ascending confidence.
  std::vector<std::pair<double, bool>> items;
  std::int64_t total_gt = 0;
};

ThresholdRecords gather_records(std::span<const ImageEvalData> images,
                                double iou_threshold) {
  ThresholdRecords records;
  for (const auto& image : images) {
    auto claims = greedy_claims(image, iou_threshold,
                                image.confidences.size());
    for (std::size_t pos = 0; pos < image.confidences.size(); ++pos) {
      records.items.emplace_back(image.confidences[pos], claims[pos] >= 0);
    }
    records.total_gt += static_cast<std::int64_t>(image.gt_count);
  }
  std::sort(records.items.begin(), records.items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return records;
}

// Counts of retained predictions and matched predictions at each distinct
// confidence threshold, ascending. Suffix sums over the sorted records.
struct ThresholdCounts {
  double threshold;
  std::int64_t retained;
  std::int64_t tp;
};

std::vector<ThresholdCounts> counts_per_threshold(
    const ThresholdRecords& records) {
  const auto& items = records.items;
  std::vector<std::int64_t> matched_suffix(items.size() + 1, 0);
  for (std::size_t i = items.size(); i-- > 0;) {
    matched_suffix[i] = matched_suffix[i + 1] + (items[i].second ? 1 : 0);
  }
  std::vector<ThresholdCounts> counts;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0 && items[i].first == items[i - 1].first) continue;
    counts.push_back({items[i].first,
                      static_cast<std::int64_t>(items.size() - i),
                      matched_suffix[i]});
  }
  return counts;
}

std::vector<CurvePoint> pr_points(const ThresholdRecords& records) {
  std::vector<CurvePoint> curve;
  for (const auto& c : counts_per_threshold(records)) {
    std::int64_t fp = c.retained - c.tp;
    std::int64_t fn = records.total_gt - c.tp;
    curve.push_back({recall_of(c.tp, fn), precision_of(c.tp, fp),
                     c.threshold});
  }
  return curve;
}

std::vector<CurvePoint> mr_points(const ThresholdRecords& records,
                                  std::int64_t image_count) {
  std::vector<CurvePoint> curve;
  if (records.items.empty()) {
    // No predictions: a single point at the strictest cut. The miss rate
    // covers the whole ground truth.
    double miss = 1.0 - recall_of(0, records.total_gt);
    curve.push_back({0.0, miss, 1.0});
    return curve;
  }
  for (const auto& c : counts_per_threshold(records)) {
    std::int64_t fp = c.retained - c.tp;
    std::int64_t fn = records.total_gt - c.tp;
    double fppi = static_cast<double>(fp) / static_cast<double>(image_count);
    // Stored as the exact complement of recall so the PR and miss rate
    // curves agree bit for bit at equal thresholds.
    double miss = 1.0 - recall_of(c.tp, fn);
    curve.push_back({fppi, miss, c.threshold});
  }
  return curve;
}

double average_recall_from(std::span<const ImageEvalData> images) {
  double sum = 0.0;
  int steps = 0;
  for (int k = 0; k < 10; ++k) {
    double tau = 0.50 + 0.05 * k;
    std::int64_t tp = 0, total_gt = 0;
    for (const auto& image : images) {
      auto claims = greedy_claims(image, tau, image.confidences.size());
      for (auto c : claims) tp += (c >= 0) ? 1 : 0;
      total_gt += static_cast<std::int64_t>(image.gt_count);
    }
    sum += recall_of(tp, total_gt - tp);
    ++steps;
  }
  return sum / steps;
}

std::vector<ImageEvalData> build_all(
    std::span<const PredictionList> preds_per_image,
    std::span<const GroundTruthList> gts_per_image) {
  if (preds_per_image.size() != gts_per_image.size()) {
    throw Error(ErrorCode::invalid_config,
                "per-image prediction and ground truth lists differ in length");
  }
  std::vector<ImageEvalData> images;
  images.reserve(preds_per_image.size());
  for (std::size_t i = 0; i < preds_per_image.size(); ++i) {
    images.push_back(build_eval_data(preds_per_image[i], gts_per_image[i]));
  }
  return images;
}

void check_iou_threshold(double iou_threshold) {
  if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
    throw Error(ErrorCode::invalid_config,
                "IoU threshold must lie in (0, 1]");
  }
}

}  // namespace

std::vector<bool> greedy_matched_flags(const ImageEvalData& data,
                                       double iou_threshold,
                                       std::size_t retained) {
  auto claims = greedy_claims(data, iou_threshold, retained);
  std::vector<bool> matched(claims.size(), false);
  for (std::size_t i = 0; i < claims.size(); ++i) matched[i] = claims[i] >= 0;
  return matched;
}

MetricsReport report_from_images(std::span<const ImageEvalData> images,
                                 double iou_threshold,
                                 std::int64_t image_count) {
  if (image_count < 1) {
    throw Error(ErrorCode::zero_images, "image count must be at least 1");
  }
  auto records = gather_records(images, iou_threshold);

  MetricsReport report;
  for (const auto& item : records.items) report.tp += item.second ? 1 : 0;
  report.fp = static_cast<std::int64_t>(records.items.size()) - report.tp;
  report.fn = records.total_gt - report.tp;
  report.precision = precision_of(report.tp, report.fp);
  report.recall = recall_of(report.tp, report.fn);
  report.pr_curve = pr_points(records);
  report.mr_fppi_curve = mr_points(records, image_count);
  report.ap = average_precision(report.pr_curve);
  report.ar = average_recall_from(images);
  return report;
}

}  // namespace detail

MatchResult match_detections(std::span<const InstancePrediction> preds,
                             std::span<const GroundTruthInstance> gts,
                             double iou_threshold) {
  detail::check_iou_threshold(iou_threshold);
  auto data = detail::build_eval_data(preds, gts);
  auto claims = detail::greedy_claims(data, iou_threshold, preds.size());

  MatchResult result;
  std::vector<bool> gt_matched(gts.size(), false);
  for (std::size_t pos = 0; pos < preds.size(); ++pos) {
    std::size_t original = data.pred_order[pos];
    if (claims[pos] >= 0) {
      auto g = static_cast<std::size_t>(claims[pos]);
      result.matches.push_back({original, g, data.iou[pos][g]});
      gt_matched[g] = true;
    } else {
      result.false_positives.push_back(original);
    }
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gt_matched[g]) result.false_negatives.push_back(g);
  }
  return result;
}

MetricsReport summary_metrics(const MatchResult& match) {
  MetricsReport report;
  report.tp = static_cast<std::int64_t>(match.matches.size());
  report.fp = static_cast<std::int64_t>(match.false_positives.size());
  report.fn = static_cast<std::int64_t>(match.false_negatives.size());
  report.precision = detail::precision_of(report.tp, report.fp);
  report.recall = detail::recall_of(report.tp, report.fn);
  return report;
}

std::vector<CurvePoint> pr_curve(std::span<const PredictionList> preds_per_image,
                                 std::span<const GroundTruthList> gts_per_image,
                                 double iou_threshold) {
  detail::check_iou_threshold(iou_threshold);
  auto images = detail::build_all(preds_per_image, gts_per_image);
  return detail::pr_points(detail::gather_records(images, iou_threshold));
}

double average_precision(std::span<const CurvePoint> curve) {
  double sum = 0.0;
  for (int i = 0; i <= 100; ++i) {
    double r = i / 100.0;
    double best = 0.0;
    for (const auto& point : curve) {
      if (point.x >= r) best = std::max(best, point.y);
    }
    sum += best;
  }
  return sum / 101.0;
}

std::vector<CurvePoint> miss_rate_fppi_curve(
    std::span<const PredictionList> preds_per_image,
    std::span<const GroundTruthList> gts_per_image, double iou_threshold,
    std::int64_t image_count) {
  detail::check_iou_threshold(iou_threshold);
  if (image_count < 1) {
    throw Error(ErrorCode::zero_images, "image count must be at least 1");
  }
  auto images = detail::build_all(preds_per_image, gts_per_image);
  return detail::mr_points(detail::gather_records(images, iou_threshold),
                           image_count);
}

double average_recall(std::span<const PredictionList> preds_per_image,
                      std::span<const GroundTruthList> gts_per_image) {
  auto images = detail::build_all(preds_per_image, gts_per_image);
  return detail::average_recall_from(images);
}

MetricsReport compute_report(std::span<const PredictionList> preds_per_image,
                             std::span<const GroundTruthList> gts_per_image,
                             double iou_threshold, std::int64_t image_count) {
  detail::check_iou_threshold(iou_threshold);
  auto images = detail::build_all(preds_per_image, gts_per_image);
  return detail::report_from_images(images, iou_threshold, image_count);
}

}  // namespace segfuse
