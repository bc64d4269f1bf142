#include "segfuse/pipeline.hpp"

#include <algorithm>

#include "segfuse/parallel.hpp"

namespace segfuse {

EvalReports run_eval_pipeline(const DetectionData& preds,
                              const DetectionData& gts,
                              const MapProvider& load_map,
                              const EvalOptions& options) {
  // Union of the images named by either file, checked for agreement.
  std::vector<ImageInfo> images = preds.images;
  for (const auto& image : gts.images) {
    const ImageInfo* existing = nullptr;
    for (const auto& candidate : images) {
      if (candidate.id == image.id) {
        existing = &candidate;
        break;
      }
    }
    if (existing == nullptr) {
      images.push_back(image);
    } else if (existing->width != image.width ||
               existing->height != image.height) {
      throw Error(ErrorCode::dimension_mismatch,
                  "image " + std::to_string(image.id) +
                      " has different dimensions in the two detection files");
    }
  }
  std::sort(images.begin(), images.end(),
            [](const ImageInfo& a, const ImageInfo& b) { return a.id < b.id; });

  if (images.empty()) {
    return {};  // nothing to evaluate; both reports stay empty
  }

  static const PredictionList kNoPreds;
  static const GroundTruthList kNoGts;

  std::vector<detail::ImageEvalData> pre(images.size());
  std::vector<detail::ImageEvalData> post(images.size());

  parallel_for(images.size(), options.jobs, [&](std::size_t i) {
    const ImageInfo& image = images[i];

    auto p = preds.predictions.find(image.id);
    const PredictionList& image_preds =
        p != preds.predictions.end() ? p->second : kNoPreds;
    auto g = gts.ground_truths.find(image.id);
    const GroundTruthList& image_gts =
        g != gts.ground_truths.end() ? g->second : kNoGts;

    ScoreMap map = load_map(image);
    if (map.width != image.width || map.height != image.height) {
      throw Error(ErrorCode::dimension_mismatch,
                  "score map for image " + std::to_string(image.id) +
                      " is " + std::to_string(map.width) + "x" +
                      std::to_string(map.height) + ", expected " +
                      std::to_string(image.width) + "x" +
                      std::to_string(image.height));
    }

    pre[i] = detail::build_eval_data(image_preds, image_gts);

    FusionConfig fusion_config{options.threshold_c, options.empty_mask_policy};
    FusionResult fused = fuse_instances(image_preds, map, fusion_config);
    post[i] = detail::build_eval_data(fused.accepted, image_gts);
  });

  auto image_count = static_cast<std::int64_t>(images.size());
  EvalReports reports;
  reports.pre_fusion =
      detail::report_from_images(pre, options.iou_threshold, image_count);
  reports.post_fusion =
      detail::report_from_images(post, options.iou_threshold, image_count);
  return reports;
}

}  // namespace segfuse
