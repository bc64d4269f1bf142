#include "segfuse/fusion.hpp"

namespace segfuse {

namespace detail {

std::vector<std::optional<double>> instance_mean_scores(
    std::span<const InstancePrediction> instances, const ScoreMap& map) {
  std::vector<std::optional<double>> means;
  means.reserve(instances.size());
  for (const auto& instance : instances) {
    if (instance.mask.width != map.width ||
        instance.mask.height != map.height) {
      throw Error(ErrorCode::dimension_mismatch,
                  "instance " + std::to_string(instance.instance_id) +
                      " mask does not match the score map dimensions");
    }
    std::int64_t area = instance.mask.area();
    if (area == 0) {
      means.push_back(std::nullopt);
      continue;
    }
    means.push_back(mean_score_in_mask(instance.mask, map));
  }
  return means;
}

}  // namespace detail

FusionResult fuse_instances(std::span<const InstancePrediction> instances,
                            const ScoreMap& map, const FusionConfig& config) {
  if (config.threshold_c < 0.0 || config.threshold_c > 1.0) {
    throw Error(ErrorCode::invalid_config,
                "fusion threshold must lie in [0, 1]");
  }

  auto means = detail::instance_mean_scores(instances, map);

  FusionResult result;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!means[i]) {
      if (config.empty_mask_policy == EmptyMaskPolicy::error) {
        throw Error(ErrorCode::empty_mask,
                    "instance " +
                        std::to_string(instances[i].instance_id) +
                        " has an empty mask");
      }
      result.rejected.push_back({instances[i], std::nullopt});
      continue;
    }
    if (*means[i] >= config.threshold_c) {
      result.accepted.push_back(instances[i]);
    } else {
      result.rejected.push_back({instances[i], means[i]});
    }
  }
  return result;
}

}  // namespace segfuse
