#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "segfuse/mask.hpp"

namespace segfuse {

// A single detected instance as produced by an instance segmentation model.
struct InstancePrediction {
  std::int64_t instance_id = 0;
  int category_id = 1;
  double confidence = 0.0;
  BinaryMask mask;

  // Tight bounding box derived from the mask; nullopt for an empty mask.
  std::optional<Box> bbox() const { return mask.bbox(); }

  bool operator==(const InstancePrediction&) const = default;
};

enum class EmptyMaskPolicy { reject, error };

struct FusionConfig {
  // Minimum mean in-mask semantic score for an instance to be kept.
  double threshold_c = 0.04;
  // A zero-area proposal carries no semantic evidence; by default it is
  // routed to the rejected list rather than treated as an error.
  EmptyMaskPolicy empty_mask_policy = EmptyMaskPolicy::reject;
};

struct RejectedInstance {
  InstancePrediction prediction;
  // Mean semantic score inside the mask; nullopt when the mask was empty.
  std::optional<double> mean_score;

  bool operator==(const RejectedInstance&) const = default;
};

// Partition of the input instances. Instances are routed, never modified;
// input order is preserved within each list.
struct FusionResult {
  std::vector<InstancePrediction> accepted;
  std::vector<RejectedInstance> rejected;
};

// Keeps an instance iff the mean semantic score inside its mask is >= the
// threshold. The comparison is inclusive so that a threshold of 0 accepts
// everything with a defined score.
FusionResult fuse_instances(std::span<const InstancePrediction> instances,
                            const ScoreMap& map,
                            const FusionConfig& config = {});

namespace detail {

// Mean in-mask score per instance, nullopt for empty masks. Shared between
// fuse_instances and the threshold sweep so both see identical arithmetic.
std::vector<std::optional<double>> instance_mean_scores(
    std::span<const InstancePrediction> instances, const ScoreMap& map);

}  // namespace detail

}  // namespace segfuse
