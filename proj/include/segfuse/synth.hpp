#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "segfuse/metrics.hpp"

namespace segfuse {

// Parameters of one synthetic mirror scene. True persons are rectangles
// placed outside the mirror; each reflection is a half-size rectangle
// placed strictly inside it. The simulated detector fires on both kinds
// with a confidence drawn from [confidence_low, confidence_high]; the
// simulated semantic map scores person pixels near semantic_score_true and
// reflection pixels near semantic_score_reflection.
struct SceneConfig {
  int image_width = 1920;
  int image_height = 1080;
  int true_count = 5;
  int reflection_count = 5;
  // Defaults to a wall mirror spanning 40% x 60% of the frame.
  std::optional<Box> mirror_rect;
  double semantic_score_true = 0.6;
  double semantic_score_reflection = 0.01;
  // Stddev of the zero-mean noise added per pixel. The noise is uniform on
  // [-sqrt(3)*s, +sqrt(3)*s] (which has stddev s) rather than gaussian, so
  // it is bounded and every sample is derived from splitmix64 with exact
  // IEEE arithmetic; map values clamp to [0, 1].
  double semantic_noise = 0.005;
  double confidence_low = 0.5;
  double confidence_high = 1.0;
  std::uint64_t seed = 0;
};

struct ExpectedCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double precision = 1.0;
  double recall = 1.0;
};

struct ExpectedMetrics {
  ExpectedCounts pre_fusion;
  ExpectedCounts post_fusion;
};

struct SceneBundle {
  std::int64_t image_id = 0;
  std::vector<GroundTruthInstance> ground_truths;  // true persons only
  std::vector<InstancePrediction> predictions;     // persons and reflections
  ScoreMap score_map;
  // Closed-form counts at the default threshold 0.04; absent when the
  // score/noise separation is too small for the oracle to commit.
  std::optional<ExpectedMetrics> expected;
};

Box default_mirror_rect(int image_width, int image_height);

// Deterministic for a fixed seed: all placement, confidence and noise draws
// come from one splitmix64 stream in a documented order (person sizes and
// positions, then reflection positions, then confidences, then per-pixel
// noise in column-major scan order).
SceneBundle generate_scene(const SceneConfig& config,
                           std::int64_t image_id = 0);

// Closed-form outcome of evaluating the scene at threshold c, valid only
// when c is at least six noise stddevs away from both score levels. Since
// the noise is bounded by sqrt(3) stddevs this margin guarantees no sample
// can cross the threshold.
ExpectedMetrics expected_metrics(const SceneConfig& config, double c);

}  // namespace segfuse
