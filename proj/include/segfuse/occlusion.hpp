#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "segfuse/mask.hpp"

namespace segfuse {

struct OcclusionConfig {
  int window_width = 96;
  int window_height = 54;
  int stride = 5;
  // Grey level the occluding patch is filled with.
  double fill_value = 0.5;
};

struct GridPoint {
  int x = 0;
  int y = 0;

  bool operator==(const GridPoint&) const = default;
};

// Per-window-position score deltas relative to the unoccluded baseline,
// row-major: values[row * grid_width + col]. A cell is nullopt when the
// window covered the entire ground truth mask, leaving nothing to score.
struct Heatmap {
  int grid_width = 0;
  int grid_height = 0;
  std::vector<std::optional<double>> values;

  const std::optional<double>& at(int col, int row) const {
    return values[static_cast<std::size_t>(row) * grid_width + col];
  }
};

// Source of semantic score maps for the probe. baseline() is the map for
// the untouched image; occluded(w) the map after the grey patch covers
// window w. Implementations whose calls are safe to issue concurrently
// report reentrant() == true.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual ScoreMap baseline() = 0;
  virtual ScoreMap occluded(const Box& window) = 0;
  virtual bool reentrant() const { return false; }
};

// Wraps a callable; nullopt asks for the baseline map.
class FunctionScorer : public Scorer {
 public:
  using Fn = std::function<ScoreMap(std::optional<Box>)>;

  explicit FunctionScorer(Fn fn, bool reentrant = true)
      : fn_(std::move(fn)), reentrant_(reentrant) {}

  ScoreMap baseline() override { return fn_(std::nullopt); }
  ScoreMap occluded(const Box& window) override { return fn_(window); }
  bool reentrant() const override { return reentrant_; }

 private:
  Fn fn_;
  bool reentrant_;
};

// Reads score maps rendered offline: `baseline.pgm` plus one
// `occ_<x>_<y>.pgm` per window origin, all in one directory.
class PrecomputedScorer : public Scorer {
 public:
  explicit PrecomputedScorer(std::filesystem::path directory);

  ScoreMap baseline() override;
  ScoreMap occluded(const Box& window) override;
  bool reentrant() const override { return true; }

 private:
  std::filesystem::path directory_;
};

// Runs an external command per window position. The template may use the
// placeholders {x} {y} {w} {h} {image} {fill} {out}; the command must write
// a score map in PGM form to {out} and exit 0. The baseline is requested
// with a zero-size window (0 0 0 0).
class CommandScorer : public Scorer {
 public:
  CommandScorer(std::string command_template, std::filesystem::path image_path,
                double fill_value, bool reentrant,
                std::filesystem::path scratch_dir);

  ScoreMap baseline() override;
  ScoreMap occluded(const Box& window) override;
  bool reentrant() const override { return reentrant_; }

 private:
  ScoreMap run(const Box& window);

  std::string template_;
  std::filesystem::path image_path_;
  double fill_value_;
  bool reentrant_;
  std::filesystem::path scratch_dir_;
};

// All window origins for sliding the configured window over an image of the
// given size: x in {0, s, 2s, ...} while x + window_width <= image_width,
// likewise for y, listed in row-major order.
std::vector<GridPoint> occlusion_grid(int image_width, int image_height,
                                      const OcclusionConfig& config);

// For each window position, the mean score over the ground truth pixels the
// window leaves visible, taken from the occluded map, minus the same
// statistic from the baseline map. Covered pixels never contribute.
Heatmap occlusion_heatmap(const BinaryMask& gt_mask, Scorer& scorer,
                          const OcclusionConfig& config, int jobs = 1);

}  // namespace segfuse
