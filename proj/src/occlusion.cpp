#include "segfuse/occlusion.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "segfuse/dataset_io.hpp"
#include "segfuse/parallel.hpp"

namespace segfuse {

namespace {

void check_config(const OcclusionConfig& config) {
  if (config.window_width < 1 || config.window_height < 1 ||
      config.stride < 1) {
    throw Error(ErrorCode::invalid_config,
                "window dimensions and stride must be at least 1");
  }
  if (config.fill_value < 0.0 || config.fill_value > 1.0) {
    throw Error(ErrorCode::invalid_config, "fill value must lie in [0, 1]");
  }
}

// Maps handed back by a scorer are untrusted input.
void check_scored_map(const ScoreMap& map, int width, int height,
                      const char* what) {
  if (map.width != width || map.height != height ||
      map.values.size() !=
          static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::scorer_failure,
                std::string("scorer produced a malformed ") + what +
                    " map: wrong dimensions");
  }
  for (double v : map.values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::scorer_failure,
                  std::string("scorer produced a malformed ") + what +
                      " map: value outside [0, 1]");
    }
  }
}

// Mean over the ground truth pixels not covered by `window`; nullopt when
// the window hides every mask pixel.
std::optional<double> visible_mean(const BinaryMask& gt_mask, const Box& inner,
                                   const ScoreMap& map, const Box& window) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (int x = inner.x; x < inner.right(); ++x) {
    const auto* column =
        gt_mask.bits.data() + static_cast<std::size_t>(x) * gt_mask.height;
    const double* scores =
        map.values.data() + static_cast<std::size_t>(x) * map.height;
    for (int y = inner.y; y < inner.bottom(); ++y) {
      if (!column[y]) continue;
      if (window.contains(x, y)) continue;
      sum += scores[y];
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace

std::vector<GridPoint> occlusion_grid(int image_width, int image_height,
                                      const OcclusionConfig& config) {
  check_config(config);
  if (image_width < 1 || image_height < 1) {
    throw Error(ErrorCode::invalid_config,
                "image dimensions must be positive");
  }
  if (config.window_width > image_width ||
      config.window_height > image_height) {
    throw Error(ErrorCode::window_larger_than_image,
                "occlusion window exceeds the image");
  }
  std::vector<GridPoint> origins;
  for (int y = 0; y + config.window_height <= image_height;
       y += config.stride) {
    for (int x = 0; x + config.window_width <= image_width;
         x += config.stride) {
      origins.push_back({x, y});
    }
  }
  return origins;
}

Heatmap occlusion_heatmap(const BinaryMask& gt_mask, Scorer& scorer,
                          const OcclusionConfig& config, int jobs) {
  check_config(config);
  auto mask_box = gt_mask.bbox();
  if (!mask_box) {
    throw Error(ErrorCode::empty_visible_mask,
                "occlusion probe needs a non-empty ground truth mask");
  }

  auto origins = occlusion_grid(gt_mask.width, gt_mask.height, config);

  ScoreMap baseline = scorer.baseline();
  check_scored_map(baseline, gt_mask.width, gt_mask.height, "baseline");

  Heatmap heatmap;
  heatmap.grid_width =
      (gt_mask.width - config.window_width) / config.stride + 1;
  heatmap.grid_height =
      (gt_mask.height - config.window_height) / config.stride + 1;
  heatmap.values.resize(origins.size());

  auto probe = [&](std::size_t i) {
    Box window{origins[i].x, origins[i].y, config.window_width,
               config.window_height};
    ScoreMap occluded = scorer.occluded(window);
    check_scored_map(occluded, gt_mask.width, gt_mask.height, "occluded");
    auto after = visible_mean(gt_mask, *mask_box, occluded, window);
    if (!after) {
      heatmap.values[i] = std::nullopt;
      return;
    }
    auto before = visible_mean(gt_mask, *mask_box, baseline, window);
    heatmap.values[i] = *after - *before;
  };

  int workers = scorer.reentrant() ? jobs : 1;
  parallel_for(origins.size(), workers, probe);
  return heatmap;
}

PrecomputedScorer::PrecomputedScorer(std::filesystem::path directory)
    : directory_(std::move(directory)) {}

ScoreMap PrecomputedScorer::baseline() {
  auto path = directory_ / "baseline.pgm";
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::scorer_failure,
                "missing baseline score map: " + path.string());
  }
  return load_score_map(path);
}

ScoreMap PrecomputedScorer::occluded(const Box& window) {
  auto path = directory_ / ("occ_" + std::to_string(window.x) + "_" +
                            std::to_string(window.y) + ".pgm");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::scorer_failure,
                "missing occluded score map: " + path.string());
  }
  return load_score_map(path);
}

CommandScorer::CommandScorer(std::string command_template,
                             std::filesystem::path image_path,
                             double fill_value, bool reentrant,
                             std::filesystem::path scratch_dir)
    : template_(std::move(command_template)),
      image_path_(std::move(image_path)),
      fill_value_(fill_value),
      reentrant_(reentrant),
      scratch_dir_(std::move(scratch_dir)) {
  std::filesystem::create_directories(scratch_dir_);
}

ScoreMap CommandScorer::baseline() { return run(Box{0, 0, 0, 0}); }

ScoreMap CommandScorer::occluded(const Box& window) { return run(window); }

ScoreMap CommandScorer::run(const Box& window) {
  auto out_path = scratch_dir_ / ("occ_" + std::to_string(window.x) + "_" +
                                  std::to_string(window.y) + "_" +
                                  std::to_string(window.width) + "x" +
                                  std::to_string(window.height) + ".pgm");

  std::string command = template_;
  auto substitute = [&command](const std::string& key,
                               const std::string& value) {
    for (std::size_t pos = 0; (pos = command.find(key, pos)) != std::string::npos;
         pos += value.size()) {
      command.replace(pos, key.size(), value);
    }
  };
  char fill[32];
  std::snprintf(fill, sizeof(fill), "%g", fill_value_);
  substitute("{x}", std::to_string(window.x));
  substitute("{y}", std::to_string(window.y));
  substitute("{w}", std::to_string(window.width));
  substitute("{h}", std::to_string(window.height));
  substitute("{image}", image_path_.string());
  substitute("{fill}", fill);
  substitute("{out}", out_path.string());

  int rc = std::system(command.c_str());
  if (rc != 0) {
    throw Error(ErrorCode::scorer_failure,
                "scorer command failed (exit status " + std::to_string(rc) +
                    "): " + command);
  }
  ScoreMap map;
  try {
    map = load_score_map(out_path);
  } catch (const Error& e) {
    throw Error(ErrorCode::scorer_failure,
                "scorer command wrote an unreadable map: " +
                    std::string(e.what()));
  }
  std::filesystem::remove(out_path);
  return map;
}

}  // namespace segfuse
