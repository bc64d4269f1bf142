#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "segfuse/dataset_io.hpp"
#include "segfuse/occlusion.hpp"

using namespace segfuse;

namespace {

BinaryMask box_mask(int width, int height, const Box& box) {
  BinaryMask mask = BinaryMask::zeros(width, height);
  mask.fill_box(box);
  return mask;
}

// Re-derives one heatmap cell with plain loops over all pixels.
std::optional<double> recompute_cell(const BinaryMask& gt,
                                     const ScoreMap& occluded,
                                     const ScoreMap& baseline,
                                     const Box& window) {
  double sum_after = 0.0, sum_before = 0.0;
  std::int64_t n = 0;
  for (int x = 0; x < gt.width; ++x) {
    for (int y = 0; y < gt.height; ++y) {
      if (!gt.at(x, y) || window.contains(x, y)) continue;
      sum_after += occluded.at(x, y);
      sum_before += baseline.at(x, y);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum_after / double(n) - sum_before / double(n);
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("segfuse_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE_BEGIN("occlusion");

TEST_CASE("grid collapses to one position when the window fills the image") {
  OcclusionConfig config;  // 96x54, stride 5
  auto origins = occlusion_grid(96, 54, config);
  REQUIRE(origins.size() == 1);
  CHECK(origins[0] == GridPoint{0, 0});
}

TEST_CASE("full-frame grid matches the closed form") {
  OcclusionConfig config;
  auto origins = occlusion_grid(1920, 1080, config);
  CHECK(origins.size() == 75190);  // 365 columns x 206 rows
  // row-major: the second origin advances x by one stride
  CHECK(origins[1] == GridPoint{5, 0});
  CHECK(origins[365] == GridPoint{0, 5});
}

TEST_CASE("degenerate stride yields a single column") {
  OcclusionConfig config{1, 1, 64, 0.5};
  auto origins = occlusion_grid(64, 20, config);
  for (const auto& origin : origins) CHECK(origin.x == 0);
  CHECK(origins.size() == static_cast<std::size_t>((20 - 1) / 64 + 1));
}

TEST_CASE("grid validates the window and stride") {
  CHECK_THROWS_AS(occlusion_grid(50, 50, OcclusionConfig{96, 54, 5, 0.5}),
                  Error);
  try {
    occlusion_grid(50, 50, OcclusionConfig{96, 54, 5, 0.5});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window_larger_than_image);
  }
  CHECK_THROWS_AS(occlusion_grid(50, 50, OcclusionConfig{4, 4, 0, 0.5}),
                  Error);
}

TEST_CASE("a position-independent scorer yields an all-zero heatmap") {
  const int W = 60, H = 40;
  ScoreMap fixed = ScoreMap::filled(W, H, 0.25);
  for (int x = 0; x < W; ++x) fixed.at(x, x % H) = 0.75;  // non-uniform
  FunctionScorer scorer([&](std::optional<Box>) { return fixed; });

  BinaryMask gt = box_mask(W, H, {10, 8, 24, 20});
  OcclusionConfig config{12, 10, 4, 0.5};
  Heatmap heatmap = occlusion_heatmap(gt, scorer, config);

  CHECK(heatmap.grid_width == (W - 12) / 4 + 1);
  CHECK(heatmap.grid_height == (H - 10) / 4 + 1);
  CHECK(heatmap.values.size() ==
        static_cast<std::size_t>(heatmap.grid_width) * heatmap.grid_height);
  for (const auto& v : heatmap.values) {
    REQUIRE(v.has_value());
    CHECK(std::abs(*v) <= 1e-12);
  }
}

TEST_CASE("a scorer that zeroes occluded pixels dips exactly under the mask") {
  const int W = 48, H = 36;
  ScoreMap base = ScoreMap::filled(W, H, 0.5);
  auto scorer_fn = [&](std::optional<Box> window) {
    ScoreMap map = base;
    if (window) {
      for (int x = window->x; x < window->right(); ++x)
        for (int y = window->y; y < window->bottom(); ++y) map.at(x, y) = 0.0;
    }
    return map;
  };
  FunctionScorer scorer(scorer_fn);

  Box gt_box{6, 6, 20, 16};
  BinaryMask gt = box_mask(W, H, gt_box);
  OcclusionConfig config{8, 6, 4, 0.5};
  Heatmap heatmap = occlusion_heatmap(gt, scorer, config);

  auto origins = occlusion_grid(W, H, config);
  REQUIRE(origins.size() == heatmap.values.size());
  for (std::size_t i = 0; i < origins.size(); ++i) {
    Box window{origins[i].x, origins[i].y, config.window_width,
               config.window_height};
    // zeroing only matters to covered pixels, which are excluded from the
    // visible statistic, so every defined delta is exactly zero when the
    // window misses the mask and zero again when it overlaps (covered
    // pixels do not contribute). The oracle recomputation must agree.
    auto expected = recompute_cell(gt, scorer_fn(window), base, window);
    REQUIRE(heatmap.values[i].has_value() == expected.has_value());
    if (expected) CHECK(*heatmap.values[i] == *expected);
  }
}

TEST_CASE("covered ground truth pixels never contribute to the statistic") {
  // scorer zeroes everything under the window; if covered pixels leaked
  // into the mean, overlapping positions would go negative
  const int W = 30, H = 30;
  ScoreMap base = ScoreMap::filled(W, H, 0.8);
  FunctionScorer scorer([&](std::optional<Box> window) {
    ScoreMap map = base;
    if (window) {
      for (int x = window->x; x < window->right(); ++x)
        for (int y = window->y; y < window->bottom(); ++y) map.at(x, y) = 0.0;
    }
    return map;
  });
  BinaryMask gt = box_mask(W, H, {5, 5, 20, 20});
  OcclusionConfig config{10, 10, 5, 0.5};
  Heatmap heatmap = occlusion_heatmap(gt, scorer, config);
  for (const auto& v : heatmap.values) {
    REQUIRE(v.has_value());
    CHECK(*v == 0.0);
  }
}

TEST_CASE("a frame-sensitive scorer lights up exactly the frame positions") {
  // mirror with a one-pixel frame ring; the reflection mask sits inside.
  // Occluding any frame pixel raises in-mask scores by 0.2.
  const int W = 64, H = 48;
  Box mirror{30, 8, 28, 32};
  Box reflection{36, 14, 16, 20};
  BinaryMask gt = box_mask(W, H, reflection);

  auto frame_overlap = [&](const Box& window) {
    Box outer = mirror;
    Box inner{mirror.x + 1, mirror.y + 1, mirror.width - 2,
              mirror.height - 2};
    if (!overlaps(window, outer)) return false;
    Box clipped = intersect(window, outer);
    // overlapping only the interior does not touch the ring
    Box interior = intersect(clipped, inner);
    return clipped.width * clipped.height !=
           interior.width * interior.height;
  };

  auto scorer_fn = [&](std::optional<Box> window) {
    double in_mask = 0.3;
    if (window && frame_overlap(*window)) in_mask = 0.5;
    ScoreMap map = ScoreMap::filled(W, H, 0.05);
    for (int x = reflection.x; x < reflection.right(); ++x)
      for (int y = reflection.y; y < reflection.bottom(); ++y)
        map.at(x, y) = in_mask;
    return map;
  };
  FunctionScorer scorer(scorer_fn);

  OcclusionConfig config{10, 8, 4, 0.5};
  Heatmap heatmap = occlusion_heatmap(gt, scorer, config);
  auto origins = occlusion_grid(W, H, config);
  bool saw_positive = false, saw_zero = false;
  for (std::size_t i = 0; i < origins.size(); ++i) {
    Box window{origins[i].x, origins[i].y, config.window_width,
               config.window_height};
    REQUIRE(heatmap.values[i].has_value());
    if (frame_overlap(window)) {
      CHECK(*heatmap.values[i] > 0.0);
      saw_positive = true;
    } else {
      CHECK(*heatmap.values[i] == 0.0);
      saw_zero = true;
    }
  }
  CHECK(saw_positive);
  CHECK(saw_zero);
}

TEST_CASE("positions covering the whole mask are reported absent") {
  const int W = 20, H = 20;
  ScoreMap base = ScoreMap::filled(W, H, 0.4);
  FunctionScorer scorer([&](std::optional<Box>) { return base; });
  BinaryMask gt = box_mask(W, H, {8, 8, 3, 3});
  OcclusionConfig config{20, 20, 5, 0.5};  // one position, covers everything
  Heatmap heatmap = occlusion_heatmap(gt, scorer, config);
  REQUIRE(heatmap.values.size() == 1);
  CHECK_FALSE(heatmap.values[0].has_value());
}

TEST_CASE("an empty ground truth mask is an error") {
  ScoreMap base = ScoreMap::filled(20, 20, 0.4);
  FunctionScorer scorer([&](std::optional<Box>) { return base; });
  OcclusionConfig config{5, 5, 5, 0.5};
  try {
    occlusion_heatmap(BinaryMask::zeros(20, 20), scorer, config);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_visible_mask);
  }
}

TEST_CASE("malformed scorer output is a scorer failure") {
  FunctionScorer wrong_dims(
      [](std::optional<Box>) { return ScoreMap::filled(4, 4, 0.5); });
  BinaryMask gt = box_mask(20, 20, {2, 2, 10, 10});
  OcclusionConfig config{5, 5, 5, 0.5};
  try {
    occlusion_heatmap(gt, wrong_dims, config);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::scorer_failure);
  }

  FunctionScorer out_of_range([](std::optional<Box>) {
    ScoreMap map = ScoreMap::filled(20, 20, 0.5);
    map.at(1, 1) = 1.5;
    return map;
  });
  CHECK_THROWS_AS(occlusion_heatmap(gt, out_of_range, config), Error);
}

TEST_CASE("parallel probing matches the serial result") {
  const int W = 40, H = 30;
  ScoreMap base = ScoreMap::filled(W, H, 0.3);
  auto scorer_fn = [&](std::optional<Box> window) {
    ScoreMap map = base;
    if (window) {
      for (int x = window->x; x < window->right(); ++x)
        for (int y = window->y; y < window->bottom(); ++y)
          map.at(x, y) = std::min(1.0, 0.3 + 0.001 * (window->x + window->y));
    }
    return map;
  };
  FunctionScorer serial_scorer(scorer_fn);
  FunctionScorer parallel_scorer(scorer_fn, /*reentrant=*/true);
  BinaryMask gt = box_mask(W, H, {4, 4, 30, 20});
  OcclusionConfig config{6, 6, 3, 0.5};

  Heatmap one = occlusion_heatmap(gt, serial_scorer, config, 1);
  Heatmap four = occlusion_heatmap(gt, parallel_scorer, config, 4);
  REQUIRE(one.values.size() == four.values.size());
  for (std::size_t i = 0; i < one.values.size(); ++i) {
    CHECK(one.values[i] == four.values[i]);
  }
}

TEST_CASE("precomputed scorer reads maps from a directory") {
  auto dir = temp_dir("precomputed");
  const int W = 16, H = 12;
  ScoreMap base = ScoreMap::filled(W, H, 0.5);
  save_score_map(base, dir / "baseline.pgm");
  OcclusionConfig config{8, 6, 4, 0.5};
  for (const auto& origin : occlusion_grid(W, H, config)) {
    save_score_map(base, dir / ("occ_" + std::to_string(origin.x) + "_" +
                                std::to_string(origin.y) + ".pgm"));
  }

  PrecomputedScorer scorer(dir);
  BinaryMask gt = box_mask(W, H, {2, 2, 12, 8});
  Heatmap heatmap = occlusion_heatmap(gt, scorer, config, 2);
  for (const auto& v : heatmap.values) {
    REQUIRE(v.has_value());
    CHECK(std::abs(*v) <= 1e-12);
  }

  std::filesystem::remove(dir / "occ_0_0.pgm");
  try {
    occlusion_heatmap(gt, scorer, config);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::scorer_failure);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("command scorer runs the template and collects the map") {
  auto dir = temp_dir("command");
  ScoreMap base = ScoreMap::filled(10, 8, 0.25);
  save_score_map(base, dir / "source.pgm");

  CommandScorer scorer("cp '" + (dir / "source.pgm").string() + "' '{out}'",
                       dir / "image.pgm", 0.5, false, dir / "scratch");
  BinaryMask gt = box_mask(10, 8, {1, 1, 8, 6});
  OcclusionConfig config{4, 4, 3, 0.5};
  Heatmap heatmap = occlusion_heatmap(gt, scorer, config);
  for (const auto& v : heatmap.values) {
    REQUIRE(v.has_value());
    CHECK(*v == 0.0);
  }

  CommandScorer failing("exit 9", dir / "image.pgm", 0.5, false,
                        dir / "scratch");
  try {
    occlusion_heatmap(gt, failing, config);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::scorer_failure);
  }
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
