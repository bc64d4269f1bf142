#include <doctest.h>

#include <filesystem>
#include <map>

#include "segfuse/pipeline.hpp"
#include "segfuse/synth.hpp"

using namespace segfuse;

namespace {

struct InMemoryDataset {
  DetectionData preds;
  DetectionData gts;
  std::map<std::int64_t, ScoreMap> maps;
};

InMemoryDataset scene_dataset(int scenes, std::uint64_t seed_base,
                              int width = 192, int height = 108) {
  InMemoryDataset dataset;
  SceneConfig config;
  config.image_width = width;
  config.image_height = height;
  for (int i = 0; i < scenes; ++i) {
    config.seed = seed_base + static_cast<std::uint64_t>(i);
    std::int64_t image_id = i + 1;
    SceneBundle bundle = generate_scene(config, image_id);
    dataset.preds.images.push_back({image_id, width, height});
    dataset.gts.images.push_back({image_id, width, height});
    dataset.preds.predictions[image_id] = bundle.predictions;
    dataset.gts.ground_truths[image_id] = bundle.ground_truths;
    dataset.maps[image_id] = bundle.score_map;
  }
  return dataset;
}

MapProvider provider_for(const InMemoryDataset& dataset) {
  return [&dataset](const ImageInfo& image) {
    auto it = dataset.maps.find(image.id);
    if (it == dataset.maps.end()) {
      throw Error(ErrorCode::io_failure,
                  "missing score map for image " + std::to_string(image.id));
    }
    return it->second;
  };
}

bool reports_equal(const MetricsReport& a, const MetricsReport& b) {
  auto points_equal = [](const std::vector<CurvePoint>& x,
                         const std::vector<CurvePoint>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].x != y[i].x || x[i].y != y[i].y ||
          x[i].threshold != y[i].threshold) {
        return false;
      }
    }
    return true;
  };
  return a.tp == b.tp && a.fp == b.fp && a.fn == b.fn &&
         a.precision == b.precision && a.recall == b.recall && a.ap == b.ap &&
         a.ar == b.ar && points_equal(a.pr_curve, b.pr_curve) &&
         points_equal(a.mr_fppi_curve, b.mr_fppi_curve);
}

}  // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("the synthetic benchmark halves to perfect precision") {
  auto dataset = scene_dataset(4, 1000);
  EvalReports reports =
      run_eval_pipeline(dataset.preds, dataset.gts, provider_for(dataset));
  CHECK(reports.pre_fusion.tp == 20);
  CHECK(reports.pre_fusion.fp == 20);
  CHECK(reports.pre_fusion.fn == 0);
  CHECK(reports.pre_fusion.precision == 0.5);
  CHECK(reports.pre_fusion.recall == 1.0);
  CHECK(reports.post_fusion.tp == 20);
  CHECK(reports.post_fusion.fp == 0);
  CHECK(reports.post_fusion.precision == 1.0);
  CHECK(reports.post_fusion.recall == 1.0);
}

TEST_CASE("threshold zero makes both reports identical") {
  auto dataset = scene_dataset(3, 55);
  EvalOptions options;
  options.threshold_c = 0.0;
  EvalReports reports = run_eval_pipeline(dataset.preds, dataset.gts,
                                          provider_for(dataset), options);
  CHECK(reports_equal(reports.pre_fusion, reports.post_fusion));
}

TEST_CASE("a missing score map fails naming the image") {
  auto dataset = scene_dataset(2, 8);
  dataset.maps.erase(2);
  try {
    run_eval_pipeline(dataset.preds, dataset.gts, provider_for(dataset));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("image 2") != std::string::npos);
  }
}

TEST_CASE("a score map with wrong dimensions fails naming the image") {
  auto dataset = scene_dataset(1, 8);
  dataset.maps[1] = ScoreMap::filled(10, 10, 0.5);
  try {
    run_eval_pipeline(dataset.preds, dataset.gts, provider_for(dataset));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dimension_mismatch);
    CHECK(std::string(e.what()).find("image 1") != std::string::npos);
  }
}

TEST_CASE("results are independent of the worker count") {
  auto dataset = scene_dataset(6, 33);
  EvalOptions serial;
  serial.jobs = 1;
  EvalOptions parallel;
  parallel.jobs = 4;
  EvalReports a = run_eval_pipeline(dataset.preds, dataset.gts,
                                    provider_for(dataset), serial);
  EvalReports b = run_eval_pipeline(dataset.preds, dataset.gts,
                                    provider_for(dataset), parallel);
  CHECK(reports_equal(a.pre_fusion, b.pre_fusion));
  CHECK(reports_equal(a.post_fusion, b.post_fusion));
}

TEST_CASE("an empty dataset evaluates to empty reports") {
  DetectionData none;
  EvalReports reports = run_eval_pipeline(
      none, none, [](const ImageInfo&) { return ScoreMap(); });
  CHECK(reports.pre_fusion.empty());
  CHECK(reports.post_fusion.empty());
}

TEST_CASE("images disagreeing between the files are rejected") {
  DetectionData preds, gts;
  preds.images.push_back({1, 10, 10});
  gts.images.push_back({1, 12, 10});
  try {
    run_eval_pipeline(preds, gts,
                      [](const ImageInfo&) { return ScoreMap(); });
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dimension_mismatch);
  }
}

TEST_SUITE_END();
