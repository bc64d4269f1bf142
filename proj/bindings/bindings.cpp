#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "segfuse/dataset_io.hpp"
#include "segfuse/occlusion.hpp"
#include "segfuse/pipeline.hpp"
#include "segfuse/synth.hpp"
#include "segfuse/tuning.hpp"

namespace py = pybind11;
using namespace segfuse;

namespace {

BinaryMask mask_from_numpy(
    const py::array_t<bool, py::array::c_style | py::array::forcecast>& array) {
  if (array.ndim() != 2) {
    throw Error(ErrorCode::invalid_config,
                "mask arrays must be 2-D (height, width)");
  }
  int height = static_cast<int>(array.shape(0));
  int width = static_cast<int>(array.shape(1));
  BinaryMask mask = BinaryMask::zeros(width, height);
  auto view = array.unchecked<2>();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (view(y, x)) mask.set(x, y, true);
    }
  }
  return mask;
}

py::array_t<bool> mask_to_numpy(const BinaryMask& mask) {
  py::array_t<bool> out({mask.height, mask.width});
  auto view = out.mutable_unchecked<2>();
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      view(y, x) = mask.at(x, y);
    }
  }
  return out;
}

ScoreMap map_from_numpy(
    const py::array_t<double, py::array::c_style | py::array::forcecast>&
        array) {
  if (array.ndim() != 2) {
    throw Error(ErrorCode::invalid_config,
                "score maps must be 2-D (height, width)");
  }
  int height = static_cast<int>(array.shape(0));
  int width = static_cast<int>(array.shape(1));
  ScoreMap map = ScoreMap::filled(width, height, 0.0);
  auto view = array.unchecked<2>();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      map.at(x, y) = view(y, x);
    }
  }
  return map;
}

py::array_t<double> map_to_numpy(const ScoreMap& map) {
  py::array_t<double> out({map.height, map.width});
  auto view = out.mutable_unchecked<2>();
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      view(y, x) = map.at(x, y);
    }
  }
  return out;
}

py::array_t<double> heatmap_to_numpy(const Heatmap& heatmap) {
  py::array_t<double> out({heatmap.grid_height, heatmap.grid_width});
  auto view = out.mutable_unchecked<2>();
  for (int row = 0; row < heatmap.grid_height; ++row) {
    for (int col = 0; col < heatmap.grid_width; ++col) {
      const auto& v = heatmap.at(col, row);
      view(row, col) = v ? *v : std::nan("");
    }
  }
  return out;
}

ScoreMap map_from_python(py::object value) {
  if (py::isinstance<ScoreMap>(value)) return value.cast<ScoreMap>();
  return map_from_numpy(value.cast<
      py::array_t<double, py::array::c_style | py::array::forcecast>>());
}

}  // namespace

PYBIND11_MODULE(_segfuse, m) {
  m.doc() = "Instance/semantic segmentation fusion, detection metrics, "
            "threshold tuning, occlusion probing and a synthetic benchmark";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "Error");

  py::class_<Box>(m, "Box")
      .def(py::init<>())
      .def(py::init([](int x, int y, int width, int height) {
             return Box{x, y, width, height};
           }),
           py::arg("x"), py::arg("y"), py::arg("width"), py::arg("height"))
      .def_readwrite("x", &Box::x)
      .def_readwrite("y", &Box::y)
      .def_readwrite("width", &Box::width)
      .def_readwrite("height", &Box::height)
      .def("__eq__", [](const Box& a, const Box& b) { return a == b; })
      .def("__repr__", [](const Box& b) {
        return "Box(x=" + std::to_string(b.x) + ", y=" + std::to_string(b.y) +
               ", width=" + std::to_string(b.width) +
               ", height=" + std::to_string(b.height) + ")";
      });

  py::class_<BinaryMask>(m, "BinaryMask")
      .def(py::init<>())
      .def_static("zeros", &BinaryMask::zeros, py::arg("width"),
                  py::arg("height"))
      .def_static("from_numpy", &mask_from_numpy, py::arg("array"),
                  "Build a mask from a 2-D bool array indexed [y, x].")
      .def("to_numpy", &mask_to_numpy)
      .def_readonly("width", &BinaryMask::width)
      .def_readonly("height", &BinaryMask::height)
      .def("area", &BinaryMask::area)
      .def("bbox", &BinaryMask::bbox)
      .def("fill_box", &BinaryMask::fill_box, py::arg("box"))
      .def("__eq__",
           [](const BinaryMask& a, const BinaryMask& b) { return a == b; });

  py::class_<ScoreMap>(m, "ScoreMap")
      .def(py::init<>())
      .def_static("filled", &ScoreMap::filled, py::arg("width"),
                  py::arg("height"), py::arg("value"))
      .def_static("from_numpy", &map_from_numpy, py::arg("array"),
                  "Build a score map from a 2-D float array indexed [y, x].")
      .def("to_numpy", &map_to_numpy)
      .def_readonly("width", &ScoreMap::width)
      .def_readonly("height", &ScoreMap::height)
      .def("__eq__",
           [](const ScoreMap& a, const ScoreMap& b) { return a == b; });

  m.def(
      "rle_decode",
      [](const std::vector<std::int64_t>& counts, int width, int height) {
        return rle_decode(Rle{counts}, width, height);
      },
      py::arg("counts"), py::arg("width"), py::arg("height"));
  m.def("rle_encode",
        [](const BinaryMask& mask) { return rle_encode(mask).counts; },
        py::arg("mask"));
  m.def("mask_iou", &mask_iou, py::arg("a"), py::arg("b"));
  m.def("mean_score_in_mask", &mean_score_in_mask, py::arg("mask"),
        py::arg("map"));

  py::class_<InstancePrediction>(m, "InstancePrediction")
      .def(py::init<>())
      .def(py::init([](std::int64_t instance_id, int category_id,
                       double confidence, const BinaryMask& mask) {
             return InstancePrediction{instance_id, category_id, confidence,
                                       mask};
           }),
           py::arg("instance_id"), py::arg("category_id"),
           py::arg("confidence"), py::arg("mask"))
      .def_readwrite("instance_id", &InstancePrediction::instance_id)
      .def_readwrite("category_id", &InstancePrediction::category_id)
      .def_readwrite("confidence", &InstancePrediction::confidence)
      .def_readwrite("mask", &InstancePrediction::mask)
      .def("bbox", &InstancePrediction::bbox);

  py::class_<GroundTruthInstance>(m, "GroundTruthInstance")
      .def(py::init<>())
      .def(py::init([](std::int64_t gt_id, int category_id,
                       std::int64_t image_id, const BinaryMask& mask) {
             return GroundTruthInstance{gt_id, category_id, image_id, mask};
           }),
           py::arg("gt_id"), py::arg("category_id"), py::arg("image_id"),
           py::arg("mask"))
      .def_readwrite("gt_id", &GroundTruthInstance::gt_id)
      .def_readwrite("category_id", &GroundTruthInstance::category_id)
      .def_readwrite("image_id", &GroundTruthInstance::image_id)
      .def_readwrite("mask", &GroundTruthInstance::mask);

  py::enum_<EmptyMaskPolicy>(m, "EmptyMaskPolicy")
      .value("reject", EmptyMaskPolicy::reject)
      .value("error", EmptyMaskPolicy::error);

  py::class_<FusionConfig>(m, "FusionConfig")
      .def(py::init<>())
      .def(py::init([](double threshold_c, EmptyMaskPolicy policy) {
             return FusionConfig{threshold_c, policy};
           }),
           py::arg("threshold_c") = 0.04,
           py::arg("empty_mask_policy") = EmptyMaskPolicy::reject)
      .def_readwrite("threshold_c", &FusionConfig::threshold_c)
      .def_readwrite("empty_mask_policy", &FusionConfig::empty_mask_policy);

  py::class_<RejectedInstance>(m, "RejectedInstance")
      .def_readonly("prediction", &RejectedInstance::prediction)
      .def_readonly("mean_score", &RejectedInstance::mean_score);

  py::class_<FusionResult>(m, "FusionResult")
      .def_readonly("accepted", &FusionResult::accepted)
      .def_readonly("rejected", &FusionResult::rejected);

  m.def(
      "fuse_instances",
      [](const std::vector<InstancePrediction>& instances, const ScoreMap& map,
         const FusionConfig& config) {
        return fuse_instances(instances, map, config);
      },
      py::arg("instances"), py::arg("map"),
      py::arg("config") = FusionConfig{});

  py::class_<Match>(m, "Match")
      .def_readonly("pred_index", &Match::pred_index)
      .def_readonly("gt_index", &Match::gt_index)
      .def_readonly("iou", &Match::iou);

  py::class_<MatchResult>(m, "MatchResult")
      .def_readonly("matches", &MatchResult::matches)
      .def_readonly("false_positives", &MatchResult::false_positives)
      .def_readonly("false_negatives", &MatchResult::false_negatives);

  py::class_<CurvePoint>(m, "CurvePoint")
      .def_readonly("x", &CurvePoint::x)
      .def_readonly("y", &CurvePoint::y)
      .def_readonly("threshold", &CurvePoint::threshold);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def(py::init<>())
      .def_readwrite("tp", &MetricsReport::tp)
      .def_readwrite("fp", &MetricsReport::fp)
      .def_readwrite("fn", &MetricsReport::fn)
      .def_readwrite("precision", &MetricsReport::precision)
      .def_readwrite("recall", &MetricsReport::recall)
      .def_readwrite("ap", &MetricsReport::ap)
      .def_readwrite("ar", &MetricsReport::ar)
      .def_readwrite("pr_curve", &MetricsReport::pr_curve)
      .def_readwrite("mr_fppi_curve", &MetricsReport::mr_fppi_curve);

  m.def(
      "match_detections",
      [](const std::vector<InstancePrediction>& preds,
         const std::vector<GroundTruthInstance>& gts, double iou_threshold) {
        return match_detections(preds, gts, iou_threshold);
      },
      py::arg("preds"), py::arg("gts"), py::arg("iou_threshold") = 0.5);
  m.def("summary_metrics", &summary_metrics, py::arg("match"));
  m.def(
      "pr_curve",
      [](const std::vector<PredictionList>& preds,
         const std::vector<GroundTruthList>& gts, double iou_threshold) {
        return pr_curve(preds, gts, iou_threshold);
      },
      py::arg("preds_per_image"), py::arg("gts_per_image"),
      py::arg("iou_threshold") = 0.5);
  m.def(
      "average_precision",
      [](const std::vector<CurvePoint>& curve) {
        return average_precision(curve);
      },
      py::arg("curve"));
  m.def(
      "miss_rate_fppi_curve",
      [](const std::vector<PredictionList>& preds,
         const std::vector<GroundTruthList>& gts, double iou_threshold,
         std::int64_t image_count) {
        return miss_rate_fppi_curve(preds, gts, iou_threshold, image_count);
      },
      py::arg("preds_per_image"), py::arg("gts_per_image"),
      py::arg("iou_threshold"), py::arg("image_count"));
  m.def(
      "average_recall",
      [](const std::vector<PredictionList>& preds,
         const std::vector<GroundTruthList>& gts) {
        return average_recall(preds, gts);
      },
      py::arg("preds_per_image"), py::arg("gts_per_image"));
  m.def(
      "compute_report",
      [](const std::vector<PredictionList>& preds,
         const std::vector<GroundTruthList>& gts, double iou_threshold,
         std::int64_t image_count) {
        return compute_report(preds, gts, iou_threshold, image_count);
      },
      py::arg("preds_per_image"), py::arg("gts_per_image"),
      py::arg("iou_threshold"), py::arg("image_count"));

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("c", &SweepRow::c)
      .def_readonly("precision", &SweepRow::precision)
      .def_readonly("recall", &SweepRow::recall)
      .def_readonly("fp", &SweepRow::fp)
      .def_readonly("fn", &SweepRow::fn);

  py::class_<SweepTable>(m, "SweepTable")
      .def(py::init<>())
      .def_readwrite("rows", &SweepTable::rows);

  py::class_<SelectionPolicy>(m, "SelectionPolicy")
      .def(py::init<>())
      .def(py::init([](double max_recall_drop) {
             return SelectionPolicy{max_recall_drop};
           }),
           py::arg("max_recall_drop"))
      .def_readwrite("max_recall_drop", &SelectionPolicy::max_recall_drop);

  m.def(
      "sweep_thresholds",
      [](const std::vector<PredictionList>& preds,
         const std::vector<GroundTruthList>& gts,
         const std::vector<ScoreMap>& maps, const std::vector<double>& grid,
         double iou_threshold) {
        return sweep_thresholds(preds, gts, maps, grid, iou_threshold);
      },
      py::arg("preds_per_image"), py::arg("gts_per_image"),
      py::arg("map_per_image"), py::arg("c_values"),
      py::arg("iou_threshold") = 0.5);
  m.def("select_threshold", &select_threshold, py::arg("table"),
        py::arg("policy") = SelectionPolicy{});
  m.def("default_sweep_grid", &default_sweep_grid);

  py::class_<OcclusionConfig>(m, "OcclusionConfig")
      .def(py::init<>())
      .def(py::init([](int window_width, int window_height, int stride,
                       double fill_value) {
             return OcclusionConfig{window_width, window_height, stride,
                                    fill_value};
           }),
           py::arg("window_width") = 96, py::arg("window_height") = 54,
           py::arg("stride") = 5, py::arg("fill_value") = 0.5)
      .def_readwrite("window_width", &OcclusionConfig::window_width)
      .def_readwrite("window_height", &OcclusionConfig::window_height)
      .def_readwrite("stride", &OcclusionConfig::stride)
      .def_readwrite("fill_value", &OcclusionConfig::fill_value);

  py::class_<GridPoint>(m, "GridPoint")
      .def_readonly("x", &GridPoint::x)
      .def_readonly("y", &GridPoint::y);

  py::class_<Heatmap>(m, "Heatmap")
      .def_readonly("grid_width", &Heatmap::grid_width)
      .def_readonly("grid_height", &Heatmap::grid_height)
      .def("to_numpy", &heatmap_to_numpy,
           "Heatmap as a float array indexed [row, col]; NaN marks cells "
           "whose window covered the whole mask.");

  m.def("occlusion_grid", &occlusion_grid, py::arg("image_width"),
        py::arg("image_height"), py::arg("config") = OcclusionConfig{});
  m.def(
      "occlusion_heatmap",
      [](const BinaryMask& gt_mask, const py::function& scorer,
         const OcclusionConfig& config) {
        FunctionScorer wrapped(
            [&scorer](std::optional<Box> window) {
              return map_from_python(scorer(window));
            },
            /*reentrant=*/false);
        return occlusion_heatmap(gt_mask, wrapped, config, 1);
      },
      py::arg("gt_mask"), py::arg("scorer"),
      py::arg("config") = OcclusionConfig{},
      "scorer is called with None for the baseline and a Box for each "
      "window; it must return a ScoreMap or a 2-D float array.");

  py::class_<SceneConfig>(m, "SceneConfig")
      .def(py::init<>())
      .def_readwrite("image_width", &SceneConfig::image_width)
      .def_readwrite("image_height", &SceneConfig::image_height)
      .def_readwrite("true_count", &SceneConfig::true_count)
      .def_readwrite("reflection_count", &SceneConfig::reflection_count)
      .def_readwrite("mirror_rect", &SceneConfig::mirror_rect)
      .def_readwrite("semantic_score_true", &SceneConfig::semantic_score_true)
      .def_readwrite("semantic_score_reflection",
                     &SceneConfig::semantic_score_reflection)
      .def_readwrite("semantic_noise", &SceneConfig::semantic_noise)
      .def_readwrite("confidence_low", &SceneConfig::confidence_low)
      .def_readwrite("confidence_high", &SceneConfig::confidence_high)
      .def_readwrite("seed", &SceneConfig::seed);

  py::class_<ExpectedCounts>(m, "ExpectedCounts")
      .def_readonly("tp", &ExpectedCounts::tp)
      .def_readonly("fp", &ExpectedCounts::fp)
      .def_readonly("fn", &ExpectedCounts::fn)
      .def_readonly("precision", &ExpectedCounts::precision)
      .def_readonly("recall", &ExpectedCounts::recall);

  py::class_<ExpectedMetrics>(m, "ExpectedMetrics")
      .def_readonly("pre_fusion", &ExpectedMetrics::pre_fusion)
      .def_readonly("post_fusion", &ExpectedMetrics::post_fusion);

  py::class_<SceneBundle>(m, "SceneBundle")
      .def_readonly("image_id", &SceneBundle::image_id)
      .def_readonly("ground_truths", &SceneBundle::ground_truths)
      .def_readonly("predictions", &SceneBundle::predictions)
      .def_readonly("score_map", &SceneBundle::score_map)
      .def_readonly("expected", &SceneBundle::expected);

  m.def("default_mirror_rect", &default_mirror_rect, py::arg("image_width"),
        py::arg("image_height"));
  m.def("generate_scene", &generate_scene, py::arg("config"),
        py::arg("image_id") = 0);
  m.def("expected_metrics", &expected_metrics, py::arg("config"),
        py::arg("c"));

  py::class_<ImageInfo>(m, "ImageInfo")
      .def(py::init<>())
      .def(py::init([](std::int64_t id, int width, int height) {
             return ImageInfo{id, width, height};
           }),
           py::arg("id"), py::arg("width"), py::arg("height"))
      .def_readwrite("id", &ImageInfo::id)
      .def_readwrite("width", &ImageInfo::width)
      .def_readwrite("height", &ImageInfo::height);

  py::class_<DetectionData>(m, "DetectionData")
      .def(py::init<>())
      .def_readwrite("images", &DetectionData::images)
      .def_readwrite("predictions", &DetectionData::predictions)
      .def_readwrite("ground_truths", &DetectionData::ground_truths);

  m.def("load_detection_file", &load_detection_file, py::arg("path"));
  m.def("save_detection_file", &save_detection_file, py::arg("data"),
        py::arg("path"));
  m.def("load_score_map", &load_score_map, py::arg("path"));
  m.def("save_score_map", &save_score_map, py::arg("map"), py::arg("path"));

  py::class_<EvalReports>(m, "EvalReports")
      .def_readonly("pre_fusion", &EvalReports::pre_fusion)
      .def_readonly("post_fusion", &EvalReports::post_fusion);

  m.def(
      "run_eval_pipeline",
      [](const DetectionData& preds, const DetectionData& gts,
         const std::map<std::int64_t, ScoreMap>& maps, double threshold_c,
         double iou_threshold, int jobs) {
        EvalOptions options;
        options.threshold_c = threshold_c;
        options.iou_threshold = iou_threshold;
        options.jobs = jobs;
        return run_eval_pipeline(
            preds, gts,
            [&maps](const ImageInfo& image) {
              auto it = maps.find(image.id);
              if (it == maps.end()) {
                throw Error(ErrorCode::io_failure,
                            "missing score map for image " +
                                std::to_string(image.id));
              }
              return it->second;
            },
            options);
      },
      py::arg("preds"), py::arg("gts"), py::arg("maps"),
      py::arg("threshold_c") = 0.04, py::arg("iou_threshold") = 0.5,
      py::arg("jobs") = 1);
}
