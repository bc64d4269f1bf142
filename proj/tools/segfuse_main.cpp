// segfuse: fuse instance predictions with semantic score maps, evaluate the
// effect, tune the fusion threshold, probe occlusion sensitivity, and
// generate the synthetic mirror benchmark.
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "segfuse/dataset_io.hpp"
#include "segfuse/occlusion.hpp"
#include "segfuse/parallel.hpp"
#include "segfuse/pipeline.hpp"
#include "segfuse/synth.hpp"
#include "segfuse/tuning.hpp"

namespace fs = std::filesystem;
using namespace segfuse;

namespace {

constexpr const char* kVersion = "0.1.0";

bool use_color() {
  return isatty(fileno(stderr)) != 0 &&
         std::getenv("SEGFUSE_NO_COLOR") == nullptr;
}

void print_error(const std::string& message) {
  if (use_color()) {
    std::cerr << "\x1b[31merror:\x1b[0m " << message << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io_failure,
                "cannot read back output " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buffer;
}

// One manifest per run: the command, every resolved setting, the inputs,
// and a digest per output file. No timestamps, so reruns are byte-identical.
struct Manifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::string> inputs;
  std::vector<fs::path> outputs;

  void write(const fs::path& path) const {
    nlohmann::ordered_json doc;
    doc["artifact_version"] = kVersion;
    doc["command"] = command;
    doc["config"] = config;
    doc["inputs"] = inputs;
    doc["outputs"] = nlohmann::ordered_json::array();
    for (const auto& output : outputs) {
      doc["outputs"].push_back({{"path", output.string()},
                                {"fnv1a64", file_digest(output)}});
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::io_failure,
                  "cannot write manifest " + path.string());
    }
    out << doc.dump(2) << "\n";
  }
};

MapProvider directory_map_provider(const fs::path& maps_dir) {
  return [maps_dir](const ImageInfo& image) {
    fs::path path = maps_dir / (std::to_string(image.id) + ".pgm");
    if (!fs::exists(path)) {
      throw Error(ErrorCode::io_failure,
                  "missing score map for image " + std::to_string(image.id) +
                      ": " + path.string());
    }
    return load_score_map(path);
  };
}

std::vector<std::string> report_outputs(const std::string& prefix) {
  return {prefix + "summary.csv", prefix + "pr_curve.csv",
          prefix + "mr_fppi.csv", prefix + "pr_curve.svg",
          prefix + "mr_fppi.svg"};
}

void print_report_line(const char* label, const MetricsReport& report) {
  std::printf(
      "%s  fp=%lld fn=%lld precision=%s recall=%s ap=%s ar=%s\n", label,
      static_cast<long long>(report.fp), static_cast<long long>(report.fn),
      format_real(report.precision).c_str(), format_real(report.recall).c_str(),
      format_real(report.ap).c_str(), format_real(report.ar).c_str());
}

// ---------------------------------------------------------------------------

struct FuseArgs {
  std::string pred_path, maps_dir, out_path, rejected_out, manifest_out;
  double threshold = 0.04;
  std::string empty_mask_policy = "reject";
};

int run_fuse(const FuseArgs& args) {
  DetectionData preds = load_detection_file(args.pred_path);
  auto provider = directory_map_provider(args.maps_dir);
  EmptyMaskPolicy policy = args.empty_mask_policy == "error"
                               ? EmptyMaskPolicy::error
                               : EmptyMaskPolicy::reject;

  DetectionFileWriter writer;
  for (const auto& image : preds.images) writer.add_image(image);

  std::string rejected_csv = "image_id,instance_id,mean_score\n";
  std::int64_t kept = 0, dropped = 0;
  for (const auto& image : preds.images) {
    auto it = preds.predictions.find(image.id);
    if (it != preds.predictions.end() && !it->second.empty()) {
      ScoreMap map = provider(image);
      if (map.width != image.width || map.height != image.height) {
        throw Error(ErrorCode::dimension_mismatch,
                    "score map for image " + std::to_string(image.id) +
                        " does not match the image dimensions");
      }
      FusionResult result =
          fuse_instances(it->second, map, {args.threshold, policy});
      for (const auto& p : result.accepted) {
        writer.add_prediction(image.id, p);
        ++kept;
      }
      for (const auto& r : result.rejected) {
        rejected_csv += std::to_string(image.id) + "," +
                        std::to_string(r.prediction.instance_id) + "," +
                        (r.mean_score ? format_real(*r.mean_score) : "") +
                        "\n";
        ++dropped;
      }
    }
    // ground truths in the input pass through untouched
    auto gt = preds.ground_truths.find(image.id);
    if (gt != preds.ground_truths.end()) {
      for (const auto& g : gt->second) writer.add_ground_truth(image.id, g);
    }
  }
  writer.save(args.out_path);

  Manifest manifest;
  manifest.command = "fuse";
  manifest.config = {{"threshold", args.threshold},
                     {"empty_mask_policy", args.empty_mask_policy}};
  manifest.inputs = {args.pred_path, args.maps_dir};
  manifest.outputs = {args.out_path};
  if (!args.rejected_out.empty()) {
    std::ofstream out(args.rejected_out, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::io_failure,
                  "cannot write " + args.rejected_out);
    }
    out << rejected_csv;
    out.close();
    manifest.outputs.push_back(args.rejected_out);
  }
  fs::path manifest_path = args.manifest_out.empty()
                               ? fs::path(args.out_path + ".manifest.json")
                               : fs::path(args.manifest_out);
  manifest.write(manifest_path);

  std::printf("kept %lld instance(s), rejected %lld\n",
              static_cast<long long>(kept), static_cast<long long>(dropped));
  return 0;
}

struct EvalArgs {
  std::string pred_path, gt_path, maps_dir, out_prefix, manifest_out;
  double threshold = 0.04;
  double iou = 0.5;
  int jobs = 0;
};

int run_eval(const EvalArgs& args) {
  DetectionData preds = load_detection_file(args.pred_path);
  DetectionData gts = load_detection_file(args.gt_path);

  EvalOptions options;
  options.threshold_c = args.threshold;
  options.iou_threshold = args.iou;
  options.jobs = args.jobs > 0 ? args.jobs : default_jobs();

  EvalReports reports = run_eval_pipeline(
      preds, gts, directory_map_provider(args.maps_dir), options);

  emit_report(reports.pre_fusion, args.out_prefix + "pre_");
  emit_report(reports.post_fusion, args.out_prefix + "post_");
  print_report_line("pre-fusion ", reports.pre_fusion);
  print_report_line("post-fusion", reports.post_fusion);

  Manifest manifest;
  manifest.command = "eval";
  manifest.config = {{"threshold", args.threshold},
                     {"iou", args.iou},
                     {"jobs", options.jobs}};
  manifest.inputs = {args.pred_path, args.gt_path, args.maps_dir};
  for (const auto& name : report_outputs(args.out_prefix + "pre_")) {
    manifest.outputs.emplace_back(name);
  }
  for (const auto& name : report_outputs(args.out_prefix + "post_")) {
    manifest.outputs.emplace_back(name);
  }
  manifest.write(args.manifest_out.empty()
                     ? fs::path(args.out_prefix + "manifest.json")
                     : fs::path(args.manifest_out));
  return 0;
}

struct TuneArgs {
  std::string pred_path, gt_path, maps_dir, out_prefix, manifest_out;
  double c_min = 0.0, c_max = 0.2, c_step = 0.005;
  double iou = 0.5;
  double max_recall_drop = 0.01;
};

int run_tune(const TuneArgs& args) {
  DetectionData pred_data = load_detection_file(args.pred_path);
  DetectionData gt_data = load_detection_file(args.gt_path);

  if (args.c_step <= 0.0) {
    throw Error(ErrorCode::invalid_config, "--c-step must be positive");
  }
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double c = args.c_min + i * args.c_step;
    if (c > args.c_max + 1e-12) break;
    grid.push_back(c);
  }

  // the sweep pairs predictions and ground truths per image id
  std::vector<ImageInfo> images = pred_data.images;
  for (const auto& image : gt_data.images) {
    if (pred_data.find_image(image.id) == nullptr) images.push_back(image);
  }
  std::sort(images.begin(), images.end(),
            [](const ImageInfo& a, const ImageInfo& b) { return a.id < b.id; });

  std::vector<PredictionList> preds;
  std::vector<GroundTruthList> gts;
  for (const auto& image : images) {
    auto p = pred_data.predictions.find(image.id);
    preds.push_back(p != pred_data.predictions.end() ? p->second
                                                     : PredictionList{});
    auto g = gt_data.ground_truths.find(image.id);
    gts.push_back(g != gt_data.ground_truths.end() ? g->second
                                                   : GroundTruthList{});
  }

  auto provider = directory_map_provider(args.maps_dir);
  SweepTable table = sweep_thresholds(
      preds, gts,
      [&](std::size_t i) { return provider(images[i]); }, grid, args.iou);
  double c = select_threshold(table, {args.max_recall_drop});

  emit_sweep(table, args.out_prefix);
  std::printf("selected c = %s\n", format_real(c).c_str());

  Manifest manifest;
  manifest.command = "tune";
  manifest.config = {{"c_min", args.c_min},
                     {"c_max", args.c_max},
                     {"c_step", args.c_step},
                     {"iou", args.iou},
                     {"max_recall_drop", args.max_recall_drop},
                     {"selected_c", c}};
  manifest.inputs = {args.pred_path, args.gt_path, args.maps_dir};
  manifest.outputs = {args.out_prefix + "sweep.csv",
                      args.out_prefix + "sweep.svg"};
  manifest.write(args.manifest_out.empty()
                     ? fs::path(args.out_prefix + "manifest.json")
                     : fs::path(args.manifest_out));
  return 0;
}

struct OccludeArgs {
  std::string gt_path, out_prefix, manifest_out;
  std::int64_t image_id = -1;
  std::int64_t gt_id = -1;
  std::string maps_dir, command, image_path;
  bool reentrant = false;
  int window_width = 96, window_height = 54, stride = 5;
  double fill = 0.5;
  int jobs = 0;
};

int run_occlude(const OccludeArgs& args) {
  DetectionData data = load_detection_file(args.gt_path);

  std::int64_t image_id = args.image_id;
  if (image_id < 0) {
    if (data.images.size() != 1) {
      throw Error(ErrorCode::invalid_config,
                  "--image-id is required when the file has several images");
    }
    image_id = data.images[0].id;
  }
  auto gt_it = data.ground_truths.find(image_id);
  if (gt_it == data.ground_truths.end() || gt_it->second.empty()) {
    throw Error(ErrorCode::invalid_config,
                "no ground truth instances for image " +
                    std::to_string(image_id));
  }
  const GroundTruthInstance* gt = &gt_it->second.front();
  if (args.gt_id >= 0) {
    gt = nullptr;
    for (const auto& candidate : gt_it->second) {
      if (candidate.gt_id == args.gt_id) gt = &candidate;
    }
    if (gt == nullptr) {
      throw Error(ErrorCode::invalid_config,
                  "ground truth " + std::to_string(args.gt_id) +
                      " not found in image " + std::to_string(image_id));
    }
  }

  OcclusionConfig config{args.window_width, args.window_height, args.stride,
                         args.fill};
  std::unique_ptr<Scorer> scorer;
  if (!args.maps_dir.empty()) {
    scorer = std::make_unique<PrecomputedScorer>(args.maps_dir);
  } else if (!args.command.empty()) {
    if (args.image_path.empty()) {
      throw Error(ErrorCode::invalid_config,
                  "--command mode needs --image for the baseline image path");
    }
    scorer = std::make_unique<CommandScorer>(
        args.command, args.image_path, args.fill, args.reentrant,
        fs::path(args.out_prefix + "scorer_scratch"));
  } else {
    throw Error(ErrorCode::invalid_config,
                "choose a scorer: --maps-dir or --command");
  }

  int jobs = args.jobs > 0 ? args.jobs : default_jobs();
  Heatmap heatmap = occlusion_heatmap(gt->mask, *scorer, config, jobs);
  emit_heatmap(heatmap, args.out_prefix);

  std::printf("heatmap %d x %d written\n", heatmap.grid_width,
              heatmap.grid_height);

  Manifest manifest;
  manifest.command = "occlude";
  manifest.config = {{"image_id", image_id},
                     {"gt_id", gt->gt_id},
                     {"window_width", args.window_width},
                     {"window_height", args.window_height},
                     {"stride", args.stride},
                     {"fill", args.fill},
                     {"scorer", args.maps_dir.empty() ? "command" : "precomputed"},
                     {"reentrant", args.reentrant},
                     {"jobs", jobs}};
  manifest.inputs = {args.gt_path};
  if (!args.maps_dir.empty()) manifest.inputs.push_back(args.maps_dir);
  if (!args.image_path.empty()) manifest.inputs.push_back(args.image_path);
  manifest.outputs = {args.out_prefix + "heatmap.csv",
                      args.out_prefix + "heatmap.svg"};
  manifest.write(args.manifest_out.empty()
                     ? fs::path(args.out_prefix + "manifest.json")
                     : fs::path(args.manifest_out));
  return 0;
}

struct SynthArgs {
  std::string out_dir, manifest_out;
  int scenes = 10;
  std::uint64_t seed = 1;
  int width = 1920, height = 1080;
  int true_count = 5, reflection_count = 5;
  std::vector<int> mirror;
  double score_true = 0.6, score_reflection = 0.01, noise = 0.005;
  double conf_low = 0.5, conf_high = 1.0;
  double threshold = 0.04;
};

int run_synth(const SynthArgs& args) {
  if (args.scenes < 1) {
    throw Error(ErrorCode::invalid_config, "--scenes must be at least 1");
  }
  SceneConfig config;
  config.image_width = args.width;
  config.image_height = args.height;
  config.true_count = args.true_count;
  config.reflection_count = args.reflection_count;
  config.semantic_score_true = args.score_true;
  config.semantic_score_reflection = args.score_reflection;
  config.semantic_noise = args.noise;
  config.confidence_low = args.conf_low;
  config.confidence_high = args.conf_high;
  if (!args.mirror.empty()) {
    if (args.mirror.size() != 4) {
      throw Error(ErrorCode::invalid_config,
                  "--mirror expects x,y,width,height");
    }
    config.mirror_rect =
        Box{args.mirror[0], args.mirror[1], args.mirror[2], args.mirror[3]};
  }

  fs::create_directories(fs::path(args.out_dir) / "maps");

  DetectionFileWriter writer;
  std::vector<fs::path> outputs;
  ExpectedCounts pre_total, post_total;
  pre_total = {};
  post_total = {};

  for (int i = 0; i < args.scenes; ++i) {
    config.seed = args.seed + static_cast<std::uint64_t>(i);
    std::int64_t image_id = i + 1;
    SceneBundle bundle = generate_scene(config, image_id);

    writer.add_image({image_id, config.image_width, config.image_height});
    for (const auto& p : bundle.predictions) {
      writer.add_prediction(image_id, p);
    }
    for (const auto& g : bundle.ground_truths) {
      writer.add_ground_truth(image_id, g);
    }
    fs::path map_path =
        fs::path(args.out_dir) / "maps" / (std::to_string(image_id) + ".pgm");
    save_score_map(bundle.score_map, map_path);
    outputs.push_back(map_path);
  }

  // the closed form is per scene; identical configs sum across scenes
  ExpectedMetrics expected = expected_metrics(config, args.threshold);
  auto scale = [&](const ExpectedCounts& c) {
    ExpectedCounts total;
    total.tp = c.tp * args.scenes;
    total.fp = c.fp * args.scenes;
    total.fn = c.fn * args.scenes;
    total.precision = total.tp + total.fp == 0
                          ? 1.0
                          : double(total.tp) / double(total.tp + total.fp);
    total.recall = total.tp + total.fn == 0
                       ? 1.0
                       : double(total.tp) / double(total.tp + total.fn);
    return total;
  };
  ExpectedCounts pre = scale(expected.pre_fusion);
  ExpectedCounts post = scale(expected.post_fusion);

  fs::path det_path = fs::path(args.out_dir) / "detections.json";
  writer.save(det_path);

  fs::path expected_path = fs::path(args.out_dir) / "expected.csv";
  {
    std::ofstream out(expected_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::io_failure,
                  "cannot write " + expected_path.string());
    }
    out << "phase,c,tp,fp,fn,precision,recall\n";
    out << "pre_fusion," << format_real(args.threshold) << "," << pre.tp
        << "," << pre.fp << "," << pre.fn << "," << format_real(pre.precision)
        << "," << format_real(pre.recall) << "\n";
    out << "post_fusion," << format_real(args.threshold) << "," << post.tp
        << "," << post.fp << "," << post.fn << ","
        << format_real(post.precision) << "," << format_real(post.recall)
        << "\n";
  }

  Manifest manifest;
  manifest.command = "synth";
  manifest.config = {{"scenes", args.scenes},
                     {"width", args.width},
                     {"height", args.height},
                     {"true_count", args.true_count},
                     {"reflection_count", args.reflection_count},
                     {"score_true", args.score_true},
                     {"score_reflection", args.score_reflection},
                     {"noise", args.noise},
                     {"conf_low", args.conf_low},
                     {"conf_high", args.conf_high},
                     {"threshold", args.threshold},
                     {"seed", args.seed}};
  manifest.outputs = {det_path, expected_path};
  for (const auto& path : outputs) manifest.outputs.push_back(path);
  manifest.write(args.manifest_out.empty()
                     ? fs::path(args.out_dir) / "manifest.json"
                     : fs::path(args.manifest_out));

  std::printf("wrote %d scene(s) to %s\n", args.scenes,
              args.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuse instance predictions with semantic score maps, and "
               "evaluate the effect on detection metrics"};
  app.require_subcommand(1);

  FuseArgs fuse_args;
  auto* fuse = app.add_subcommand(
      "fuse", "filter predictions by mean in-mask semantic score");
  fuse->add_option("--pred", fuse_args.pred_path, "detection file to filter")
      ->required();
  fuse->add_option("--maps", fuse_args.maps_dir,
                   "directory of <image_id>.pgm score maps")
      ->required();
  fuse->add_option("--out", fuse_args.out_path, "fused detection file")
      ->required();
  fuse->add_option("--rejected-out", fuse_args.rejected_out,
                   "CSV of rejected instances with their mean scores");
  fuse->add_option("--threshold", fuse_args.threshold,
                   "acceptance threshold on the mean score")
      ->capture_default_str();
  fuse->add_option("--empty-mask-policy", fuse_args.empty_mask_policy,
                   "reject or error")
      ->check(CLI::IsMember({"reject", "error"}))
      ->capture_default_str();
  fuse->add_option("--manifest-out", fuse_args.manifest_out,
                   "manifest path (default: <out>.manifest.json)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand(
      "eval", "evaluate predictions before and after fusion");
  eval->add_option("--pred", eval_args.pred_path, "prediction file")
      ->required();
  eval->add_option("--gt", eval_args.gt_path, "ground truth file")
      ->required();
  eval->add_option("--maps", eval_args.maps_dir,
                   "directory of <image_id>.pgm score maps")
      ->required();
  eval->add_option("--out-prefix", eval_args.out_prefix,
                   "prefix for report files")
      ->required();
  eval->add_option("--threshold", eval_args.threshold, "fusion threshold")
      ->capture_default_str();
  eval->add_option("--iou", eval_args.iou, "matching IoU threshold")
      ->capture_default_str();
  eval->add_option("--jobs", eval_args.jobs,
                   "worker threads (default: all cores)");
  eval->add_option("--manifest-out", eval_args.manifest_out,
                   "manifest path (default: <prefix>manifest.json)");

  TuneArgs tune_args;
  auto* tune = app.add_subcommand(
      "tune", "sweep the fusion threshold and select an operating point");
  tune->add_option("--pred", tune_args.pred_path, "prediction file")
      ->required();
  tune->add_option("--gt", tune_args.gt_path, "ground truth file")
      ->required();
  tune->add_option("--maps", tune_args.maps_dir,
                   "directory of <image_id>.pgm score maps")
      ->required();
  tune->add_option("--out-prefix", tune_args.out_prefix,
                   "prefix for sweep files")
      ->required();
  tune->add_option("--c-min", tune_args.c_min, "sweep start")
      ->capture_default_str();
  tune->add_option("--c-max", tune_args.c_max, "sweep end")
      ->capture_default_str();
  tune->add_option("--c-step", tune_args.c_step, "sweep step")
      ->capture_default_str();
  tune->add_option("--iou", tune_args.iou, "matching IoU threshold")
      ->capture_default_str();
  tune->add_option("--max-recall-drop", tune_args.max_recall_drop,
                   "largest recall sacrifice tolerated during selection")
      ->capture_default_str();
  tune->add_option("--manifest-out", tune_args.manifest_out,
                   "manifest path (default: <prefix>manifest.json)");

  OccludeArgs occlude_args;
  auto* occlude = app.add_subcommand(
      "occlude", "slide a grey window and map its effect on in-mask scores");
  occlude->add_option("--gt", occlude_args.gt_path,
                      "detection file holding the ground truth mask")
      ->required();
  occlude->add_option("--image-id", occlude_args.image_id,
                      "image to probe (default: the file's only image)");
  occlude->add_option("--gt-id", occlude_args.gt_id,
                      "ground truth instance (default: first in the image)");
  occlude->add_option("--maps-dir", occlude_args.maps_dir,
                      "precomputed maps: baseline.pgm plus occ_<x>_<y>.pgm");
  occlude->add_option("--command", occlude_args.command,
                      "scorer command template with {x} {y} {w} {h} {image} "
                      "{fill} {out}; baseline uses a zero-size window");
  occlude->add_option("--image", occlude_args.image_path,
                      "baseline image path handed to --command");
  occlude->add_flag("--reentrant", occlude_args.reentrant,
                    "allow parallel --command invocations");
  occlude->add_option("--window-width", occlude_args.window_width, "")
      ->capture_default_str();
  occlude->add_option("--window-height", occlude_args.window_height, "")
      ->capture_default_str();
  occlude->add_option("--stride", occlude_args.stride, "")
      ->capture_default_str();
  occlude->add_option("--fill", occlude_args.fill, "occluder grey level")
      ->capture_default_str();
  occlude->add_option("--jobs", occlude_args.jobs,
                      "worker threads (default: all cores)");
  occlude->add_option("--out-prefix", occlude_args.out_prefix,
                      "prefix for heatmap files")
      ->required();
  occlude->add_option("--manifest-out", occlude_args.manifest_out,
                      "manifest path (default: <prefix>manifest.json)");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand(
      "synth", "generate the synthetic mirror benchmark");
  synth->add_option("--out", synth_args.out_dir, "output directory")
      ->required();
  synth->add_option("--scenes", synth_args.scenes, "number of scenes")
      ->capture_default_str();
  synth->add_option("--seed", synth_args.seed,
                    "seed of the first scene; scene i uses seed+i")
      ->capture_default_str();
  synth->add_option("--width", synth_args.width, "image width")
      ->capture_default_str();
  synth->add_option("--height", synth_args.height, "image height")
      ->capture_default_str();
  synth->add_option("--true-count", synth_args.true_count,
                    "true persons per scene")
      ->capture_default_str();
  synth->add_option("--reflection-count", synth_args.reflection_count,
                    "reflections per scene")
      ->capture_default_str();
  synth->add_option("--mirror", synth_args.mirror,
                    "mirror rectangle as x,y,width,height")
      ->delimiter(',');
  synth->add_option("--score-true", synth_args.score_true,
                    "semantic score on person pixels")
      ->capture_default_str();
  synth->add_option("--score-reflection", synth_args.score_reflection,
                    "semantic score on reflection pixels")
      ->capture_default_str();
  synth->add_option("--noise", synth_args.noise, "score noise stddev")
      ->capture_default_str();
  synth->add_option("--conf-low", synth_args.conf_low,
                    "detector confidence range low end")
      ->capture_default_str();
  synth->add_option("--conf-high", synth_args.conf_high,
                    "detector confidence range high end")
      ->capture_default_str();
  synth->add_option("--threshold", synth_args.threshold,
                    "threshold used for the expected-metrics oracle")
      ->capture_default_str();
  synth->add_option("--manifest-out", synth_args.manifest_out,
                    "manifest path (default: <out>/manifest.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fuse->parsed()) return run_fuse(fuse_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (tune->parsed()) return run_tune(tune_args);
    if (occlude->parsed()) return run_occlude(occlude_args);
    if (synth->parsed()) return run_synth(synth_args);
  } catch (const Error& e) {
    print_error(std::string(error_code_name(e.code())) + ": " + e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error(e.what());
    return 1;
  }
  return 0;
}
