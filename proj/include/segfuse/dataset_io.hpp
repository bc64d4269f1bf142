#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "segfuse/metrics.hpp"
#include "segfuse/occlusion.hpp"
#include "segfuse/tuning.hpp"

namespace segfuse {

struct ImageInfo {
  std::int64_t id = 0;
  int width = 0;
  int height = 0;

  bool operator==(const ImageInfo&) const = default;
};

// In-memory form of a detection file: a set of images plus predictions
// (annotations with a confidence) and ground truths (annotations without)
// grouped per image. One file may carry either kind or both.
struct DetectionData {
  std::vector<ImageInfo> images;
  std::map<std::int64_t, std::vector<InstancePrediction>> predictions;
  std::map<std::int64_t, std::vector<GroundTruthInstance>> ground_truths;

  const ImageInfo* find_image(std::int64_t id) const;

  bool operator==(const DetectionData&) const = default;
};

// Parses and fully validates a detection file. Any invariant violation in
// the file is an error; nothing is repaired on load.
DetectionData load_detection_file(const std::filesystem::path& path);

void save_detection_file(const DetectionData& data,
                         const std::filesystem::path& path);

// Incremental writer for detection files. Masks are reduced to their RLE as
// annotations arrive, so callers can stream large datasets without keeping
// every decoded mask in memory. save_detection_file is a loop over this.
class DetectionFileWriter {
 public:
  DetectionFileWriter();
  ~DetectionFileWriter();
  DetectionFileWriter(DetectionFileWriter&&) noexcept;
  DetectionFileWriter& operator=(DetectionFileWriter&&) noexcept;

  void add_image(const ImageInfo& image);
  void add_prediction(std::int64_t image_id, const InstancePrediction& pred);
  void add_ground_truth(std::int64_t image_id, const GroundTruthInstance& gt);
  void save(const std::filesystem::path& path) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Score maps travel as binary PGM ("P5") with maxval 65535, 16-bit
// big-endian samples, score = sample / 65535.
ScoreMap load_score_map(const std::filesystem::path& path);
void save_score_map(const ScoreMap& map, const std::filesystem::path& path);

// Writes <prefix>summary.csv, <prefix>pr_curve.csv, <prefix>mr_fppi.csv and
// SVG renderings of both curves. Output bytes depend only on the report.
void emit_report(const MetricsReport& report, const std::string& path_prefix);

// Sweep table as CSV (c,precision,recall,fp,fn) plus a three-panel SVG:
// precision vs c, recall vs c, and the precision/recall curve.
void emit_sweep(const SweepTable& table, const std::string& path_prefix);

// Heatmap CSV (one grid row per line, empty fields for undefined cells) and
// an SVG with a diverging color scale centered at zero.
void emit_heatmap(const Heatmap& heatmap, const std::string& path_prefix);

// Fixed-notation formatting with six significant digits; used for every
// real number in CSV and SVG output so reruns are byte-identical.
std::string format_real(double value);

}  // namespace segfuse
