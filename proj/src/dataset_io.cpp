#include "segfuse/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "svg.hpp"

namespace segfuse {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  }
  return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::io_failure, "cannot open " + path.string() +
                                           " for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out.good()) {
    throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  }
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0.000000";
  int exponent =
      static_cast<int>(std::floor(std::log10(std::abs(value))));
  int decimals = std::clamp(5 - exponent, 0, 17);
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

const ImageInfo* DetectionData::find_image(std::int64_t id) const {
  for (const auto& image : images) {
    if (image.id == id) return &image;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// detection files (JSON)

namespace {

using json = nlohmann::json;

const json& require(const json& node, const char* key,
                    const std::string& where) {
  auto it = node.find(key);
  if (it == node.end()) {
    throw Error(ErrorCode::parse_error,
                where + ": missing field '" + key + "'");
  }
  return *it;
}

std::int64_t require_int(const json& node, const char* key,
                         const std::string& where) {
  const json& value = require(node, key, where);
  if (!value.is_number_integer()) {
    throw Error(ErrorCode::parse_error,
                where + ": field '" + key + "' must be an integer");
  }
  return value.get<std::int64_t>();
}

BinaryMask mask_from_annotation(const json& annotation, const ImageInfo& image,
                                const std::string& where) {
  const json& segmentation = require(annotation, "segmentation", where);
  const json& size = require(segmentation, "size", where);
  if (!size.is_array() || size.size() != 2 ||
      !size[0].is_number_integer() || !size[1].is_number_integer()) {
    throw Error(ErrorCode::parse_error,
                where + ": segmentation.size must be [height, width]");
  }
  int height = size[0].get<int>();
  int width = size[1].get<int>();
  if (width != image.width || height != image.height) {
    throw Error(ErrorCode::dimension_mismatch,
                where + ": segmentation size " + std::to_string(width) + "x" +
                    std::to_string(height) + " does not match image " +
                    std::to_string(image.width) + "x" +
                    std::to_string(image.height));
  }
  const json& counts = require(segmentation, "counts", where);
  if (!counts.is_array()) {
    throw Error(ErrorCode::parse_error,
                where + ": segmentation.counts must be an array");
  }
  Rle rle;
  rle.counts.reserve(counts.size());
  for (const auto& c : counts) {
    if (!c.is_number_integer()) {
      throw Error(ErrorCode::parse_error,
                  where + ": segmentation.counts entries must be integers");
    }
    rle.counts.push_back(c.get<std::int64_t>());
  }
  try {
    return rle_decode(rle, width, height);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.what());
  }
}

}  // namespace

DetectionData load_detection_file(const std::filesystem::path& path) {
  std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error,
                path.string() + ": line " +
                    std::to_string(line_of_offset(text, e.byte)) + ", byte " +
                    std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("images") ||
      !doc["images"].is_array() || !doc.contains("annotations") ||
      !doc["annotations"].is_array()) {
    throw Error(ErrorCode::parse_error,
                path.string() +
                    ": expected an object with 'images' and 'annotations' arrays");
  }

  DetectionData data;
  for (std::size_t i = 0; i < doc["images"].size(); ++i) {
    const json& node = doc["images"][i];
    std::string where = path.string() + ": images[" + std::to_string(i) + "]";
    ImageInfo image;
    image.id = require_int(node, "id", where);
    image.width = static_cast<int>(require_int(node, "width", where));
    image.height = static_cast<int>(require_int(node, "height", where));
    if (image.width <= 0 || image.height <= 0) {
      throw Error(ErrorCode::invalid_config,
                  where + ": image dimensions must be positive");
    }
    if (data.find_image(image.id) != nullptr) {
      throw Error(ErrorCode::invalid_config,
                  where + ": duplicate image id " + std::to_string(image.id));
    }
    data.images.push_back(image);
  }

  for (std::size_t i = 0; i < doc["annotations"].size(); ++i) {
    const json& node = doc["annotations"][i];
    std::string where =
        path.string() + ": annotations[" + std::to_string(i) + "]";
    std::int64_t image_id = require_int(node, "image_id", where);
    const ImageInfo* image = data.find_image(image_id);
    if (image == nullptr) {
      throw Error(ErrorCode::dangling_image_ref,
                  where + ": image_id " + std::to_string(image_id) +
                      " does not appear in 'images'");
    }
    std::int64_t instance_id = require_int(node, "instance_id", where);
    int category_id = static_cast<int>(require_int(node, "category_id", where));
    BinaryMask mask = mask_from_annotation(node, *image, where);

    if (node.contains("confidence")) {
      const json& conf = node["confidence"];
      if (!conf.is_number()) {
        throw Error(ErrorCode::parse_error,
                    where + ": confidence must be a number");
      }
      double confidence = conf.get<double>();
      if (confidence < 0.0 || confidence > 1.0) {
        throw Error(ErrorCode::invalid_config,
                    where + ": confidence must lie in [0, 1]");
      }
      data.predictions[image_id].push_back(
          {instance_id, category_id, confidence, std::move(mask)});
    } else {
      if (mask.area() == 0) {
        throw Error(ErrorCode::empty_mask,
                    where + ": ground truth mask is empty");
      }
      data.ground_truths[image_id].push_back(
          {instance_id, category_id, image_id, std::move(mask)});
    }
  }
  return data;
}

struct DetectionFileWriter::Impl {
  std::vector<ImageInfo> images;
  nlohmann::ordered_json annotations = nlohmann::ordered_json::array();

  const ImageInfo& image_for(std::int64_t image_id) const {
    for (const auto& image : images) {
      if (image.id == image_id) return image;
    }
    throw Error(ErrorCode::dangling_image_ref,
                "annotation references unknown image id " +
                    std::to_string(image_id));
  }

  void add(std::int64_t image_id, std::int64_t instance_id, int category_id,
           const BinaryMask& mask, std::optional<double> confidence) {
    const ImageInfo& image = image_for(image_id);
    if (mask.width != image.width || mask.height != image.height) {
      throw Error(ErrorCode::dimension_mismatch,
                  "mask dimensions do not match image " +
                      std::to_string(image_id));
    }
    nlohmann::ordered_json node;
    node["image_id"] = image_id;
    node["instance_id"] = instance_id;
    node["category_id"] = category_id;
    if (confidence) node["confidence"] = *confidence;
    node["segmentation"] = {{"size", {mask.height, mask.width}},
                            {"counts", rle_encode(mask).counts}};
    annotations.push_back(std::move(node));
  }
};

DetectionFileWriter::DetectionFileWriter() : impl_(new Impl) {}
DetectionFileWriter::~DetectionFileWriter() = default;
DetectionFileWriter::DetectionFileWriter(DetectionFileWriter&&) noexcept =
    default;
DetectionFileWriter& DetectionFileWriter::operator=(
    DetectionFileWriter&&) noexcept = default;

void DetectionFileWriter::add_image(const ImageInfo& image) {
  if (image.width <= 0 || image.height <= 0) {
    throw Error(ErrorCode::invalid_config,
                "image dimensions must be positive");
  }
  for (const auto& existing : impl_->images) {
    if (existing.id == image.id) {
      throw Error(ErrorCode::invalid_config,
                  "duplicate image id " + std::to_string(image.id));
    }
  }
  impl_->images.push_back(image);
}

void DetectionFileWriter::add_prediction(std::int64_t image_id,
                                         const InstancePrediction& pred) {
  if (pred.confidence < 0.0 || pred.confidence > 1.0) {
    throw Error(ErrorCode::invalid_config,
                "prediction confidence must lie in [0, 1]");
  }
  impl_->add(image_id, pred.instance_id, pred.category_id, pred.mask,
             pred.confidence);
}

void DetectionFileWriter::add_ground_truth(std::int64_t image_id,
                                           const GroundTruthInstance& gt) {
  if (gt.mask.area() == 0) {
    throw Error(ErrorCode::empty_mask, "ground truth " +
                                           std::to_string(gt.gt_id) +
                                           " has an empty mask");
  }
  impl_->add(image_id, gt.gt_id, gt.category_id, gt.mask, std::nullopt);
}

void DetectionFileWriter::save(const std::filesystem::path& path) const {
  nlohmann::ordered_json doc;
  doc["images"] = nlohmann::ordered_json::array();
  for (const auto& image : impl_->images) {
    doc["images"].push_back({{"id", image.id},
                             {"width", image.width},
                             {"height", image.height}});
  }
  doc["annotations"] = impl_->annotations;
  write_file(path, doc.dump(2) + "\n");
}

void save_detection_file(const DetectionData& data,
                         const std::filesystem::path& path) {
  DetectionFileWriter writer;
  for (const auto& image : data.images) writer.add_image(image);
  for (const auto& image : data.images) {
    auto preds = data.predictions.find(image.id);
    if (preds != data.predictions.end()) {
      for (const auto& p : preds->second) writer.add_prediction(image.id, p);
    }
    auto gts = data.ground_truths.find(image.id);
    if (gts != data.ground_truths.end()) {
      for (const auto& g : gts->second) writer.add_ground_truth(image.id, g);
    }
  }
  writer.save(path);
}

// ---------------------------------------------------------------------------
// score maps (16-bit PGM)

ScoreMap load_score_map(const std::filesystem::path& path) {
  std::string bytes = read_file(path);
  std::size_t pos = 0;

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(ErrorCode::bad_magic,
                path.string() + ": not a binary PGM (P5) file");
  }
  pos = 2;

  // header tokens may be separated by whitespace and '#' comments
  auto skip_separators = [&] {
    while (pos < bytes.size()) {
      char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto next_int = [&](const char* what) -> long {
    skip_separators();
    std::size_t start = pos;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') ++pos;
    if (pos == start) {
      throw Error(ErrorCode::parse_error,
                  path.string() + ": expected " + std::string(what) +
                      " in header");
    }
    return std::stol(bytes.substr(start, pos - start));
  };

  long width = next_int("width");
  long height = next_int("height");
  long maxval = next_int("maxval");
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::parse_error,
                path.string() + ": image dimensions must be positive");
  }
  if (maxval != 65535) {
    throw Error(ErrorCode::maxval_unsupported,
                path.string() + ": only maxval 65535 is supported, found " +
                    std::to_string(maxval));
  }
  if (pos >= bytes.size() || !(bytes[pos] == ' ' || bytes[pos] == '\t' ||
                               bytes[pos] == '\r' || bytes[pos] == '\n')) {
    throw Error(ErrorCode::parse_error,
                path.string() + ": expected whitespace after maxval");
  }
  ++pos;  // exactly one whitespace byte before the raster

  std::size_t sample_count =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < sample_count * 2) {
    throw Error(ErrorCode::truncated_data,
                path.string() + ": raster shorter than " +
                    std::to_string(sample_count) + " samples");
  }
  if (bytes.size() - pos > sample_count * 2) {
    throw Error(ErrorCode::parse_error,
                path.string() + ": trailing bytes after the raster");
  }

  ScoreMap map;
  map.width = static_cast<int>(width);
  map.height = static_cast<int>(height);
  map.values.resize(sample_count);
  for (long y = 0; y < height; ++y) {
    for (long x = 0; x < width; ++x) {
      auto hi = static_cast<unsigned char>(bytes[pos]);
      auto lo = static_cast<unsigned char>(bytes[pos + 1]);
      pos += 2;
      map.at(static_cast<int>(x), static_cast<int>(y)) =
          static_cast<double>((hi << 8) | lo) / 65535.0;
    }
  }
  return map;
}

void save_score_map(const ScoreMap& map, const std::filesystem::path& path) {
  if (map.width <= 0 || map.height <= 0 ||
      map.values.size() != static_cast<std::size_t>(map.width) * map.height) {
    throw Error(ErrorCode::invalid_config,
                "score map has inconsistent dimensions");
  }
  std::string bytes = "P5\n" + std::to_string(map.width) + " " +
                      std::to_string(map.height) + "\n65535\n";
  bytes.reserve(bytes.size() +
                static_cast<std::size_t>(map.width) * map.height * 2);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      double v = map.at(x, y);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::invalid_config,
                    "score map value outside [0, 1]");
      }
      auto sample = static_cast<unsigned>(std::lround(v * 65535.0));
      bytes.push_back(static_cast<char>((sample >> 8) & 0xff));
      bytes.push_back(static_cast<char>(sample & 0xff));
    }
  }
  write_file(path, bytes);
}

// ---------------------------------------------------------------------------
// reports

void emit_report(const MetricsReport& report, const std::string& path_prefix) {
  std::string summary = "fp,fn,precision,recall,ap,ar\n";
  if (!report.empty()) {
    summary += std::to_string(report.fp) + "," + std::to_string(report.fn) +
               "," + format_real(report.precision) + "," +
               format_real(report.recall) + "," + format_real(report.ap) +
               "," + format_real(report.ar) + "\n";
  }
  write_file(path_prefix + "summary.csv", summary);

  std::string pr = "threshold,recall,precision\n";
  for (const auto& point : report.pr_curve) {
    pr += format_real(point.threshold) + "," + format_real(point.x) + "," +
          format_real(point.y) + "\n";
  }
  write_file(path_prefix + "pr_curve.csv", pr);

  std::string mr = "threshold,fppi,miss_rate\n";
  for (const auto& point : report.mr_fppi_curve) {
    mr += format_real(point.threshold) + "," + format_real(point.x) + "," +
          format_real(point.y) + "\n";
  }
  write_file(path_prefix + "mr_fppi.csv", mr);

  svg::Series pr_series{"precision vs recall", {}};
  for (const auto& point : report.pr_curve) {
    pr_series.points.emplace_back(point.x, point.y);
  }
  write_file(path_prefix + "pr_curve.svg",
             svg::line_plot("precision vs recall", "recall", "precision",
                            pr_series, {0.0, 1.0}, {0.0, 1.0}));

  svg::Series mr_series{"miss rate vs fppi", {}};
  double max_fppi = 0.0;
  for (const auto& point : report.mr_fppi_curve) {
    mr_series.points.emplace_back(point.x, point.y);
    max_fppi = std::max(max_fppi, point.x);
  }
  write_file(path_prefix + "mr_fppi.svg",
             svg::line_plot("miss rate vs false positives per image", "fppi",
                            "miss rate", mr_series,
                            {0.0, max_fppi > 0.0 ? max_fppi : 1.0},
                            {0.0, 1.0}));
}

void emit_sweep(const SweepTable& table, const std::string& path_prefix) {
  std::string csv = "c,precision,recall,fp,fn\n";
  for (const auto& row : table.rows) {
    csv += format_real(row.c) + "," + format_real(row.precision) + "," +
           format_real(row.recall) + "," + std::to_string(row.fp) + "," +
           std::to_string(row.fn) + "\n";
  }
  write_file(path_prefix + "sweep.csv", csv);

  double c_lo = 0.0, c_hi = 1.0;
  if (!table.rows.empty()) {
    c_lo = table.rows.front().c;
    c_hi = table.rows.back().c;
    if (c_hi <= c_lo) c_hi = c_lo + 1.0;
  }
  svg::Series p_series{"precision", {}}, r_series{"recall", {}},
      pr_series{"pr", {}};
  for (const auto& row : table.rows) {
    p_series.points.emplace_back(row.c, row.precision);
    r_series.points.emplace_back(row.c, row.recall);
    pr_series.points.emplace_back(row.recall, row.precision);
  }
  auto panel = svg::panel_row(
      {svg::line_plot("precision vs c", "c", "precision", p_series,
                      {c_lo, c_hi}, {0.0, 1.0}),
       svg::line_plot("recall vs c", "c", "recall", r_series, {c_lo, c_hi},
                      {0.0, 1.0}),
       svg::line_plot("precision vs recall", "recall", "precision", pr_series,
                      {0.0, 1.0}, {0.0, 1.0})});
  write_file(path_prefix + "sweep.svg", panel);
}

void emit_heatmap(const Heatmap& heatmap, const std::string& path_prefix) {
  std::string csv;
  for (int row = 0; row < heatmap.grid_height; ++row) {
    std::string line;
    for (int col = 0; col < heatmap.grid_width; ++col) {
      if (col > 0) line += ",";
      const auto& v = heatmap.at(col, row);
      if (v) line += format_real(*v);
    }
    csv += line + "\n";
  }
  write_file(path_prefix + "heatmap.csv", csv);
  write_file(path_prefix + "heatmap.svg", svg::heatmap(heatmap));
}

}  // namespace segfuse
