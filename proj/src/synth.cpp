#include "segfuse/synth.hpp"

#include <cmath>

#include "segfuse/rng.hpp"

namespace segfuse {

namespace {

constexpr int kPlacementAttempts = 1000;
constexpr double kDefaultThreshold = 0.04;

void check_config(const SceneConfig& cfg) {
  if (cfg.image_width < 1 || cfg.image_height < 1) {
    throw Error(ErrorCode::invalid_config, "image dimensions must be positive");
  }
  if (cfg.true_count < 0 || cfg.reflection_count < 0) {
    throw Error(ErrorCode::invalid_config, "instance counts must be >= 0");
  }
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(cfg.semantic_score_true) ||
      !in_unit(cfg.semantic_score_reflection) ||
      !in_unit(cfg.confidence_low) || !in_unit(cfg.confidence_high) ||
      cfg.confidence_low > cfg.confidence_high || cfg.semantic_noise < 0.0) {
    throw Error(ErrorCode::invalid_config,
                "score and confidence parameters must lie in [0, 1]");
  }
  if (cfg.mirror_rect) {
    const Box& m = *cfg.mirror_rect;
    if (m.empty() || m.x < 0 || m.y < 0 || m.right() > cfg.image_width ||
        m.bottom() > cfg.image_height) {
      throw Error(ErrorCode::invalid_config,
                  "mirror rectangle must be non-empty and inside the image");
    }
  }
}

Box resolve_mirror(const SceneConfig& cfg) {
  return cfg.mirror_rect ? *cfg.mirror_rect
                         : default_mirror_rect(cfg.image_width,
                                               cfg.image_height);
}

struct Placement {
  std::vector<Box> persons;
  std::vector<Box> reflections;
};

bool clear_of(const Box& candidate, const std::vector<Box>& taken) {
  for (const auto& box : taken) {
    if (overlaps(candidate, box)) return false;
  }
  return true;
}

Placement place_instances(const SceneConfig& cfg, const Box& mirror,
                          SplitMix64& rng) {
  Placement placement;
  std::vector<Box> occupied;

  int base_w = std::max(1, static_cast<int>(std::lround(cfg.image_width * 0.07)));
  int base_h = std::max(1, static_cast<int>(std::lround(cfg.image_height * 0.32)));

  auto try_place = [&](int w, int h, bool inside_mirror) -> std::optional<Box> {
    // "strictly inside" keeps one pixel of mirror visible on every side
    int x_lo = inside_mirror ? mirror.x + 1 : 0;
    int y_lo = inside_mirror ? mirror.y + 1 : 0;
    int x_hi = (inside_mirror ? mirror.right() - 1 : cfg.image_width) - w;
    int y_hi = (inside_mirror ? mirror.bottom() - 1 : cfg.image_height) - h;
    if (x_hi < x_lo || y_hi < y_lo) return std::nullopt;
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
      int x = static_cast<int>(x_lo + rng.next_below(x_hi - x_lo + 1));
      int y = static_cast<int>(y_lo + rng.next_below(y_hi - y_lo + 1));
      Box candidate{x, y, w, h};
      if (!inside_mirror && overlaps(candidate, mirror)) continue;
      if (!clear_of(candidate, occupied)) continue;
      return candidate;
    }
    return std::nullopt;
  };

  for (int i = 0; i < cfg.true_count; ++i) {
    double scale = rng.next_in(0.85, 1.15);
    int w = std::max(1, static_cast<int>(std::lround(base_w * scale)));
    int h = std::max(1, static_cast<int>(std::lround(base_h * scale)));
    auto box = try_place(w, h, false);
    if (!box) {
      throw Error(ErrorCode::placement_failure,
                  "could not place true person " + std::to_string(i + 1));
    }
    placement.persons.push_back(*box);
    occupied.push_back(*box);
  }

  for (int j = 0; j < cfg.reflection_count; ++j) {
    // a reflection is a half-size copy of a placed person
    int src_w = base_w, src_h = base_h;
    if (cfg.true_count > 0) {
      const Box& src = placement.persons[j % cfg.true_count];
      src_w = src.width;
      src_h = src.height;
    }
    int w = std::max(1, src_w / 2);
    int h = std::max(1, src_h / 2);
    auto box = try_place(w, h, true);
    if (!box) {
      throw Error(ErrorCode::placement_failure,
                  "could not place reflection " + std::to_string(j + 1) +
                      " inside the mirror");
    }
    placement.reflections.push_back(*box);
    occupied.push_back(*box);
  }
  return placement;
}

enum class Regime { all_accepted, gap, all_rejected, too_close };

Regime classify(const SceneConfig& cfg, double c) {
  // Map values clamp to [0, 1], so any c <= 0 accepts everything no matter
  // how large the noise is.
  if (c <= 0.0) return Regime::all_accepted;
  // Noise samples stay within sqrt(3) stddevs, so a 6-stddev margin can
  // never be crossed; a hair of slack keeps the boundary usable when
  // |c - score| lands exactly on 6*noise in floating point.
  double margin = 6.0 * cfg.semantic_noise - 1e-12;
  double lo = cfg.semantic_score_reflection;
  double hi = cfg.semantic_score_true;
  if (c <= lo - margin) return Regime::all_accepted;
  if (c >= lo + margin && c <= hi - margin) return Regime::gap;
  if (c >= hi + margin) return Regime::all_rejected;
  return Regime::too_close;
}

ExpectedCounts counts_from(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  ExpectedCounts counts;
  counts.tp = tp;
  counts.fp = fp;
  counts.fn = fn;
  counts.precision = detail::precision_of(tp, fp);
  counts.recall = detail::recall_of(tp, fn);
  return counts;
}

}  // namespace

Box default_mirror_rect(int image_width, int image_height) {
  return Box{static_cast<int>(std::lround(image_width * 0.55)),
             static_cast<int>(std::lround(image_height * 0.10)),
             static_cast<int>(std::lround(image_width * 0.40)),
             static_cast<int>(std::lround(image_height * 0.60))};
}

ExpectedMetrics expected_metrics(const SceneConfig& cfg, double c) {
  check_config(cfg);
  if (c < 0.0 || c > 1.0) {
    throw Error(ErrorCode::invalid_config, "threshold must lie in [0, 1]");
  }

  std::int64_t t = cfg.true_count;
  std::int64_t r = cfg.reflection_count;

  ExpectedMetrics expected;
  expected.pre_fusion = counts_from(t, r, 0);

  switch (classify(cfg, c)) {
    case Regime::all_accepted:
      expected.post_fusion = expected.pre_fusion;
      break;
    case Regime::gap:
      expected.post_fusion = counts_from(t, 0, 0);
      break;
    case Regime::all_rejected:
      expected.post_fusion = counts_from(0, 0, t);
      break;
    case Regime::too_close:
      throw Error(ErrorCode::separation_too_small,
                  "threshold " + std::to_string(c) +
                      " is within 6 noise stddevs of a score level; the "
                      "closed-form oracle cannot guarantee the outcome");
  }
  return expected;
}

SceneBundle generate_scene(const SceneConfig& cfg, std::int64_t image_id) {
  check_config(cfg);
  Box mirror = resolve_mirror(cfg);
  if (mirror.right() > cfg.image_width || mirror.bottom() > cfg.image_height) {
    throw Error(ErrorCode::invalid_config,
                "default mirror does not fit; pass mirror_rect explicitly");
  }

  SplitMix64 rng(cfg.seed);
  Placement placement = place_instances(cfg, mirror, rng);

  SceneBundle bundle;
  bundle.image_id = image_id;

  std::int64_t next_id = 1;
  for (const auto& box : placement.persons) {
    BinaryMask mask = BinaryMask::zeros(cfg.image_width, cfg.image_height);
    mask.fill_box(box);
    bundle.ground_truths.push_back({next_id, 1, image_id, mask});
    bundle.predictions.push_back({next_id, 1, 0.0, std::move(mask)});
    ++next_id;
  }
  for (const auto& box : placement.reflections) {
    BinaryMask mask = BinaryMask::zeros(cfg.image_width, cfg.image_height);
    mask.fill_box(box);
    bundle.predictions.push_back({next_id, 1, 0.0, std::move(mask)});
    ++next_id;
  }
  for (auto& prediction : bundle.predictions) {
    prediction.confidence = rng.next_in(cfg.confidence_low,
                                        cfg.confidence_high);
  }

  bundle.score_map =
      ScoreMap::filled(cfg.image_width, cfg.image_height, 0.0);
  for (const auto& box : placement.persons) {
    for (int x = box.x; x < box.right(); ++x) {
      for (int y = box.y; y < box.bottom(); ++y) {
        bundle.score_map.at(x, y) = cfg.semantic_score_true;
      }
    }
  }
  for (const auto& box : placement.reflections) {
    for (int x = box.x; x < box.right(); ++x) {
      for (int y = box.y; y < box.bottom(); ++y) {
        bundle.score_map.at(x, y) = cfg.semantic_score_reflection;
      }
    }
  }
  if (cfg.semantic_noise > 0.0) {
    const double amplitude = std::sqrt(3.0) * cfg.semantic_noise;
    for (double& value : bundle.score_map.values) {
      double noise = amplitude * (2.0 * rng.next_unit() - 1.0);
      value = std::clamp(value + noise, 0.0, 1.0);
    }
  }

  if (classify(cfg, kDefaultThreshold) != Regime::too_close) {
    bundle.expected = expected_metrics(cfg, kDefaultThreshold);
  }
  return bundle;
}

}  // namespace segfuse
