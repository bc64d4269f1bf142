#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "segfuse/error.hpp"

namespace segfuse {

// Axis-aligned pixel rectangle covering [x, x+width) x [y, y+height).
struct Box {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int right() const { return x + width; }
  int bottom() const { return y + height; }
  bool empty() const { return width <= 0 || height <= 0; }

  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }

  bool operator==(const Box&) const = default;
};

Box intersect(const Box& a, const Box& b);
bool overlaps(const Box& a, const Box& b);

// Run-length encoding of a binary mask: alternating counts of 0-pixels and
// 1-pixels in column-major scan order. The first count refers to zeros and
// is the only one allowed to be zero.
struct Rle {
  std::vector<std::int64_t> counts;

  bool operator==(const Rle&) const = default;
};

// Dense per-pixel scores in [0, 1], one channel. Stored in the same
// column-major scan order as masks: values[x * height + y].
struct ScoreMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  static ScoreMap filled(int width, int height, double value);

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(x) * height + y];
  }
  double& at(int x, int y) {
    return values[static_cast<std::size_t>(x) * height + y];
  }

  bool operator==(const ScoreMap&) const = default;
};

// One instance bitmask, decoded. bits[x * height + y] is nonzero where the
// pixel belongs to the instance.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  static BinaryMask zeros(int width, int height);

  bool at(int x, int y) const {
    return bits[static_cast<std::size_t>(x) * height + y] != 0;
  }
  void set(int x, int y, bool on) {
    bits[static_cast<std::size_t>(x) * height + y] = on ? 1 : 0;
  }

  // Fills every pixel of `box` (clipped to the mask) with ones.
  void fill_box(const Box& box);

  std::int64_t area() const;

  // Tight bounding box of the one-pixels; nullopt for an empty mask.
  std::optional<Box> bbox() const;

  bool operator==(const BinaryMask&) const = default;
};

// Expands an RLE into a dense mask. Rejects negative counts, counts that do
// not sum to width*height, and zero-length runs anywhere but the leading
// position.
BinaryMask rle_decode(const Rle& rle, int width, int height);

// Canonical RLE of a mask: no zero-length interior runs, first count may be
// zero. rle_decode(rle_encode(m), m.width, m.height) == m for every mask.
Rle rle_encode(const BinaryMask& mask);

// Intersection over union of two same-sized masks; 0.0 when both are empty.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

// Arithmetic mean of the map values covered by the mask.
double mean_score_in_mask(const BinaryMask& mask, const ScoreMap& map);

namespace detail {

// Number of pixels set in both masks, assuming equal dimensions.
std::int64_t intersection_area(const BinaryMask& a, const BinaryMask& b);

// IoU with the areas already known, skipping the per-call recounts.
double iou_given_areas(const BinaryMask& a, const BinaryMask& b,
                       std::int64_t area_a, std::int64_t area_b);

}  // namespace detail

}  // namespace segfuse
