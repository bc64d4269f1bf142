#include "segfuse/mask.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <numeric>

namespace segfuse {

Box intersect(const Box& a, const Box& b) {
  int x0 = std::max(a.x, b.x);
  int y0 = std::max(a.y, b.y);
  int x1 = std::min(a.right(), b.right());
  int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return Box{};
  return Box{x0, y0, x1 - x0, y1 - y0};
}

bool overlaps(const Box& a, const Box& b) {
  return !intersect(a, b).empty();
}

ScoreMap ScoreMap::filled(int width, int height, double value) {
  ScoreMap map;
  map.width = width;
  map.height = height;
  map.values.assign(static_cast<std::size_t>(width) * height, value);
  return map;
}

BinaryMask BinaryMask::zeros(int width, int height) {
  BinaryMask mask;
  mask.width = width;
  mask.height = height;
  mask.bits.assign(static_cast<std::size_t>(width) * height, 0);
  return mask;
}

void BinaryMask::fill_box(const Box& box) {
  Box clipped = intersect(box, Box{0, 0, width, height});
  for (int x = clipped.x; x < clipped.right(); ++x) {
    auto* column = bits.data() + static_cast<std::size_t>(x) * height;
    std::fill(column + clipped.y, column + clipped.bottom(),
              std::uint8_t{1});
  }
}

std::int64_t BinaryMask::area() const {
  return std::count(bits.begin(), bits.end(), std::uint8_t{1});
}

std::optional<Box> BinaryMask::bbox() const {
  // one pass over the scan order, skipping zero regions a word at a time
  int min_x = width, max_x = -1, min_y = height, max_y = -1;
  const std::uint8_t* p = bits.data();
  const std::size_t n = bits.size();
  std::size_t i = 0;
  while (i < n) {
    if (i + 8 <= n) {
      std::uint64_t word;
      std::memcpy(&word, p + i, 8);
      if (word == 0) {
        i += 8;
        continue;
      }
      for (std::size_t k = i; k < i + 8; ++k) {
        if (!p[k]) continue;
        int x = static_cast<int>(k / static_cast<std::size_t>(height));
        int y = static_cast<int>(k % static_cast<std::size_t>(height));
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
      i += 8;
      continue;
    }
    if (p[i]) {
      int x = static_cast<int>(i / static_cast<std::size_t>(height));
      int y = static_cast<int>(i % static_cast<std::size_t>(height));
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
    ++i;
  }
  if (max_x < 0) return std::nullopt;
  return Box{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

BinaryMask rle_decode(const Rle& rle, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::invalid_config,
                "mask dimensions must be positive");
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < rle.counts.size(); ++i) {
    std::int64_t count = rle.counts[i];
    if (count < 0) {
      throw Error(ErrorCode::negative_count,
                  "RLE count at position " + std::to_string(i) +
                      " is negative");
    }
    if (count == 0 && i != 0) {
      throw Error(ErrorCode::noncanonical_rle,
                  "RLE has a zero-length run at position " +
                      std::to_string(i) + "; only the first count may be 0");
    }
    total += count;
  }
  std::int64_t expected = static_cast<std::int64_t>(width) * height;
  if (total != expected) {
    throw Error(ErrorCode::length_mismatch,
                "RLE counts sum to " + std::to_string(total) +
                    ", expected width*height = " + std::to_string(expected));
  }

  BinaryMask mask = BinaryMask::zeros(width, height);
  std::size_t index = 0;
  std::uint8_t value = 0;
  for (std::int64_t count : rle.counts) {
    if (value) {
      std::fill(mask.bits.begin() + index, mask.bits.begin() + index + count,
                std::uint8_t{1});
    }
    index += static_cast<std::size_t>(count);
    value ^= 1;
  }
  return mask;
}

Rle rle_encode(const BinaryMask& mask) {
  Rle rle;
  std::uint8_t current = 0;  // runs start with zeros
  std::int64_t run = 0;
  for (std::uint8_t bit : mask.bits) {
    std::uint8_t value = bit ? 1 : 0;
    if (value != current) {
      rle.counts.push_back(run);
      run = 0;
      current = value;
    }
    ++run;
  }
  rle.counts.push_back(run);
  return rle;
}

namespace detail {

std::int64_t intersection_area(const BinaryMask& a, const BinaryMask& b) {
  auto box_a = a.bbox();
  auto box_b = b.bbox();
  if (!box_a || !box_b) return 0;
  Box common = intersect(*box_a, *box_b);
  if (common.empty()) return 0;

  std::int64_t count = 0;
  for (int x = common.x; x < common.right(); ++x) {
    const auto* col_a = a.bits.data() + static_cast<std::size_t>(x) * a.height;
    const auto* col_b = b.bits.data() + static_cast<std::size_t>(x) * b.height;
    for (int y = common.y; y < common.bottom(); ++y) {
      count += (col_a[y] && col_b[y]) ? 1 : 0;
    }
  }
  return count;
}

double iou_given_areas(const BinaryMask& a, const BinaryMask& b,
                       std::int64_t area_a, std::int64_t area_b) {
  if (area_a == 0 && area_b == 0) return 0.0;
  std::int64_t inter = intersection_area(a, b);
  std::int64_t uni = area_a + area_b - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace detail

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::dimension_mismatch,
                "mask_iou requires masks of equal dimensions");
  }
  return detail::iou_given_areas(a, b, a.area(), b.area());
}

double mean_score_in_mask(const BinaryMask& mask, const ScoreMap& map) {
  if (mask.width != map.width || mask.height != map.height) {
    throw Error(ErrorCode::dimension_mismatch,
                "mask and score map dimensions differ");
  }
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::int64_t count = 0;
  const std::uint8_t* bits = mask.bits.data();
  const std::size_t n = mask.bits.size();
  auto take = [&](std::size_t k) {
    double v = map.values[k];
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++count;
  };
  std::size_t i = 0;
  while (i < n) {
    if (i + 8 <= n) {
      std::uint64_t word;
      std::memcpy(&word, bits + i, 8);
      if (word == 0) {
        i += 8;
        continue;
      }
      for (std::size_t k = i; k < i + 8; ++k) {
        if (bits[k]) take(k);
      }
      i += 8;
      continue;
    }
    if (bits[i]) take(i);
    ++i;
  }
  if (count == 0) {
    throw Error(ErrorCode::empty_mask,
                "mean score is undefined for an empty mask");
  }
  // The true mean lies within the in-mask value range; clamp the rounded
  // sum back into it so the bound holds exactly.
  return std::clamp(sum / static_cast<double>(count), lo, hi);
}

}  // namespace segfuse
