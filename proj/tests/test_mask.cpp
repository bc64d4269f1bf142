#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "segfuse/mask.hpp"

using namespace segfuse;

namespace {

BinaryMask mask_from_indices(int width, int height,
                             const std::vector<std::int64_t>& indices) {
  BinaryMask mask = BinaryMask::zeros(width, height);
  for (std::int64_t i : indices) mask.bits[static_cast<std::size_t>(i)] = 1;
  return mask;
}

}  // namespace

TEST_SUITE_BEGIN("mask");

TEST_CASE("decode single zero run is the all-zero mask") {
  BinaryMask mask = rle_decode(Rle{{16}}, 4, 4);
  CHECK(mask.area() == 0);
  CHECK(mask.width == 4);
  CHECK(mask.height == 4);
}

TEST_CASE("decode leading zero count is the all-one mask") {
  BinaryMask mask = rle_decode(Rle{{0, 16}}, 4, 4);
  CHECK(mask.area() == 16);
}

TEST_CASE("decode places runs at enumerated scan indices") {
  Rle rle{{2, 3, 5, 2}};
  auto expected = oracles::decode_indices(rle.counts);
  CHECK(expected == std::vector<std::int64_t>{2, 3, 4, 10, 11});

  BinaryMask mask = rle_decode(rle, 3, 4);
  CHECK(mask == mask_from_indices(3, 4, expected));
  // column-major: scan index 4 is pixel (1, 0)
  CHECK(mask.at(1, 0));
  CHECK_FALSE(mask.at(0, 0));
}

TEST_CASE("decode rejects malformed runs") {
  CHECK_THROWS_WITH_AS(rle_decode(Rle{{5}}, 4, 4), doctest::Contains("sum"),
                       Error);
  try {
    rle_decode(Rle{{5}}, 4, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::length_mismatch);
  }
  try {
    rle_decode(Rle{{-1, 17}}, 4, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::negative_count);
  }
  try {
    rle_decode(Rle{{2, 0, 14}}, 4, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::noncanonical_rle);
  }
}

TEST_CASE("encode is canonical") {
  CHECK(rle_encode(BinaryMask::zeros(4, 4)).counts ==
        std::vector<std::int64_t>{16});
  CHECK(rle_encode(rle_decode(Rle{{0, 16}}, 4, 4)).counts ==
        std::vector<std::int64_t>{0, 16});
}

TEST_CASE("rle round trip identity on random masks") {
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 1000; ++i) {
    int w = 1 + static_cast<int>(rng() % 32);
    int h = 1 + static_cast<int>(rng() % 32);
    BinaryMask mask = (i % 2 == 0)
                          ? oracles::random_blob_mask(rng, w, h, 0.4)
                          : oracles::random_rect_mask(rng, w, h);
    Rle rle = rle_encode(mask);
    CHECK(rle_decode(rle, w, h) == mask);

    // and the other direction, starting from the canonical encoding
    CHECK(rle_encode(rle_decode(rle, w, h)) == rle);
  }
}

TEST_CASE("iou of identical and disjoint masks") {
  BinaryMask a = BinaryMask::zeros(8, 8);
  a.fill_box({0, 0, 4, 4});
  CHECK(mask_iou(a, a) == 1.0);

  BinaryMask b = BinaryMask::zeros(8, 8);
  b.fill_box({4, 4, 4, 4});
  CHECK(mask_iou(a, b) == 0.0);
}

TEST_CASE("iou of offset blocks matches pixel enumeration") {
  BinaryMask a = BinaryMask::zeros(8, 8);
  a.fill_box({0, 0, 4, 4});
  BinaryMask b = BinaryMask::zeros(8, 8);
  b.fill_box({2, 2, 4, 4});
  // intersection 4, union 28
  CHECK(mask_iou(a, b) == oracles::iou(a, b));
  CHECK(mask_iou(a, b) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("iou of two empty masks is zero, not NaN") {
  BinaryMask a = BinaryMask::zeros(5, 5);
  CHECK(mask_iou(a, a) == 0.0);
}

TEST_CASE("iou requires matching dimensions") {
  CHECK_THROWS_AS(mask_iou(BinaryMask::zeros(4, 4), BinaryMask::zeros(5, 4)),
                  Error);
}

TEST_CASE("iou is symmetric and exact against the oracle") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    BinaryMask a = oracles::random_blob_mask(rng, 16, 12, 0.3);
    BinaryMask b = oracles::random_blob_mask(rng, 16, 12, 0.3);
    double ab = mask_iou(a, b);
    CHECK(ab == mask_iou(b, a));
    CHECK(ab == oracles::iou(a, b));
    if (a.area() > 0) CHECK(mask_iou(a, a) == 1.0);
  }
}

TEST_CASE("mean score over a uniform map is the map value") {
  ScoreMap map = ScoreMap::filled(6, 5, 0.6);
  BinaryMask mask = BinaryMask::zeros(6, 5);
  mask.fill_box({1, 1, 3, 3});
  CHECK(mean_score_in_mask(mask, map) == 0.6);
}

TEST_CASE("mean score sums only in-mask pixels") {
  ScoreMap map = ScoreMap::filled(2, 2, 0.0);
  map.values = {1.0, 0.0, 0.5, 0.5};
  BinaryMask full = BinaryMask::zeros(2, 2);
  full.fill_box({0, 0, 2, 2});
  CHECK(mean_score_in_mask(full, map) == (1.0 + 0.0 + 0.5 + 0.5) / 4.0);
}

TEST_CASE("mean score of an empty mask is an error") {
  ScoreMap map = ScoreMap::filled(4, 4, 0.3);
  try {
    mean_score_in_mask(BinaryMask::zeros(4, 4), map);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_mask);
  }
}

TEST_CASE("mean score ignores values outside the mask") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    BinaryMask mask = oracles::random_rect_mask(rng, 10, 8);
    ScoreMap map = ScoreMap::filled(10, 8, 0.0);
    for (auto& v : map.values) v = unit(rng);
    double before = mean_score_in_mask(mask, map);
    CHECK(before == oracles::mean_in_mask(mask, map));

    ScoreMap scrambled = map;
    for (int x = 0; x < 10; ++x) {
      for (int y = 0; y < 8; ++y) {
        if (!mask.at(x, y)) scrambled.at(x, y) = unit(rng);
      }
    }
    CHECK(mean_score_in_mask(mask, scrambled) == before);
  }
}

TEST_CASE("mean score stays within the in-mask value range") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    BinaryMask mask = oracles::random_blob_mask(rng, 9, 7, 0.5);
    if (mask.area() == 0) continue;
    ScoreMap map = ScoreMap::filled(9, 7, 0.0);
    for (auto& v : map.values) v = unit(rng);
    double lo = 1.0, hi = 0.0;
    for (int x = 0; x < 9; ++x) {
      for (int y = 0; y < 7; ++y) {
        if (mask.at(x, y)) {
          lo = std::min(lo, map.at(x, y));
          hi = std::max(hi, map.at(x, y));
        }
      }
    }
    double mean = mean_score_in_mask(mask, map);
    CHECK(mean >= lo);
    CHECK(mean <= hi);
  }
}

TEST_CASE("bbox is tight") {
  BinaryMask mask = BinaryMask::zeros(10, 10);
  CHECK_FALSE(mask.bbox().has_value());
  mask.set(3, 7, true);
  mask.set(5, 2, true);
  Box box = *mask.bbox();
  CHECK(box == Box{3, 2, 3, 6});
}

TEST_SUITE_END();
