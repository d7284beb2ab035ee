#include <cmath>

#include "test_support.hpp"

namespace gaitlab {
namespace {

using test::filled_rect;

TEST(Entropy, SingleCellIsZero) {
  RealGrid patch(4, 4, 0.3);
  EXPECT_DOUBLE_EQ(cooccurrence_entropy(patch), 0.0);
}

TEST(Entropy, UniformFourCellsIsLogQuarter) {
  // Horizontal pairs of a 2-level patch: (0,0) (0,1) (1,1) (1,0), one each.
  RealGrid patch(5, 2);
  const double row0[] = {0.0, 0.0, 1.0, 1.0, 0.0};
  for (int c = 0; c < 5; ++c) patch(0, c) = row0[c];
  for (int c = 0; c < 5; ++c) patch(1, c) = row0[c];
  EXPECT_NEAR(cooccurrence_entropy(patch, 2), std::log(0.25), 1e-12);
}

TEST(Entropy, MatchesHandCountedMatrix) {
  auto patch = test::random_image(6, 5, 3);
  constexpr int L = 4;
  double m[L][L] = {};
  double total = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 6; ++c) {
      auto q = [](double v) { return std::min(L - 1, static_cast<int>(v * L)); };
      m[q(patch(r, c))][q(patch(r + 1, c))] += 1;
      total += 1;
    }
  double expected = 0;
  for (auto& row : m)
    for (double v : row)
      if (v > 0) expected += v / total * std::log(v / total);
  EXPECT_NEAR(cooccurrence_entropy(patch, L, {1, 0}), expected, 1e-12);
}

TEST(Entropy, NeverPositive) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    EXPECT_LE(cooccurrence_entropy(test::random_image(3 + s % 7, 2 + s % 5, s)), 0.0);
  }
}

TEST(Entropy, Errors) {
  EXPECT_THROW_KIND(cooccurrence_entropy(RealGrid(1, 5)), DegenerateInput);
  EXPECT_THROW_KIND(cooccurrence_entropy(RealGrid(3, 3), 8, {0, 3}), DegenerateInput);
  EXPECT_THROW_KIND(cooccurrence_entropy(RealGrid(3, 3), 1), Parameter);
}

TEST(BoundingBox, TightBox) {
  BinaryMask m(10, 10);
  m(2, 3) = 1;
  m(5, 7) = 1;
  EXPECT_EQ(extract_bounding_box(m), (BoundingBox{2, 5, 3, 7}));
}

TEST(BoundingBox, SinglePixel) {
  BinaryMask m(8, 8);
  m(4, 4) = 1;
  const auto b = extract_bounding_box(m);
  EXPECT_EQ(b, (BoundingBox{4, 4, 4, 4}));
  EXPECT_EQ(b.height(), 1);
  EXPECT_EQ(b.width(), 1);
}

TEST(BoundingBox, EmptyMask) { EXPECT_THROW_KIND(extract_bounding_box(BinaryMask(5, 5)), EmptySilhouette); }

TEST(Normalize, IdentityOnCenteredTarget) {
  NormalizationSpec spec{8, 7};
  auto m = filled_rect(7, 8, 0, 2, 7, 4);
  EXPECT_EQ(normalize_silhouette(m, extract_bounding_box(m), spec), m);
}

TEST(Normalize, DoublesHeight) {
  // 32 px wide x 64 px tall block inside a larger canvas.
  auto m = filled_rect(100, 100, 10, 20, 73, 51);
  NormalizationSpec spec;
  const auto out = normalize_silhouette(m, extract_bounding_box(m), spec);
  ASSERT_EQ(out.height(), 128);
  ASSERT_EQ(out.width(), 88);
  const auto box = extract_bounding_box(out);
  EXPECT_EQ(box.height(), 128);
  EXPECT_EQ(box.width(), 64);
}

TEST(Normalize, NearestNeighbourOracle) {
  // Scale = 3: every source pixel becomes a 3x3 block.
  BinaryMask m(3, 2);
  m(0, 0) = 1;
  m(1, 2) = 1;
  m(0, 1) = 1;
  NormalizationSpec spec{6, 9};
  const auto out = normalize_silhouette(m, {0, 1, 0, 2}, spec);
  EXPECT_DOUBLE_EQ(horizontal_centroid(out), 4.0);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 9; ++c) EXPECT_EQ(out(r, c), m(r / 3, c / 3)) << r << "," << c;
}

TEST(Normalize, CentroidAndFullHeightProperty) {
  Rng rng(42);
  NormalizationSpec spec;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    BinaryMask m(60, 80);
    const int n = rng.uniform_int(1, 4);
    for (int k = 0; k < n; ++k) {
      const int top = rng.uniform_int(0, 30), left = rng.uniform_int(15, 35);
      const int bottom = std::min(79, top + rng.uniform_int(20, 49));
      const int right = std::min(59, left + rng.uniform_int(0, 12));
      for (int r = top; r <= bottom; ++r)
        for (int c = left; c <= right; ++c) m(r, c) = 1;
    }
    const auto box = extract_bounding_box(m);
    // scaled silhouette must fit the target width
    if (box.width() * spec.target_height > box.height() * spec.target_width) continue;
    ++checked;
    const auto out = normalize_silhouette(m, box, spec);
    EXPECT_NEAR(horizontal_centroid(out), (spec.target_width - 1) / 2.0, 1.0);
    EXPECT_EQ(extract_bounding_box(out).height(), spec.target_height);
    EXPECT_EQ(normalize_silhouette(out, extract_bounding_box(out), spec), out);
  }
  EXPECT_GE(checked, 30);
}

TEST(Normalize, Errors) {
  auto m = filled_rect(5, 5, 1, 1, 3, 3);
  EXPECT_THROW_KIND(normalize_silhouette(m, {3, 1, 1, 3}, {}), DegenerateInput);
  EXPECT_THROW_KIND(normalize_silhouette(m, {0, 9, 0, 3}, {}), Parameter);
  EXPECT_THROW_KIND(normalize_silhouette(m, {1, 3, 1, 3}, {0, 10}), Parameter);
}

TEST(Normalize, SequenceSkipsEmptyFrames) {
  GaitSequence seq;
  seq.sequence_id = "x";
  seq.frames = {filled_rect(10, 10, 2, 2, 7, 4), BinaryMask(10, 10), filled_rect(10, 10, 1, 1, 8, 3)};
  EXPECT_EQ(normalize_sequence(seq, {}).size(), 2u);
  seq.frames = {BinaryMask(4, 4)};
  EXPECT_THROW_KIND(normalize_sequence(seq, {}), EmptySilhouette);
}

TEST(Sequence, Validate) {
  GaitSequence seq;
  EXPECT_THROW_KIND(seq.validate(), DegenerateInput);
  seq.frames = {BinaryMask(3, 3), BinaryMask(4, 3)};
  EXPECT_THROW_KIND(seq.validate(), Dimension);
}

}  // namespace
}  // namespace gaitlab
