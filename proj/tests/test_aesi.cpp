#include <algorithm>

#include "test_support.hpp"

namespace gaitlab {
namespace {

std::vector<BinaryMask> random_frames(int n, int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BinaryMask> frames;
  for (int i = 0; i < n; ++i) {
    BinaryMask m(w, h);
    for (auto& v : m.values()) v = rng.uniform() < 0.4;
    frames.push_back(m);
  }
  return frames;
}

GaitPeriod period_of(int frames, std::vector<int> minima) { return GaitPeriod{frames, std::move(minima), {}}; }

TEST(BuildAesi, SingleFrameIsTheFrame) {
  auto frames = random_frames(1, 6, 5, 1);
  const auto a = build_aesi(frames);
  EXPECT_EQ(a.energy, to_real(frames[0]));
}

TEST(BuildAesi, Averages) {
  BinaryMask on(2, 2, 1), off(2, 2, 0);
  std::vector<BinaryMask> frames = {on, off};
  const auto a = build_aesi(frames);
  for (double v : a.energy.values()) EXPECT_DOUBLE_EQ(v, 0.5);
  frames = {on, on, on};
  const auto b = build_aesi(frames);
  for (double v : b.energy.values()) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(BuildAesi, EmptyInput) {
  std::vector<BinaryMask> none;
  EXPECT_THROW_KIND(build_aesi(none), DegenerateInput);
}

TEST(BuildAesi, UsesFirstPeriodFromFirstMinimum) {
  auto frames = random_frames(40, 5, 4, 9);
  const auto a = build_aesi(frames, period_of(10, {3, 8, 13}));
  const std::vector<BinaryMask> window(frames.begin() + 3, frames.begin() + 13);
  EXPECT_EQ(a.energy, build_aesi(window).energy);
  EXPECT_EQ(a.period_frames, 10);
  EXPECT_FALSE(a.period_fallback);
}

TEST(BuildAesi, WindowShiftsBackAtTheEnd) {
  const auto w = averaging_window(20, period_of(10, {15}));
  EXPECT_EQ(w.begin, 10);
  EXPECT_EQ(w.end, 20);
  EXPECT_FALSE(w.fallback);
}

TEST(BuildAesi, ShortSequenceFallsBack) {
  auto frames = random_frames(8, 5, 4, 2);
  const auto a = build_aesi(frames, period_of(12, {1, 7}));
  EXPECT_TRUE(a.period_fallback);
  EXPECT_EQ(a.energy, build_aesi(frames).energy);
}

TEST(BuildAesi, OrderInvariantAndBounded) {
  auto frames = random_frames(16, 7, 9, 5);
  const auto a = build_aesi(frames);
  Rng rng(77);
  for (int k = 0; k < 5; ++k) {
    for (std::size_t i = frames.size() - 1; i > 0; --i)
      std::swap(frames[i], frames[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i)))]);
    const auto b = build_aesi(frames);
    for (std::size_t i = 0; i < a.energy.size(); ++i) EXPECT_NEAR(a.energy.values()[i], b.energy.values()[i], 1e-15);
  }
  for (double v : a.energy.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Segment, TableFractionsAtHundred) {
  EXPECT_EQ(part_boundaries(100), (std::array<int, 5>{0, 20, 45, 70, 100}));
}

TEST(Segment, RoundingAt128) {
  const auto b = part_boundaries(128);
  EXPECT_EQ(b, (std::array<int, 5>{0, 26, 58, 90, 128}));
  const auto parts = segment_parts(RealGrid(88, 128));
  const int heights[] = {26, 32, 32, 38};
  for (int i = 0; i < 4; ++i) EXPECT_EQ(parts[i].data.height(), heights[i]);
}

TEST(Segment, BoundariesMatchRoundHalfUpOracle) {
  for (int h = 5; h <= 400; ++h) {
    const auto b = part_boundaries(h);
    // integer arithmetic: round(f*h) with f = k/20 -> floor((k*h + 10) / 20)
    EXPECT_EQ(b[1], (4 * h + 10) / 20) << h;
    EXPECT_EQ(b[2], (9 * h + 10) / 20) << h;
    EXPECT_EQ(b[3], (14 * h + 10) / 20) << h;
  }
}

TEST(Segment, ExactPartition) {
  for (int h : {5, 37, 100, 128, 131}) {
    const auto img = test::random_image(11, h, static_cast<std::uint64_t>(h));
    const auto parts = segment_parts(img);
    EXPECT_EQ(assemble_sub_aesi(parts, PartSet::full()).data, img);
    int total = 0;
    for (const auto& p : parts) total += p.data.height();
    EXPECT_EQ(total, h);
  }
}

TEST(Segment, TooShort) { EXPECT_THROW_KIND(segment_parts(RealGrid(4, 3)), DegenerateInput); }

TEST(PartSets, Enumeration) {
  const auto sets = enumerate_part_sets();
  EXPECT_EQ(sets.size(), 15u);
  EXPECT_NE(std::find(sets.begin(), sets.end(), PartSet::full()), sets.end());
  EXPECT_EQ(std::find(sets.begin(), sets.end(), PartSet{}), sets.end());
  std::set<std::uint8_t> distinct;
  for (auto s : sets) distinct.insert(s.bits());
  EXPECT_EQ(distinct.size(), 15u);
}

TEST(PartSets, Naming) {
  EXPECT_EQ((PartSet{PartId::Limb, PartId::Neck}).to_string(), "{Neck,Limb}");
  EXPECT_EQ(PartSet::full().without(PartId::Chest).complement(), PartSet{PartId::Chest});
  EXPECT_EQ(part_from_string("Pelvic"), PartId::Pelvic);
  EXPECT_THROW_KIND(part_from_string("Knee"), Parameter);
}

TEST(SubAesi, Heights) {
  const auto parts = segment_parts(test::random_image(8, 100, 4));
  EXPECT_EQ(assemble_sub_aesi(parts, {PartId::Neck, PartId::Limb}).data.height(), 50);
  EXPECT_EQ(assemble_sub_aesi(parts, {PartId::Chest}).data.height(), 25);
  for (auto set : enumerate_part_sets()) {
    int expected = 0;
    for (auto p : kAllParts)
      if (set.contains(p)) expected += parts[static_cast<std::size_t>(p)].data.height();
    EXPECT_EQ(assemble_sub_aesi(parts, set).data.height(), expected);
  }
  EXPECT_THROW_KIND(assemble_sub_aesi(parts, PartSet{}), Parameter);
}

TEST(SubAesi, AnatomicalOrder) {
  const auto img = test::random_image(6, 100, 8);
  const auto parts = segment_parts(img);
  const auto sub = assemble_sub_aesi(parts, {PartId::Limb, PartId::Neck});
  EXPECT_EQ(sub.data.rows(0, 20), img.rows(0, 20));
  EXPECT_EQ(sub.data.rows(20, 50), img.rows(70, 100));
}

}  // namespace
}  // namespace gaitlab
