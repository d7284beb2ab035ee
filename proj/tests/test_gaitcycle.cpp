#include <cmath>
#include <numbers>

#include "test_support.hpp"

namespace gaitlab {
namespace {

// Period-T signal with minima at phase + k*T/2, amplitude from a triangle wave.
std::vector<double> triangle_signal(int n, int T, int phase) {
  std::vector<double> s(static_cast<std::size_t>(n));
  const double half = T / 2.0;
  for (int t = 0; t < n; ++t) {
    const double u = std::fmod(std::fmod(t - phase, half) + half, half) / half;
    s[static_cast<std::size_t>(t)] = 900.0 + 1300.0 * (1.0 - std::abs(2.0 * u - 1.0));
  }
  return s;
}

// Exhaustive neighbour comparison for strict isolated minima.
std::vector<int> brute_minima(const std::vector<double>& s) {
  std::vector<int> out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i)
    if (s[i] < s[i - 1] && s[i] < s[i + 1]) out.push_back(static_cast<int>(i));
  return out;
}

TEST(LowerHalf, Counts) {
  EXPECT_EQ(lower_half_count(test::filled_rect(10, 10, 0, 0, 4, 9)), 0.0);
  EXPECT_EQ(lower_half_count(BinaryMask(10, 10, 1)), 50.0);
  BinaryMask m(6, 9);
  for (int k = 0; k < 7; ++k) m(5 + k % 4, k % 6) = 1;
  EXPECT_EQ(lower_half_count(m), 7.0);
}

TEST(Smooth, Examples) {
  const std::vector<double> s = {1, 5, 2, 8, 3};
  EXPECT_EQ(smooth_signal(s, 1), s);
  const std::vector<double> c(7, 4.5);
  EXPECT_EQ(smooth_signal(c, 5), c);
  const std::vector<double> spike = {0, 3, 0};
  const auto out = smooth_signal(spike, 3);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_DOUBLE_EQ(out[0], 1.5);
  EXPECT_DOUBLE_EQ(out[1], 1.0);
  EXPECT_DOUBLE_EQ(out[2], 1.5);
}

TEST(Smooth, Errors) {
  const std::vector<double> s = {1, 2, 3};
  EXPECT_THROW_KIND(smooth_signal(s, 2), Parameter);
  EXPECT_THROW_KIND(smooth_signal(s, 5), Parameter);
  EXPECT_THROW_KIND(smooth_signal(s, 0), Parameter);
}

TEST(Extrema, ConstructedMinima) {
  std::vector<double> s(45);
  for (int i = 0; i < 45; ++i) s[static_cast<std::size_t>(i)] = -std::cos(2.0 * std::numbers::pi * (i - 5) / 15.0);
  const auto ext = find_extrema(s);
  EXPECT_EQ(ext.minima, (std::vector<int>{5, 20, 35}));
  EXPECT_EQ(ext.minima, brute_minima(s));
}

TEST(Extrema, PlateauCentre) {
  const std::vector<double> s = {5, 1, 1, 1, 5, 6, 5, 2, 5};
  const auto ext = find_extrema(s);
  EXPECT_EQ(ext.minima, (std::vector<int>{2, 7}));
  EXPECT_EQ(ext.maxima, (std::vector<int>{5}));
}

TEST(Extrema, Degenerate) {
  std::vector<double> mono(20);
  for (int i = 0; i < 20; ++i) mono[static_cast<std::size_t>(i)] = i;
  EXPECT_THROW_KIND(find_extrema(mono), InsufficientCycles);
  EXPECT_THROW_KIND(find_extrema(std::vector<double>(20, 3.0)), InsufficientCycles);
}

TEST(Period, FromMinima) {
  EXPECT_EQ(period_from_extrema({{5, 20, 35, 50}, {}}).frames, 30);
  EXPECT_EQ(period_from_extrema({{10, 24}, {}}).frames, 28);
  EXPECT_EQ(period_from_extrema({{0, 10, 11, 21, 31}, {}}).frames, 20);
}

TEST(Period, ExactOnNoiseFreeSignal) {
  for (int T : {10, 20, 30, 40}) {
    for (int phase : {2, 5, 7}) {
      const auto s = triangle_signal(3 * T, T, phase);
      const auto p = period_from_extrema(find_extrema(smooth_signal(s, 3)));
      EXPECT_EQ(p.frames, T) << "T=" << T << " phase=" << phase;
    }
  }
}

TEST(Period, NoisyWithinTwoFrames) {
  Rng rng(2024);
  for (int T : {20, 30, 40}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto s = triangle_signal(3 * T, T, rng.uniform_int(2, T / 2 - 1));
      for (auto& v : s) v *= 1.0 + rng.uniform(-0.05, 0.05);
      const auto p = period_from_extrema(find_extrema(smooth_signal(s, 3)));
      EXPECT_NEAR(p.frames, T, 2) << "T=" << T;
    }
  }
}

TEST(Period, NoisyGeneratorSignalsWithinTwoFrames) {
  Rng noise(99);
  for (int T : {20, 30, 40}) {
    SynthConfig sc;
    sc.subjects = 5;
    sc.sequences_per_subject = 2;
    sc.cycle_length = T;
    sc.frames_per_sequence = 3 * T;
    sc.seed = 500 + static_cast<std::uint64_t>(T);
    for (const auto& seq : synth_generate(sc).sequences) {
      auto s = lower_half_signal(normalize_sequence(seq.sequence, NormalizationSpec{}));
      for (auto& v : s) v *= 1.0 + noise.uniform(-0.05, 0.05);
      EXPECT_NEAR(period_from_extrema(find_extrema(smooth_signal(s, 3))).frames, T, 2) << "T=" << T;
    }
  }
}

TEST(Period, ScaleInvariant) {
  auto s = triangle_signal(90, 30, 4);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += (i * 7919 % 13) * 0.3;
  const auto base = find_extrema(smooth_signal(s, 3));
  for (auto& v : s) v *= 3.7;
  const auto scaled = find_extrema(smooth_signal(s, 3));
  EXPECT_EQ(base.minima, scaled.minima);
  EXPECT_EQ(base.maxima, scaled.maxima);
}

TEST(Period, StaticSequenceFails) {
  std::vector<BinaryMask> frames(30, test::filled_rect(20, 30, 2, 5, 28, 12));
  EXPECT_THROW_KIND(estimate_gait_period(frames, 3), InsufficientCycles);
}

TEST(Period, SyntheticWalkerRecoversCycle) {
  SynthConfig sc;
  sc.subjects = 3;
  sc.sequences_per_subject = 2;
  sc.cycle_length = 30;
  sc.frames_per_sequence = 70;
  const auto data = synth_generate(sc);
  for (const auto& s : data.sequences) {
    const auto frames = normalize_sequence(s.sequence, sc.normalization);
    EXPECT_EQ(estimate_gait_period(frames, 3).frames, 30) << s.sequence.sequence_id;
  }
}

}  // namespace
}  // namespace gaitlab
