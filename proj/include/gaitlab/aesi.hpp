#pragma once

// Average Energy Silhouette Image, anatomical part slices and their
// gap-free recombinations.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaitlab/error.hpp"
#include "gaitlab/gaitcycle.hpp"
#include "gaitlab/grid.hpp"

namespace gaitlab {

struct Aesi {
  RealGrid energy;
  int period_frames = 0;
  int source_frame_count = 0;
  /// Set when the averaging window could not cover one detected period.
  bool period_fallback = false;

  int width() const noexcept { return energy.width(); }
  int height() const noexcept { return energy.height(); }
};

enum class PartId : int { Neck = 0, Chest = 1, Pelvic = 2, Limb = 3 };

inline constexpr std::array<PartId, 4> kAllParts = {PartId::Neck, PartId::Chest, PartId::Pelvic, PartId::Limb};

inline const char* to_string(PartId part) {
  switch (part) {
    case PartId::Neck: return "Neck";
    case PartId::Chest: return "Chest";
    case PartId::Pelvic: return "Pelvic";
    case PartId::Limb: return "Limb";
  }
  return "?";
}

inline PartId part_from_string(const std::string& name) {
  for (auto p : kAllParts)
    if (name == to_string(p)) return p;
  throw Error(ErrorKind::Parameter, "unknown body part '" + name + "'");
}

/// 4-bit membership set over the parts; bit i is PartId i.
class PartSet {
 public:
  constexpr PartSet() = default;
  constexpr explicit PartSet(std::uint8_t bits) : bits_(bits & 0xF) {}
  constexpr PartSet(std::initializer_list<PartId> parts) {
    for (auto p : parts) bits_ |= bit(p);
  }

  static constexpr PartSet full() { return PartSet(std::uint8_t{0xF}); }

  constexpr std::uint8_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr bool contains(PartId p) const noexcept { return bits_ & bit(p); }
  constexpr int count() const noexcept { return std::popcount(static_cast<unsigned>(bits_)); }
  constexpr PartSet with(PartId p) const noexcept { return PartSet(static_cast<std::uint8_t>(bits_ | bit(p))); }
  constexpr PartSet without(PartId p) const noexcept { return PartSet(static_cast<std::uint8_t>(bits_ & ~bit(p))); }
  constexpr PartSet complement() const noexcept { return PartSet(static_cast<std::uint8_t>(~bits_ & 0xF)); }

  std::string to_string() const {
    std::string s = "{";
    for (auto p : kAllParts) {
      if (!contains(p)) continue;
      if (s.size() > 1) s += ',';
      s += gaitlab::to_string(p);
    }
    return s + "}";
  }

  friend constexpr bool operator==(PartSet, PartSet) = default;
  friend constexpr auto operator<=>(PartSet a, PartSet b) { return a.bits_ <=> b.bits_; }

 private:
  static constexpr std::uint8_t bit(PartId p) { return static_cast<std::uint8_t>(1u << static_cast<int>(p)); }
  std::uint8_t bits_ = 0;
};

struct PartAesi {
  PartId part = PartId::Neck;
  int row_begin = 0;
  int row_end = 0;
  RealGrid data;
};

using PartAesiSet = std::array<PartAesi, 4>;

struct SubAesi {
  PartSet parts;
  RealGrid data;
};

/// Which frames of a sequence to average: the first full period beginning
/// at the first mid-stance. A window running past the end is shifted back;
/// a sequence shorter than one period is used whole (flagged).
struct AveragingWindow {
  int begin = 0;
  int end = 0;
  bool fallback = false;
};

inline AveragingWindow averaging_window(int frame_count, const GaitPeriod& period) {
  if (frame_count <= 0) throw Error(ErrorKind::DegenerateInput, "no frames to average");
  if (period.frames >= frame_count || period.frames < 1) return {0, frame_count, period.frames > frame_count};
  int begin = period.minima_indices.empty() ? 0 : period.minima_indices.front();
  if (begin + period.frames > frame_count) begin = frame_count - period.frames;
  return {begin, begin + period.frames, false};
}

/// AESI(x,y) = (1/n) sum_t |S_t(x,y)|^2 over the given binary frames.
inline Aesi build_aesi(std::span<const BinaryMask> frames) {
  if (frames.empty()) throw Error(ErrorKind::DegenerateInput, "cannot build an AESI from zero frames");
  const int w = frames.front().width();
  const int h = frames.front().height();
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(w) * h, 0);
  for (const auto& f : frames) {
    if (f.width() != w || f.height() != h) throw Error(ErrorKind::Dimension, "AESI frames differ in size");
    auto px = f.values();
    for (std::size_t i = 0; i < px.size(); ++i) counts[i] += px[i] * px[i];
  }
  Aesi aesi;
  aesi.energy = RealGrid(w, h);
  auto dst = aesi.energy.values();
  const double n = static_cast<double>(frames.size());
  for (std::size_t i = 0; i < counts.size(); ++i) dst[i] = counts[i] / n;
  aesi.period_frames = static_cast<int>(frames.size());
  aesi.source_frame_count = static_cast<int>(frames.size());
  return aesi;
}

/// Averages the frames of the first detected gait period.
inline Aesi build_aesi(std::span<const BinaryMask> frames, const GaitPeriod& period) {
  const auto window = averaging_window(static_cast<int>(frames.size()), period);
  Aesi aesi = build_aesi(frames.subspan(static_cast<std::size_t>(window.begin),
                                        static_cast<std::size_t>(window.end - window.begin)));
  aesi.period_frames = period.frames;
  aesi.source_frame_count = static_cast<int>(frames.size());
  aesi.period_fallback = window.fallback;
  return aesi;
}

/// Row boundaries measured from the top: round-half-up of 0.20H, 0.45H, 0.70H.
inline std::array<int, 5> part_boundaries(int height) {
  auto at = [height](int percent) { return (percent * height + 50) / 100; };
  return {0, at(20), at(45), at(70), height};
}

inline PartAesiSet segment_parts(const RealGrid& image) {
  const auto b = part_boundaries(image.height());
  for (int i = 0; i < 4; ++i) {
    if (b[i + 1] <= b[i]) throw Error(ErrorKind::DegenerateInput, "image too short for four non-empty body parts");
  }
  PartAesiSet parts;
  for (int i = 0; i < 4; ++i) {
    parts[i] = PartAesi{kAllParts[i], b[i], b[i + 1], image.rows(b[i], b[i + 1])};
  }
  return parts;
}

inline PartAesiSet segment_parts(const Aesi& aesi) { return segment_parts(aesi.energy); }

/// All 15 non-empty part sets in ascending bitmask order.
inline std::vector<PartSet> enumerate_part_sets() {
  std::vector<PartSet> sets;
  for (std::uint8_t bits = 1; bits < 16; ++bits) sets.emplace_back(bits);
  return sets;
}

/// Vertical concatenation of the member parts in anatomical order.
inline SubAesi assemble_sub_aesi(const PartAesiSet& parts, PartSet set) {
  if (set.empty()) throw Error(ErrorKind::Parameter, "cannot assemble a sub-AESI from an empty part set");
  const int width = parts.front().data.width();
  std::vector<double> data;
  int height = 0;
  for (auto id : kAllParts) {
    if (!set.contains(id)) continue;
    const auto& part = parts[static_cast<std::size_t>(id)];
    if (part.part != id) throw Error(ErrorKind::Parameter, "part slices are not in anatomical order");
    if (part.data.width() != width) throw Error(ErrorKind::Dimension, "part widths differ");
    data.insert(data.end(), part.data.data().begin(), part.data.data().end());
    height += part.data.height();
  }
  return SubAesi{set, RealGrid(width, height, std::move(data))};
}

/// Energy image rendered as 8-bit gray, value = round(255 * energy).
inline Grid<std::uint8_t> aesi_to_gray(const RealGrid& energy) {
  Grid<std::uint8_t> out(energy.width(), energy.height());
  auto src = energy.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<std::uint8_t>(std::floor(255.0 * std::clamp(src[i], 0.0, 1.0) + 0.5));
  }
  return out;
}

}  // namespace gaitlab
