#pragma once

// Gait period from the lower-half foreground count: mid-stances are local
// minima of the count, double-supports local maxima.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "gaitlab/error.hpp"
#include "gaitlab/grid.hpp"

namespace gaitlab {

using PixelCountSignal = std::vector<double>;

struct GaitPeriod {
  int frames = 0;
  std::vector<int> minima_indices;
  std::vector<int> maxima_indices;
};

struct Extrema {
  std::vector<int> minima;
  std::vector<int> maxima;
};

/// Foreground pixels in rows [floor(H/2), H).
inline double lower_half_count(const BinaryMask& mask) {
  double count = 0.0;
  for (int r = mask.height() / 2; r < mask.height(); ++r)
    for (auto v : mask.row(r)) count += v;
  return count;
}

inline PixelCountSignal lower_half_signal(std::span<const BinaryMask> frames) {
  PixelCountSignal signal;
  signal.reserve(frames.size());
  for (const auto& f : frames) signal.push_back(lower_half_count(f));
  return signal;
}

/// Centered moving average; near the borders the window is cut to the
/// samples that exist.
inline PixelCountSignal smooth_signal(std::span<const double> signal, int window) {
  if (window < 1 || window % 2 == 0) throw Error(ErrorKind::Parameter, "smoothing window must be odd and >= 1");
  if (static_cast<std::size_t>(window) > signal.size()) {
    throw Error(ErrorKind::Parameter, "smoothing window larger than the signal");
  }
  const int n = static_cast<int>(signal.size());
  const int half = window / 2;
  PixelCountSignal out(signal.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) sum += signal[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(i)] = sum / (hi - lo + 1);
  }
  return out;
}

/// Strict interior extrema. A plateau of equal values bounded on both sides
/// by larger (smaller) values is one minimum (maximum) reported at its
/// center index.
inline Extrema find_extrema(std::span<const double> signal) {
  if (signal.size() < 3) throw Error(ErrorKind::InsufficientCycles, "signal shorter than 3 samples");
  Extrema ext;
  const std::size_t n = signal.size();
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start;
    while (end + 1 < n && signal[end + 1] == signal[start]) ++end;
    if (start > 0 && end + 1 < n) {
      const double v = signal[start];
      const double left = signal[start - 1];
      const double right = signal[end + 1];
      const int center = static_cast<int>((start + end) / 2);
      if (left > v && right > v) ext.minima.push_back(center);
      else if (left < v && right < v) ext.maxima.push_back(center);
    }
    start = end + 1;
  }
  if (ext.minima.size() < 2) throw Error(ErrorKind::InsufficientCycles, "fewer than 2 local minima in the count signal");
  return ext;
}

/// One full cycle spans two mid-stances (one per leg), so the period is
/// twice the median spacing of consecutive minima, rounded to whole frames.
inline GaitPeriod period_from_extrema(Extrema ext) {
  std::vector<double> gaps;
  for (std::size_t i = 1; i < ext.minima.size(); ++i) gaps.push_back(ext.minima[i] - ext.minima[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  const std::size_t mid = gaps.size() / 2;
  const double median = gaps.size() % 2 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
  GaitPeriod period;
  period.frames = std::max(2, static_cast<int>(std::floor(2.0 * median + 0.5)));
  period.minima_indices = std::move(ext.minima);
  period.maxima_indices = std::move(ext.maxima);
  return period;
}

/// Frames are expected to be size-normalized.
inline GaitPeriod estimate_gait_period(std::span<const BinaryMask> frames, int smoothing_window = 3) {
  const auto raw = lower_half_signal(frames);
  if (raw.size() < 3) throw Error(ErrorKind::InsufficientCycles, "sequence shorter than 3 frames");
  const auto smoothed = smooth_signal(raw, smoothing_window);
  return period_from_extrema(find_extrema(smoothed));
}

}  // namespace gaitlab
