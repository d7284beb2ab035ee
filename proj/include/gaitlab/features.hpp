#pragma once

// SDOG: gradient magnitudes binned by unsigned orientation over a spatial
// pyramid (level v splits the image into 2^v x 2^v cells).
// MDP: row means of the half of the rows with the highest intensity variance.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "gaitlab/aesi.hpp"
#include "gaitlab/error.hpp"
#include "gaitlab/grid.hpp"

namespace gaitlab {

struct GradientField {
  RealGrid magnitude;
  /// Degrees in [0, 180).
  RealGrid orientation;
};

inline GradientField gradient_field(const RealGrid& image) {
  if (image.width() < 3 || image.height() < 3) throw Error(ErrorKind::DegenerateInput, "gradient needs at least 3x3 pixels");
  const int w = image.width();
  const int h = image.height();
  GradientField g{RealGrid(w, h), RealGrid(w, h)};
  for (int r = 0; r < h; ++r) {
    const int up = std::max(r - 1, 0);
    const int down = std::min(r + 1, h - 1);
    for (int c = 0; c < w; ++c) {
      const int left = std::max(c - 1, 0);
      const int right = std::min(c + 1, w - 1);
      const double gx = 0.5 * (image(r, right) - image(r, left));
      const double gy = 0.5 * (image(down, c) - image(up, c));
      g.magnitude(r, c) = std::sqrt(gx * gx + gy * gy);
      double phi = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (phi < 0.0) phi += 180.0;
      if (phi >= 180.0) phi -= 180.0;
      g.orientation(r, c) = phi;
    }
  }
  return g;
}

/// 20-degree bins at K = 9; phi = 180 folds into bin 0.
inline int orientation_bin(double phi_degrees, int bins) {
  const double width = 180.0 / bins;
  const int b = static_cast<int>(std::floor(phi_degrees / width));
  if (b >= bins) return phi_degrees >= 180.0 ? 0 : bins - 1;
  return std::max(b, 0);
}

enum class SdogNormalization { GlobalL2, None };

struct SdogConfig {
  int bins = 9;
  std::vector<int> levels = {0, 1, 2};
  SdogNormalization normalization = SdogNormalization::GlobalL2;
};

struct SdogVector {
  std::vector<double> values;
  int bins = 9;
  std::vector<int> levels;
};

inline std::size_t sdog_length(const SdogConfig& cfg) {
  std::size_t cells = 0;
  for (int v : cfg.levels) cells += std::size_t{1} << (2 * v);
  return cells * static_cast<std::size_t>(cfg.bins);
}

/// Cell boundary i of `parts` equal cells along a dimension: floor(dim*i/parts).
inline int cell_edge(int dim, int i, int parts) {
  return static_cast<int>(static_cast<long long>(dim) * i / parts);
}

inline SdogVector sdog(const RealGrid& image, const SdogConfig& cfg = {}) {
  if (cfg.bins < 1) throw Error(ErrorKind::Parameter, "SDOG needs at least one orientation bin");
  if (cfg.levels.empty()) throw Error(ErrorKind::Parameter, "SDOG needs at least one decomposition level");
  for (int v : cfg.levels)
    if (v < 0 || v > 8) throw Error(ErrorKind::Parameter, "SDOG level out of range");

  const auto grad = gradient_field(image);
  SdogVector out{std::vector<double>(sdog_length(cfg), 0.0), cfg.bins, cfg.levels};
  std::size_t offset = 0;
  for (int v : cfg.levels) {
    const int split = 1 << v;
    for (int cy = 0; cy < split; ++cy) {
      const int r0 = cell_edge(image.height(), cy, split);
      const int r1 = cell_edge(image.height(), cy + 1, split);
      for (int cx = 0; cx < split; ++cx, offset += static_cast<std::size_t>(cfg.bins)) {
        const int c0 = cell_edge(image.width(), cx, split);
        const int c1 = cell_edge(image.width(), cx + 1, split);
        if (r1 - r0 < 3 || c1 - c0 < 3) continue;
        for (int r = r0; r < r1; ++r) {
          for (int c = c0; c < c1; ++c) {
            const double mag = grad.magnitude(r, c);
            if (mag == 0.0) continue;
            out.values[offset + static_cast<std::size_t>(orientation_bin(grad.orientation(r, c), cfg.bins))] += mag;
          }
        }
      }
    }
  }
  if (cfg.normalization == SdogNormalization::GlobalL2) {
    const double norm = std::sqrt(std::inner_product(out.values.begin(), out.values.end(), out.values.begin(), 0.0));
    if (norm >= 1e-12)
      for (auto& x : out.values) x /= norm;
  }
  return out;
}

/// floor(m/2) rows with the largest population variance, ascending. Ties
/// prefer the smaller row index.
inline std::vector<int> select_rows(const RealGrid& image) {
  if (image.height() < 2) throw Error(ErrorKind::DegenerateInput, "row selection needs at least 2 rows");
  const int m = image.height();
  std::vector<double> variance(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    const auto row = image.row(r);
    const double mean = std::accumulate(row.begin(), row.end(), 0.0) / row.size();
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    variance[static_cast<std::size_t>(r)] = var / row.size();
  }
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return variance[static_cast<std::size_t>(a)] > variance[static_cast<std::size_t>(b)];
  });
  order.resize(static_cast<std::size_t>(m / 2));
  std::sort(order.begin(), order.end());
  return order;
}

struct MdpVector {
  std::vector<double> values;
  std::vector<int> row_indices;
};

inline MdpVector mdp(const RealGrid& image, std::span<const int> rows) {
  MdpVector out;
  out.row_indices.assign(rows.begin(), rows.end());
  for (int r : rows) {
    if (r < 0 || r >= image.height()) throw Error(ErrorKind::Parameter, "MDP row index out of range");
    const auto row = image.row(r);
    out.values.push_back(std::accumulate(row.begin(), row.end(), 0.0) / row.size());
  }
  return out;
}

struct FusedFeature {
  std::vector<double> values;
  PartSet combination;
};

inline FusedFeature fuse(const SdogVector& s, const MdpVector& m, PartSet set) {
  FusedFeature f{s.values, set};
  f.values.insert(f.values.end(), m.values.begin(), m.values.end());
  return f;
}

/// SDOG || MDP of one sub-AESI.
inline FusedFeature extract_features(const SubAesi& sub, const SdogConfig& cfg = {}) {
  const auto rows = select_rows(sub.data);
  return fuse(sdog(sub.data, cfg), mdp(sub.data, rows), sub.parts);
}

}  // namespace gaitlab
