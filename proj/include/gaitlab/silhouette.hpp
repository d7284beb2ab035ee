#pragma once

// Silhouette primitives: texture entropy, tight bounding boxes and
// height normalization with horizontal-centroid alignment.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gaitlab/error.hpp"
#include "gaitlab/grid.hpp"

namespace gaitlab {

/// Inclusive pixel rectangle.
struct BoundingBox {
  int top = 0;
  int bottom = 0;
  int left = 0;
  int right = 0;

  int height() const noexcept { return bottom - top + 1; }
  int width() const noexcept { return right - left + 1; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct NormalizationSpec {
  int target_height = 128;
  int target_width = 88;

  void validate() const {
    if (target_height <= 0 || target_width <= 0) {
      throw Error(ErrorKind::Parameter, "normalization size must be positive");
    }
  }
  friend bool operator==(const NormalizationSpec&, const NormalizationSpec&) = default;
};

struct GaitSequence {
  std::vector<BinaryMask> frames;
  std::string subject_id;
  std::string condition_tag;
  std::string sequence_id;

  void validate() const {
    if (frames.empty()) throw Error(ErrorKind::DegenerateInput, "sequence '" + sequence_id + "' has no frames");
    for (const auto& f : frames) {
      if (f.width() != frames.front().width() || f.height() != frames.front().height()) {
        throw Error(ErrorKind::Dimension, "frames of sequence '" + sequence_id + "' differ in size");
      }
    }
  }
};

struct PixelOffset {
  int dr = 0;
  int dc = 1;
};

/// Texture entropy of a gray patch with values in [0, 1]:
///   E = sum_ij F(i,j) log F(i,j),  F = M / sum(M)
/// where M is the co-occurrence matrix of quantized levels for pixel pairs
/// (p, p + offset). The sum is taken as printed, without a leading minus,
/// so E <= 0. Values are quantized as min(levels-1, floor(v * levels)).
inline double cooccurrence_entropy(const RealGrid& patch, int quantization_levels = 8, PixelOffset offset = {}) {
  if (patch.width() < 2 || patch.height() < 2) {
    throw Error(ErrorKind::DegenerateInput, "entropy patch must be at least 2x2");
  }
  if (quantization_levels < 2) throw Error(ErrorKind::Parameter, "quantization_levels must be >= 2");

  auto quantize = [&](double v) {
    const int q = static_cast<int>(std::floor(std::clamp(v, 0.0, 1.0) * quantization_levels));
    return std::min(q, quantization_levels - 1);
  };

  const auto levels = static_cast<std::size_t>(quantization_levels);
  std::vector<double> cooc(levels * levels, 0.0);
  double total = 0.0;
  for (int r = 0; r < patch.height(); ++r) {
    const int r2 = r + offset.dr;
    if (r2 < 0 || r2 >= patch.height()) continue;
    for (int c = 0; c < patch.width(); ++c) {
      const int c2 = c + offset.dc;
      if (c2 < 0 || c2 >= patch.width()) continue;
      cooc[static_cast<std::size_t>(quantize(patch(r, c))) * levels + quantize(patch(r2, c2))] += 1.0;
      total += 1.0;
    }
  }
  if (total == 0.0) throw Error(ErrorKind::DegenerateInput, "co-occurrence matrix is empty for this offset");

  double entropy = 0.0;
  for (double count : cooc) {
    if (count == 0.0) continue;
    const double f = count / total;
    entropy += f * std::log(f);
  }
  return entropy;
}

inline BoundingBox extract_bounding_box(const BinaryMask& mask) {
  BoundingBox box{mask.height(), -1, mask.width(), -1};
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask(r, c)) continue;
      box.top = std::min(box.top, r);
      box.bottom = std::max(box.bottom, r);
      box.left = std::min(box.left, c);
      box.right = std::max(box.right, c);
    }
  }
  if (box.bottom < 0) throw Error(ErrorKind::EmptySilhouette, "mask has no foreground pixels");
  return box;
}

/// Mean column index of the foreground pixels; -1 when there are none.
inline double horizontal_centroid(const BinaryMask& mask) {
  double sum = 0.0;
  long long count = 0;
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c)
      if (mask(r, c)) {
        sum += c;
        ++count;
      }
  return count ? sum / static_cast<double>(count) : -1.0;
}

/// Crops `box`, scales it to the target height with nearest-neighbour
/// sampling (aspect ratio kept) and places it so that the horizontal
/// foreground centroid lands on column (target_width - 1) / 2. Columns that
/// fall outside the target width are dropped.
inline BinaryMask normalize_silhouette(const BinaryMask& mask, const BoundingBox& box, const NormalizationSpec& spec) {
  spec.validate();
  if (box.bottom < box.top || box.right < box.left) throw Error(ErrorKind::DegenerateInput, "bounding box has zero area");
  if (box.top < 0 || box.left < 0 || box.bottom >= mask.height() || box.right >= mask.width()) {
    throw Error(ErrorKind::Parameter, "bounding box outside mask");
  }

  const int src_h = box.height();
  const int src_w = box.width();
  const double scale = static_cast<double>(spec.target_height) / src_h;
  const int scaled_w = std::max(1, static_cast<int>(std::floor(src_w * scale + 0.5)));

  BinaryMask scaled(scaled_w, spec.target_height);
  for (int r = 0; r < spec.target_height; ++r) {
    const int sr = std::min(src_h - 1, static_cast<int>((r + 0.5) / scale));
    for (int c = 0; c < scaled_w; ++c) {
      const int sc = std::min(src_w - 1, static_cast<int>((c + 0.5) / scale));
      scaled(r, c) = mask(box.top + sr, box.left + sc);
    }
  }

  BinaryMask out(spec.target_width, spec.target_height);
  const double centroid = horizontal_centroid(scaled);
  if (centroid < 0.0) return out;
  const int shift = static_cast<int>(std::floor((spec.target_width - 1) / 2.0 - centroid + 0.5));
  for (int r = 0; r < spec.target_height; ++r) {
    for (int c = 0; c < scaled_w; ++c) {
      const int dc = c + shift;
      if (dc >= 0 && dc < spec.target_width) out(r, dc) = scaled(r, c);
    }
  }
  return out;
}

/// Bounding box + normalization for every frame; frames without foreground
/// are skipped. Returns the normalized frames in order.
inline std::vector<BinaryMask> normalize_sequence(const GaitSequence& seq, const NormalizationSpec& spec) {
  std::vector<BinaryMask> out;
  out.reserve(seq.frames.size());
  for (const auto& frame : seq.frames) {
    BoundingBox box;
    try {
      box = extract_bounding_box(frame);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::EmptySilhouette) continue;
      throw;
    }
    out.push_back(normalize_silhouette(frame, box, spec));
  }
  if (out.empty()) throw Error(ErrorKind::EmptySilhouette, "sequence '" + seq.sequence_id + "' has no foreground in any frame");
  return out;
}

}  // namespace gaitlab
