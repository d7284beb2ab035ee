#pragma once

// Deterministic synthetic walkers for desk-scale verification.
//
// Each subject is a parameterised stick figure (head, neck, tapered torso,
// two swinging arms, two legs) with subject-specific proportions. The foot
// spread follows a triangle wave of period T/2 (zero at mid-stance, maximal
// at double support) and the region between the legs is filled, so the
// lower-half foreground count grows linearly with the spread and has sharp
// minima exactly every T/2 frames. Figures translate across the canvas while
// walking; frames are binary.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "gaitlab/aesi.hpp"
#include "gaitlab/dataset.hpp"
#include "gaitlab/image_io.hpp"
#include "gaitlab/random.hpp"
#include "gaitlab/silhouette.hpp"

namespace gaitlab {

enum class Covariate { None, Coat, Bag };

inline const char* to_string(Covariate c) {
  switch (c) {
    case Covariate::None: return "none";
    case Covariate::Coat: return "coat";
    case Covariate::Bag: return "bag";
  }
  return "?";
}

inline Covariate covariate_from_string(const std::string& s) {
  if (s == "none") return Covariate::None;
  if (s == "coat") return Covariate::Coat;
  if (s == "bag") return Covariate::Bag;
  throw Error(ErrorKind::Parameter, "unknown covariate '" + s + "'");
}

inline PartSet default_affected_parts(Covariate c) {
  switch (c) {
    case Covariate::Coat: return {PartId::Chest, PartId::Pelvic};
    case Covariate::Bag: return {PartId::Pelvic};
    case Covariate::None: break;
  }
  return {};
}

struct SynthConfig {
  int subjects = 10;
  /// Clean sequences per subject (manifest role: gallery).
  int sequences_per_subject = 6;
  /// Extra sequences per subject with the covariate applied (role: probe).
  int probe_sequences_per_subject = 0;
  int frames_per_sequence = 60;
  int cycle_length = 30;
  Covariate covariate = Covariate::None;
  /// Parts the covariate distorts; empty means the covariate's default.
  PartSet affected_parts;
  std::uint64_t seed = 1;
  NormalizationSpec normalization;

  void validate() const {
    if (subjects < 1 || sequences_per_subject < 0 || probe_sequences_per_subject < 0 || frames_per_sequence < 1) {
      throw Error(ErrorKind::Parameter, "synthetic counts must be >= 1");
    }
    if (sequences_per_subject + probe_sequences_per_subject < 1) {
      throw Error(ErrorKind::Parameter, "synthetic dataset needs at least one sequence per subject");
    }
    if (cycle_length < 4) throw Error(ErrorKind::Parameter, "cycle_length must be >= 4");
    normalization.validate();
  }
  PartSet effective_affected_parts() const { return affected_parts.empty() ? default_affected_parts(covariate) : affected_parts; }
};

struct BodyShape {
  double height;         // pixels, head top to soles
  double head_radius;    // fractions below are of height
  double neck_length;
  double neck_width;
  double shoulder_width;
  double waist_width;
  double hip_level;      // from the top
  double leg_width;
  double foot_width;
  double stride;         // maximum foot spread
  double arm_width;
  double arm_swing;
  double lean;           // head offset relative to hips
};

inline BodyShape random_body(Rng& rng) {
  BodyShape b;
  b.height = rng.uniform(112.0, 140.0);
  b.head_radius = rng.uniform(0.055, 0.075);
  b.neck_length = rng.uniform(0.03, 0.06);
  b.neck_width = rng.uniform(0.04, 0.07);
  b.shoulder_width = rng.uniform(0.21, 0.25);
  b.waist_width = rng.uniform(0.16, 0.19);
  b.hip_level = rng.uniform(0.48, 0.56);
  b.leg_width = rng.uniform(0.05, 0.09);
  b.foot_width = rng.uniform(0.04, 0.07);
  b.stride = rng.uniform(0.26, 0.46);
  b.arm_width = rng.uniform(0.03, 0.05);
  b.arm_swing = rng.uniform(0.09, 0.12);
  b.lean = rng.uniform(-0.01, 0.01);
  return b;
}

/// Small per-sequence variation of the same subject.
inline BodyShape jitter_body(const BodyShape& b, Rng& rng) {
  BodyShape j = b;
  j.height *= rng.uniform(0.98, 1.02);
  j.stride *= rng.uniform(0.97, 1.03);
  j.arm_swing *= rng.uniform(0.95, 1.05);
  j.lean += rng.uniform(-0.004, 0.004);
  return j;
}

namespace detail {

struct Point {
  double x, y;
};

/// Fills the convex polygon (pixel centres inside or on the boundary).
inline void fill_convex(BinaryMask& mask, const std::vector<Point>& poly) {
  double x0 = poly[0].x, x1 = poly[0].x, y0 = poly[0].y, y1 = poly[0].y;
  for (const auto& p : poly) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  // orientation sign from the signed area
  double area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    area += a.x * b.y - b.x * a.y;
  }
  const double sign = area >= 0.0 ? 1.0 : -1.0;
  const int r0 = std::max(0, static_cast<int>(std::floor(y0)));
  const int r1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(y1)));
  const int c0 = std::max(0, static_cast<int>(std::floor(x0)));
  const int c1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(x1)));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const double px = c + 0.5, py = r + 0.5;
      bool inside = true;
      for (std::size_t i = 0; i < poly.size() && inside; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        inside = sign * ((b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x)) >= -1e-9;
      }
      if (inside) mask(r, c) = 1;
    }
  }
}

/// Quad from a to b, width wa at a and wb at b.
inline void fill_limb(BinaryMask& mask, Point a, Point b, double wa, double wb) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return;
  const double nx = -dy / len, ny = dx / len;
  fill_convex(mask, {{a.x + nx * wa / 2, a.y + ny * wa / 2},
                     {b.x + nx * wb / 2, b.y + ny * wb / 2},
                     {b.x - nx * wb / 2, b.y - ny * wb / 2},
                     {a.x - nx * wa / 2, a.y - ny * wa / 2}});
}

inline void fill_ellipse(BinaryMask& mask, Point centre, double rx, double ry) {
  const int r0 = std::max(0, static_cast<int>(std::floor(centre.y - ry)));
  const int r1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(centre.y + ry)));
  const int c0 = std::max(0, static_cast<int>(std::floor(centre.x - rx)));
  const int c1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(centre.x + rx)));
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) {
      const double u = (c + 0.5 - centre.x) / rx, v = (r + 0.5 - centre.y) / ry;
      if (u * u + v * v <= 1.0) mask(r, c) = 1;
    }
}

/// Horizontal dilation of rows [r0, r1) by a radius growing linearly from
/// d0 to d1 down the range.
inline void dilate_rows(BinaryMask& mask, int r0, int r1, double d0, double d1) {
  r0 = std::max(r0, 0);
  r1 = std::min(r1, mask.height());
  for (int r = r0; r < r1; ++r) {
    const double f = r1 - r0 > 1 ? static_cast<double>(r - r0) / (r1 - r0 - 1) : 0.0;
    const int radius = static_cast<int>(std::lround(d0 + (d1 - d0) * f));
    std::vector<std::uint8_t> src(mask.row(r).begin(), mask.row(r).end());
    auto dst = mask.row(r);
    for (int c = 0; c < mask.width(); ++c) {
      if (!src[static_cast<std::size_t>(c)]) continue;
      for (int k = std::max(0, c - radius); k <= std::min(mask.width() - 1, c + radius); ++k) dst[k] = 1;
    }
  }
}

}  // namespace detail

struct WalkParams {
  int cycle_length = 30;
  int phase = 0;
  double start_x = 40.0;
  double speed = 1.0;
  Covariate covariate = Covariate::None;
  PartSet affected;
  int canvas_width = 240;
  int canvas_height = 160;
  double ground = 152.0;
};

/// Triangle wave in [0, 1]: 0 at multiples of T/2, 1 halfway between.
inline double stride_phase(double t, int cycle_length) {
  const double half = cycle_length / 2.0;
  double f = std::fmod(t / half, 1.0);
  if (f < 0.0) f += 1.0;
  return 1.0 - std::abs(1.0 - 2.0 * f);
}

/// Frame t of a walking figure.
inline BinaryMask render_walker(const BodyShape& b, const WalkParams& w, int t) {
  using detail::Point;
  BinaryMask mask(w.canvas_width, w.canvas_height);
  const double h = b.height;
  const double top = w.ground - h;
  const double cx = w.start_x + w.speed * t;
  const double s = stride_phase(t + w.phase, w.cycle_length);
  const double spread = b.stride * h * s;

  const double head_r = b.head_radius * h;
  const double head_cx = cx + b.lean * h;
  const double neck_top = top + 2.0 * head_r - 1.0;
  const double shoulder_y = top + 2.0 * head_r + b.neck_length * h;
  const double hip_y = top + b.hip_level * h;

  detail::fill_ellipse(mask, {head_cx, top + head_r}, head_r, head_r);
  detail::fill_limb(mask, {head_cx, neck_top}, {cx + b.lean * h * 0.5, shoulder_y + 1.0}, b.neck_width * h, b.neck_width * h);
  const double sw = b.shoulder_width * h / 2, ww = b.waist_width * h / 2;
  const double shoulder_cx = cx + b.lean * h * 0.5;
  detail::fill_convex(mask, {{shoulder_cx - sw, shoulder_y}, {shoulder_cx + sw, shoulder_y}, {cx + ww, hip_y}, {cx - ww, hip_y}});

  // legs: feet spread symmetrically about the hips, soles on the ground,
  // the crotch region between them filled
  const double leg_w = b.leg_width * h;
  const double hip_half = ww * 0.45;
  for (double dir : {-1.0, 1.0}) {
    detail::fill_limb(mask, {cx + dir * hip_half, hip_y - 1.0}, {cx + dir * spread / 2, w.ground - 0.5}, leg_w, b.foot_width * h);
  }
  detail::fill_convex(mask, {{cx - hip_half, hip_y - 1.0}, {cx + hip_half, hip_y - 1.0},
                             {cx + spread / 2, w.ground - 0.5}, {cx - spread / 2, w.ground - 0.5}});
  // arms hang from the shoulders and swing with the legs
  const double arm_len = 0.34 * h;
  for (double dir : {-1.0, 1.0}) {
    const double swing = dir * b.arm_swing * h * s;
    const Point shoulder{shoulder_cx + dir * sw * 0.8, shoulder_y + 2.0};
    const double hx = shoulder.x + swing;
    const double hy = shoulder.y + std::sqrt(std::max(arm_len * arm_len - swing * swing, 1.0));
    detail::fill_limb(mask, shoulder, {hx, hy}, b.arm_width * h, b.arm_width * h * 0.8);
  }

  if (w.covariate == Covariate::Coat) {
    // A-line coat: the affected bands widen on both sides by 0.35 px per row
    // below the shoulder line.
    const auto bounds = part_boundaries(static_cast<int>(std::lround(h)));
    for (auto p : kAllParts) {
      if (!w.affected.contains(p)) continue;
      const auto i = static_cast<std::size_t>(p);
      const int r0 = static_cast<int>(std::lround(top)) + bounds[i];
      const int r1 = static_cast<int>(std::lround(top)) + bounds[i + 1];
      detail::dilate_rows(mask, r0, r1, std::max(0.0, 0.35 * (bounds[i] - 0.2 * h)), std::max(0.0, 0.35 * (bounds[i + 1] - 0.2 * h)));
    }
  } else if (w.covariate == Covariate::Bag) {
    const auto bounds = part_boundaries(static_cast<int>(std::lround(h)));
    for (auto p : kAllParts) {
      if (!w.affected.contains(p)) continue;
      const auto i = static_cast<std::size_t>(p);
      const double mid = top + 0.5 * (bounds[i] + bounds[i + 1]);
      detail::fill_ellipse(mask, {cx + ww + 0.06 * h, mid}, 0.07 * h, 0.09 * h);
    }
  }
  return mask;
}

struct SynthSequence {
  GaitSequence sequence;
  Role role = Role::Gallery;
};

struct SynthDataset {
  std::vector<SynthSequence> sequences;

  std::vector<ManifestEntry> manifest() const {
    std::vector<ManifestEntry> out;
    for (const auto& s : sequences) {
      out.push_back({s.sequence.subject_id, s.sequence.sequence_id, s.sequence.condition_tag, s.role,
                     static_cast<int>(s.sequence.frames.size())});
    }
    return out;
  }
};

inline std::string subject_name(int i) {
  std::string digits = std::to_string(i + 1);
  return "s" + std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits;
}

/// Two-digit, zero-padded sequence label such as "nm-01".
inline std::string sequence_name(const std::string& prefix, int i) {
  std::string digits = std::to_string(i + 1);
  return prefix + "-" + std::string(digits.size() < 2 ? 2 - digits.size() : 0, '0') + digits;
}

inline SynthDataset synth_generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng root(cfg.seed);
  SynthDataset data;
  const PartSet affected = cfg.effective_affected_parts();
  const int half = std::max(1, cfg.cycle_length / 2);
  for (int s = 0; s < cfg.subjects; ++s) {
    Rng subject_rng = root.fork(static_cast<std::uint64_t>(s));
    const BodyShape body = random_body(subject_rng);
    const int total = cfg.sequences_per_subject + cfg.probe_sequences_per_subject;
    for (int q = 0; q < total; ++q) {
      Rng seq_rng = subject_rng.fork(static_cast<std::uint64_t>(q));
      const bool probe = q >= cfg.sequences_per_subject;
      WalkParams walk;
      walk.cycle_length = cfg.cycle_length;
      // first mid-stance lands on an interior frame
      walk.phase = -seq_rng.uniform_int(2, std::max(2, half - 1));
      walk.speed = seq_rng.uniform(0.6, 1.1);
      walk.canvas_height = static_cast<int>(std::lround(std::max(150.0, cfg.normalization.target_height * 1.2)));
      walk.ground = walk.canvas_height - 6.0;
      const double travel = walk.speed * cfg.frames_per_sequence;
      walk.canvas_width = static_cast<int>(std::lround(travel + 140.0));
      walk.start_x = 60.0 + seq_rng.uniform(0.0, 5.0);
      const double scale = (walk.ground - 4.0) / 140.0;
      BodyShape shape = jitter_body(body, seq_rng);
      shape.height = std::min(shape.height * scale, walk.ground - 4.0);
      if (probe) {
        walk.covariate = cfg.covariate;
        walk.affected = affected;
      }

      SynthSequence out;
      out.role = probe ? Role::Probe : Role::Gallery;
      out.sequence.subject_id = subject_name(s);
      const char* condition = probe ? (cfg.covariate == Covariate::None ? "normal" : to_string(cfg.covariate)) : "normal";
      out.sequence.condition_tag = condition;
      out.sequence.sequence_id = probe ? sequence_name(cfg.covariate == Covariate::None ? "pr" : condition, q - cfg.sequences_per_subject)
                                       : sequence_name("nm", q);
      out.sequence.frames.reserve(static_cast<std::size_t>(cfg.frames_per_sequence));
      for (int t = 0; t < cfg.frames_per_sequence; ++t) out.sequence.frames.push_back(render_walker(shape, walk, t));
      data.sequences.push_back(std::move(out));
    }
  }
  return data;
}

/// Writes frames as <root>/<subject>/<sequence>/<0000>.png plus dataset.json.
inline void write_dataset(const std::filesystem::path& root, const SynthDataset& data) {
  namespace fs = std::filesystem;
  fs::create_directories(root);
  for (const auto& s : data.sequences) {
    const auto dir = root / s.sequence.subject_id / s.sequence.sequence_id;
    fs::create_directories(dir);
    for (std::size_t i = 0; i < s.sequence.frames.size(); ++i) {
      std::string digits = std::to_string(i);
      digits.insert(0, 4 - std::min<std::size_t>(4, digits.size()), '0');
      write_png(dir / (digits + ".png"), mask_to_gray(s.sequence.frames[i]));
    }
  }
  write_manifest(root, data.manifest());
}

}  // namespace gaitlab
