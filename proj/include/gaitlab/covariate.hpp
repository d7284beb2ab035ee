#pragma once

// Gallery moment database and per-part covariate screening.
//
// A probe part is declared infected when its mean moment distance to the
// gallery reaches mu + k*sigma, where mu and sigma are the mean and sample
// standard deviation of all ordered pairwise distances within the gallery
// for that part.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gaitlab/aesi.hpp"
#include "gaitlab/error.hpp"
#include "gaitlab/zernike.hpp"

namespace gaitlab {

enum class MomentMode {
  Complex,    ///< |Z - Z'| on the complex moments
  Magnitude,  ///< ||Z| - |Z'|| on the rotation invariants
};

inline const char* to_string(MomentMode mode) { return mode == MomentMode::Complex ? "complex" : "magnitude"; }

inline MomentMode moment_mode_from_string(const std::string& s) {
  if (s == "complex") return MomentMode::Complex;
  if (s == "magnitude") return MomentMode::Magnitude;
  throw Error(ErrorKind::Parameter, "unknown moment mode '" + s + "'");
}

inline constexpr double kSigmaFloor = 1e-9;

/// sqrt(sum_k |a_k - b_k|^2) over matching indices.
inline double moment_distance(const ZernikeMomentSet& a, const ZernikeMomentSet& b, MomentMode mode = MomentMode::Complex) {
  if (a.indices != b.indices) throw Error(ErrorKind::Parameter, "moment index sets differ");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double d = mode == MomentMode::Complex ? std::abs(a.values[k] - b.values[k])
                                                 : std::abs(a.values[k]) - std::abs(b.values[k]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

struct PartStats {
  double mu = 0.0;
  double sigma = kSigmaFloor;
  friend bool operator==(const PartStats&, const PartStats&) = default;
};

struct MomentEntry {
  std::string sequence_id;
  ZernikeMomentSet moments;
  friend bool operator==(const MomentEntry&, const MomentEntry&) = default;
};

struct GalleryMomentDb {
  std::vector<ZernikeIndex> index_set = default_zernike_indices();
  MomentMode mode = MomentMode::Complex;
  std::array<std::vector<MomentEntry>, 4> entries;
  std::optional<std::array<PartStats, 4>> stats;

  const std::vector<MomentEntry>& part_entries(PartId p) const { return entries[static_cast<std::size_t>(p)]; }
  bool finalized() const noexcept { return stats.has_value(); }
  const PartStats& part_stats(PartId p) const {
    if (!stats) throw Error(ErrorKind::Parameter, "moment database statistics not finalized");
    return (*stats)[static_cast<std::size_t>(p)];
  }

  friend bool operator==(const GalleryMomentDb&, const GalleryMomentDb&) = default;
};

/// Per-part moments of one sequence.
using PartMoments = std::array<ZernikeMomentSet, 4>;

inline PartMoments part_moments(const PartAesiSet& parts, const std::vector<ZernikeIndex>& indices) {
  PartMoments out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = compute_moments(parts[i].data, indices);
  return out;
}

/// Collects precomputed per-part moments; statistics stay unset.
inline GalleryMomentDb build_moment_db(const std::vector<std::pair<std::string, PartMoments>>& gallery,
                                       std::vector<ZernikeIndex> index_set = default_zernike_indices(),
                                       MomentMode mode = MomentMode::Complex) {
  if (gallery.size() < 2) throw Error(ErrorKind::InsufficientGallery, "need at least 2 gallery sequences");
  GalleryMomentDb db;
  db.index_set = std::move(index_set);
  db.mode = mode;
  std::set<std::string> seen;
  for (const auto& [id, moments] : gallery) {
    if (!seen.insert(id).second) throw Error(ErrorKind::DuplicateId, "gallery sequence '" + id + "' appears twice");
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& m = moments[i];
      if (m.indices != db.index_set) throw Error(ErrorKind::Parameter, "moment index set differs from the database");
      const auto& first = db.entries[i].empty() ? m : db.entries[i].front().moments;
      if (m.region_width != first.region_width || m.region_height != first.region_height) {
        throw Error(ErrorKind::Dimension, "part '" + std::string(to_string(kAllParts[i])) + "' of '" + id +
                                              "' differs in size from the rest of the gallery");
      }
      db.entries[i].push_back({id, m});
    }
  }
  return db;
}

/// Computes moments from part slices, then collects them.
inline GalleryMomentDb build_moment_db(const std::vector<std::pair<std::string, PartAesiSet>>& gallery,
                                       std::vector<ZernikeIndex> index_set = default_zernike_indices(),
                                       MomentMode mode = MomentMode::Complex) {
  std::vector<std::pair<std::string, PartMoments>> moments;
  moments.reserve(gallery.size());
  for (std::size_t g = 0; g < gallery.size(); ++g) {
    const auto& parts = gallery[g].second;
    if (g > 0) {
      for (std::size_t i = 0; i < 4; ++i) {
        if (parts[i].data.width() != gallery[0].second[i].data.width() ||
            parts[i].data.height() != gallery[0].second[i].data.height()) {
          throw Error(ErrorKind::Dimension, "part sizes of '" + gallery[g].first + "' differ from the gallery");
        }
      }
    }
    moments.emplace_back(gallery[g].first, part_moments(parts, index_set));
  }
  return build_moment_db(moments, std::move(index_set), mode);
}

/// mu = mean and sigma = sample standard deviation (floored) of the
/// distances over all ordered gallery pairs j != k, per part.
inline GalleryMomentDb compute_part_stats(GalleryMomentDb db) {
  std::array<PartStats, 4> stats;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& entries = db.entries[i];
    const std::size_t n = entries.size();
    if (n < 2) throw Error(ErrorKind::InsufficientGallery, "need at least 2 gallery entries per part");
    std::vector<double> distances;
    distances.reserve(n * (n - 1));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (j != k) distances.push_back(moment_distance(entries[j].moments, entries[k].moments, db.mode));
    double mean = 0.0;
    for (double d : distances) mean += d;
    mean /= static_cast<double>(distances.size());
    double var = 0.0;
    for (double d : distances) var += (d - mean) * (d - mean);
    var /= static_cast<double>(distances.size() - 1);
    stats[i] = {mean, std::max(std::sqrt(var), kSigmaFloor)};
  }
  db.stats = stats;
  return db;
}

/// D = (1/N) sum_k dist(gallery_k, probe).
inline double mean_distance(const ZernikeMomentSet& probe, const GalleryMomentDb& db, PartId part) {
  if (probe.indices != db.index_set) throw Error(ErrorKind::Parameter, "probe moment index set differs from the database");
  const auto& entries = db.part_entries(part);
  if (entries.empty()) throw Error(ErrorKind::InsufficientGallery, "no gallery entries for part");
  double sum = 0.0;
  for (const auto& e : entries) sum += moment_distance(e.moments, probe, db.mode);
  return sum / static_cast<double>(entries.size());
}

struct PartScreen {
  double distance = 0.0;
  double threshold = 0.0;
  bool infected = false;
};

struct ScreenResult {
  std::array<PartScreen, 4> parts;
  PartSet clean_set = PartSet::full();
  /// Every part was infected; clean_set fell back to the full set.
  bool all_infected = false;

  PartSet infected_set() const {
    PartSet s;
    for (auto p : kAllParts)
      if (parts[static_cast<std::size_t>(p)].infected) s = s.with(p);
    return s;
  }
};

inline ScreenResult screen(const PartMoments& probe, const GalleryMomentDb& db, double k_sigma = 3.0) {
  ScreenResult result;
  PartSet clean;
  for (auto p : kAllParts) {
    const auto i = static_cast<std::size_t>(p);
    const auto& st = db.part_stats(p);
    auto& ps = result.parts[i];
    ps.distance = mean_distance(probe[i], db, p);
    ps.threshold = st.mu + k_sigma * st.sigma;
    ps.infected = ps.distance >= ps.threshold;
    if (!ps.infected) clean = clean.with(p);
  }
  result.all_infected = clean.empty();
  result.clean_set = clean.empty() ? PartSet::full() : clean;
  return result;
}

}  // namespace gaitlab
