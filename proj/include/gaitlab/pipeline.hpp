#pragma once

// Enrollment and identification.
//
// Every sequence is reduced once to a SequenceTemplate (AESI, part slices,
// part moments and the fused features of all 15 part combinations).
// Enrollment finalizes the gallery moment database and trains one OvR model
// per combination. Identification screens the probe's parts against the
// database and classifies the clean sub-AESI with the matching model.

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaitlab/aesi.hpp"
#include "gaitlab/classifier.hpp"
#include "gaitlab/config.hpp"
#include "gaitlab/covariate.hpp"
#include "gaitlab/dataset.hpp"
#include "gaitlab/features.hpp"
#include "gaitlab/gaitcycle.hpp"
#include "gaitlab/parallel.hpp"
#include "gaitlab/silhouette.hpp"
#include "gaitlab/zernike.hpp"

namespace gaitlab {

struct SequenceTemplate {
  std::string subject;
  std::string sequence;
  std::string condition;
  std::optional<Role> role;
  Aesi aesi;
  PartAesiSet parts;
  PartMoments moments;
  /// Indexed by combination bitmask - 1.
  std::array<FusedFeature, 15> features;

  const FusedFeature& feature(PartSet set) const { return features.at(static_cast<std::size_t>(set.bits()) - 1); }
};

/// Zernike bases for the four part sizes implied by the normalization.
class MomentEngine {
 public:
  explicit MomentEngine(const PipelineConfig& cfg) : indices_(cfg.zernike_indices) {
    const auto b = part_boundaries(cfg.normalization.target_height);
    for (std::size_t i = 0; i < 4; ++i) {
      bases_[i] = std::make_shared<const ZernikeBasis>(cfg.normalization.target_width, b[i + 1] - b[i], indices_);
    }
  }

  PartMoments moments(const PartAesiSet& parts) const {
    PartMoments out;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& basis = *bases_[i];
      out[i] = parts[i].data.width() == basis.width() && parts[i].data.height() == basis.height()
                   ? basis.moments(parts[i].data)
                   : compute_moments(parts[i].data, indices_);
    }
    return out;
  }

 private:
  std::vector<ZernikeIndex> indices_;
  std::array<std::shared_ptr<const ZernikeBasis>, 4> bases_;
};

/// Normalize, estimate the period (whole sequence when no period is
/// detectable, flagged on the AESI) and build the AESI.
inline Aesi sequence_aesi(const GaitSequence& seq, const PipelineConfig& cfg) {
  const auto frames = normalize_sequence(seq, cfg.normalization);
  try {
    return build_aesi(frames, estimate_gait_period(frames, cfg.smoothing_window));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientCycles && e.kind() != ErrorKind::Parameter) throw;
  }
  Aesi aesi = build_aesi(frames);
  aesi.period_fallback = true;
  return aesi;
}

inline SequenceTemplate make_template(const GaitSequence& seq, const PipelineConfig& cfg, const MomentEngine& engine,
                                      std::optional<Role> role = std::nullopt) {
  SequenceTemplate t;
  t.subject = seq.subject_id;
  t.sequence = seq.sequence_id;
  t.condition = seq.condition_tag;
  t.role = role;
  t.aesi = sequence_aesi(seq, cfg);
  t.parts = segment_parts(t.aesi);
  t.moments = engine.moments(t.parts);
  for (auto set : enumerate_part_sets()) {
    t.features[static_cast<std::size_t>(set.bits()) - 1] = extract_features(assemble_sub_aesi(t.parts, set), cfg.sdog);
  }
  return t;
}

inline SequenceTemplate make_template(const GaitSequence& seq, const PipelineConfig& cfg) {
  return make_template(seq, cfg, MomentEngine(cfg));
}

/// Loads and reduces every manifest entry; output order follows the manifest.
inline std::vector<SequenceTemplate> load_templates(const std::filesystem::path& root,
                                                    const std::vector<ManifestEntry>& manifest,
                                                    const PipelineConfig& cfg, unsigned threads) {
  const MomentEngine engine(cfg);
  std::vector<SequenceTemplate> out(manifest.size());
  parallel_for(manifest.size(), threads, [&](std::size_t i) {
    const auto& e = manifest[i];
    out[i] = make_template(load_sequence(sequence_directory(root, e), e), cfg, engine, e.role);
  });
  return out;
}

inline GalleryMomentDb gallery_moment_db(std::span<const SequenceTemplate* const> gallery, const PipelineConfig& cfg) {
  std::vector<std::pair<std::string, PartMoments>> moments;
  moments.reserve(gallery.size());
  for (const auto* t : gallery) moments.emplace_back(t->subject + "/" + t->sequence, t->moments);
  return compute_part_stats(build_moment_db(moments, cfg.zernike_indices, cfg.moment_mode));
}

inline SvmModel train_combination(std::span<const SequenceTemplate* const> gallery, PartSet set, const PipelineConfig& cfg) {
  std::vector<FusedFeature> features;
  std::vector<std::string> labels;
  for (const auto* t : gallery) {
    features.push_back(t->feature(set));
    labels.push_back(t->subject);
  }
  return train_ovr_svm(features, labels, cfg.svm);
}

struct Enrollment {
  GalleryMomentDb db;
  ModelBank bank;
};

inline std::vector<const SequenceTemplate*> pointers(std::span<const SequenceTemplate> templates) {
  std::vector<const SequenceTemplate*> out;
  for (const auto& t : templates) out.push_back(&t);
  return out;
}

inline Enrollment enroll(std::span<const SequenceTemplate* const> gallery, const PipelineConfig& cfg, unsigned threads = 1) {
  Enrollment e;
  e.db = gallery_moment_db(gallery, cfg);
  const auto sets = enumerate_part_sets();
  std::vector<SvmModel> models(sets.size());
  parallel_for(sets.size(), threads, [&](std::size_t i) { models[i] = train_combination(gallery, sets[i], cfg); });
  for (auto& m : models) e.bank.insert(std::move(m));
  return e;
}

struct Identification {
  ScreenResult screen;
  PartSet combination = PartSet::full();
  std::vector<RankedClass> ranking;
};

/// Chooses the combination to classify with: the screened clean set, or the
/// full AESI when screening is disabled.
inline ScreenResult screen_probe(const SequenceTemplate& probe, const GalleryMomentDb& db, const PipelineConfig& cfg) {
  if (!cfg.screening) return ScreenResult{};
  return screen(probe.moments, db, cfg.k_sigma);
}

inline std::vector<RankedClass> classify(const SequenceTemplate& probe, const SvmModel& model) {
  const auto scores = decision_scores(model, probe.feature(model.combination));
  const auto labels = model.labels();
  return rank_list(scores, labels);
}

inline Identification identify(const SequenceTemplate& probe, const GalleryMomentDb& db, const ModelBank& bank,
                               const PipelineConfig& cfg) {
  Identification id;
  id.screen = screen_probe(probe, db, cfg);
  id.combination = id.screen.clean_set;
  id.ranking = classify(probe, bank.at(id.combination));
  return id;
}

}  // namespace gaitlab
