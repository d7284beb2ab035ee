#pragma once

// Identification metrics and evaluation protocols.
//
// CCR is rank-1 accuracy: correct / total * 100. CMC(r) is the percentage
// of probes whose true subject appears within the first r ranks.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gaitlab/pipeline.hpp"

namespace gaitlab {

inline double ccr(long correct, long total) {
  if (total < 1) throw Error(ErrorKind::Parameter, "CCR needs at least one probe");
  if (correct < 0 || correct > total) throw Error(ErrorKind::Parameter, "correct count out of range");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

using CmcCurve = std::vector<std::pair<int, double>>;

/// 1-based rank of `label` in `ranking`; throws when absent.
inline int rank_of(const std::vector<std::string>& ranking, const std::string& label) {
  const auto it = std::find(ranking.begin(), ranking.end(), label);
  if (it == ranking.end()) throw Error(ErrorKind::Parameter, "label '" + label + "' is not in the class set");
  return static_cast<int>(it - ranking.begin()) + 1;
}

inline CmcCurve cmc(const std::vector<std::vector<std::string>>& rankings, const std::vector<std::string>& truths) {
  if (rankings.size() != truths.size()) throw Error(ErrorKind::Parameter, "rankings and truths differ in count");
  if (rankings.empty()) throw Error(ErrorKind::Parameter, "CMC needs at least one probe");
  const std::set<std::string> classes(rankings.front().begin(), rankings.front().end());
  for (const auto& r : rankings) {
    if (std::set<std::string>(r.begin(), r.end()) != classes || r.size() != classes.size()) {
      throw Error(ErrorKind::Parameter, "ranked lists cover different class sets");
    }
  }
  std::vector<long> hits(classes.size() + 1, 0);
  for (std::size_t i = 0; i < rankings.size(); ++i) ++hits[static_cast<std::size_t>(rank_of(rankings[i], truths[i]))];
  CmcCurve curve;
  long cumulative = 0;
  for (std::size_t r = 1; r <= classes.size(); ++r) {
    cumulative += hits[r];
    curve.emplace_back(static_cast<int>(r), ccr(cumulative, static_cast<long>(rankings.size())));
  }
  return curve;
}

struct ProbeRecord {
  std::string subject;
  std::string sequence;
  std::string condition;
  std::vector<RankedClass> ranking;
  PartSet clean_set = PartSet::full();
  bool all_infected = false;
  int true_rank = 0;

  const std::string& predicted() const { return ranking.front().label; }
};

struct EvalReport {
  double rank1_ccr = 0.0;
  CmcCurve cmc;
  std::vector<ProbeRecord> probes;
  /// (true subject, predicted subject) -> count
  std::map<std::pair<std::string, std::string>, int> confusion;
  std::vector<std::string> warnings;

  double cmc_at(int rank) const {
    if (cmc.empty()) return 0.0;
    const auto r = std::clamp(rank, 1, static_cast<int>(cmc.size()));
    return cmc[static_cast<std::size_t>(r) - 1].second;
  }
};

inline EvalReport summarize(std::vector<ProbeRecord> probes, std::vector<std::string> warnings = {}) {
  EvalReport report;
  report.warnings = std::move(warnings);
  if (probes.empty()) throw Error(ErrorKind::Parameter, "evaluation produced no probes");
  std::vector<std::vector<std::string>> rankings;
  std::vector<std::string> truths;
  long correct = 0;
  for (auto& p : probes) {
    std::vector<std::string> labels;
    for (const auto& r : p.ranking) labels.push_back(r.label);
    p.true_rank = rank_of(labels, p.subject);
    correct += p.true_rank == 1;
    ++report.confusion[{p.subject, p.predicted()}];
    rankings.push_back(std::move(labels));
    truths.push_back(p.subject);
  }
  report.rank1_ccr = ccr(correct, static_cast<long>(probes.size()));
  report.cmc = cmc(rankings, truths);
  report.probes = std::move(probes);
  return report;
}

inline ProbeRecord make_record(const SequenceTemplate& probe, const Identification& id) {
  return ProbeRecord{probe.subject, probe.sequence, probe.condition, id.ranking, id.screen.clean_set,
                     id.screen.all_infected, 0};
}

/// Gallery role versus probe role. Models are trained once per combination
/// actually requested by a probe.
inline EvalReport evaluate_split(std::span<const SequenceTemplate> templates, const PipelineConfig& cfg, unsigned threads = 1) {
  std::vector<const SequenceTemplate*> gallery;
  std::vector<const SequenceTemplate*> probes;
  for (const auto& t : templates) {
    if (!t.role) throw Error(ErrorKind::Manifest, "split evaluation needs a role for '" + t.subject + "/" + t.sequence + "'");
    (*t.role == Role::Gallery ? gallery : probes).push_back(&t);
  }
  if (gallery.empty() || probes.empty()) throw Error(ErrorKind::Manifest, "split evaluation needs gallery and probe sequences");

  const auto db = gallery_moment_db(gallery, cfg);
  std::vector<ScreenResult> screens(probes.size());
  std::set<std::uint8_t> needed;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    screens[i] = screen_probe(*probes[i], db, cfg);
    needed.insert(screens[i].clean_set.bits());
  }
  const std::vector<std::uint8_t> combos(needed.begin(), needed.end());
  std::vector<SvmModel> models(combos.size());
  parallel_for(combos.size(), threads, [&](std::size_t i) { models[i] = train_combination(gallery, PartSet(combos[i]), cfg); });
  ModelBank bank;
  for (auto& m : models) bank.insert(std::move(m));

  std::vector<ProbeRecord> records;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    Identification id;
    id.screen = screens[i];
    id.combination = screens[i].clean_set;
    id.ranking = classify(*probes[i], bank.at(id.combination));
    records.push_back(make_record(*probes[i], id));
  }
  return summarize(std::move(records));
}

/// Each sequence is held out in turn against a gallery of all the others;
/// the moment statistics and the classifier for the probe's screened
/// combination are rebuilt inside every fold. Subjects with a single
/// sequence cannot be held out meaningfully and are excluded.
inline EvalReport leave_one_out(std::span<const SequenceTemplate> templates, const PipelineConfig& cfg, unsigned threads = 1) {
  std::map<std::string, int> per_subject;
  for (const auto& t : templates) ++per_subject[t.subject];
  std::vector<std::string> warnings;
  std::vector<const SequenceTemplate*> pool;
  for (const auto& t : templates) {
    if (per_subject[t.subject] < 2) {
      warnings.push_back("subject '" + t.subject + "' has a single sequence and is excluded from leave-one-out");
      continue;
    }
    pool.push_back(&t);
  }
  if (pool.size() < 3) throw Error(ErrorKind::InsufficientGallery, "leave-one-out needs at least 3 usable sequences");

  std::vector<ProbeRecord> records(pool.size());
  parallel_for(pool.size(), threads, [&](std::size_t fold) {
    std::vector<const SequenceTemplate*> gallery;
    gallery.reserve(pool.size() - 1);
    for (std::size_t j = 0; j < pool.size(); ++j)
      if (j != fold) gallery.push_back(pool[j]);
    const auto db = gallery_moment_db(gallery, cfg);
    Identification id;
    id.screen = screen_probe(*pool[fold], db, cfg);
    id.combination = id.screen.clean_set;
    id.ranking = classify(*pool[fold], train_combination(gallery, id.combination, cfg));
    records[fold] = make_record(*pool[fold], id);
  });
  return summarize(std::move(records), std::move(warnings));
}

inline std::string format_percent(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

/// report.csv: one row per probe.
inline void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "subject,sequence,condition,predicted,true_rank,clean_set,all_infected,ranking\n";
  for (const auto& p : report.probes) {
    out << p.subject << ',' << p.sequence << ',' << p.condition << ',' << p.predicted() << ',' << p.true_rank << ','
        << static_cast<int>(p.clean_set.bits()) << ',' << (p.all_infected ? 1 : 0) << ',';
    for (std::size_t i = 0; i < p.ranking.size(); ++i) out << (i ? ";" : "") << p.ranking[i].label;
    out << '\n';
  }
}

inline void write_cmc_csv(std::ostream& out, const EvalReport& report) {
  out << "rank,percent\n";
  for (const auto& [rank, pct] : report.cmc) out << rank << ',' << format_percent(pct) << '\n';
}

inline std::string summary_text(const EvalReport& report) {
  std::ostringstream out;
  std::map<std::uint8_t, int> combos;
  int flagged = 0;
  for (const auto& p : report.probes) {
    ++combos[p.clean_set.bits()];
    flagged += p.all_infected;
  }
  out << "probes: " << report.probes.size() << '\n';
  out << "rank-1 CCR: " << format_percent(report.rank1_ccr) << "%\n";
  for (int r : {1, 5, 10}) {
    if (r <= static_cast<int>(report.cmc.size())) out << "CMC(" << r << "): " << format_percent(report.cmc_at(r)) << "%\n";
  }
  out << "classes: " << report.cmc.size() << '\n';
  for (const auto& [bits, n] : combos) out << "combination " << PartSet(bits).to_string() << ": " << n << " probes\n";
  if (flagged) out << "all-parts-infected fallbacks: " << flagged << '\n';
  return out.str();
}

inline void write_report_files(const std::filesystem::path& dir, const EvalReport& report) {
  std::filesystem::create_directories(dir);
  std::ofstream rep(dir / "report.csv", std::ios::binary);
  std::ofstream cm(dir / "cmc.csv", std::ios::binary);
  std::ofstream sum(dir / "summary.txt", std::ios::binary);
  if (!rep || !cm || !sum) throw Error(ErrorKind::Io, "cannot write reports in '" + dir.string() + "'");
  write_report_csv(rep, report);
  write_cmc_csv(cm, report);
  sum << summary_text(report);
}

/// CSV rows `subject,sequence,combination_bitmask,v1,v2,...` for every
/// template and combination.
inline void write_features_csv(std::ostream& out, std::span<const SequenceTemplate> templates) {
  for (const auto& t : templates) {
    for (auto set : enumerate_part_sets()) {
      out << t.subject << ',' << t.sequence << ',' << static_cast<int>(set.bits());
      for (double v : t.feature(set).values) out << ',' << format_real(v);
      out << '\n';
    }
  }
}

}  // namespace gaitlab
