#pragma once

// Text artifact formats. Reals are written in shortest round-trip form
// (std::to_chars), so write -> read -> write is byte-identical.
//
// Moment database:
//   GAITLAB-MOMENTDB v1
//   CONFIG,<hash>
//   MODE,complex|magnitude
//   INDEX,n,m                       one per Zernike index, in use order
//   REGION,<part>,width,height      part-AESI size the moments were taken on
//   <part>,<seq_id>,n,m,re,im       one per (part, sequence, index)
//   STATS,<part>,mu,sigma           present once finalized
//
// Model bank:
//   GAITLAB-MODELS v1
//   CONFIG,<hash>
//   MODEL,<bitmask>,<feature_dim>,<num_classes>
//   CLASSES,<label>,...
//   MEAN,<v>,...
//   STD,<v>,...
//   <label>,<bias>,<w1>,...         one row per class
//   END

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gaitlab/classifier.hpp"
#include "gaitlab/covariate.hpp"
#include "gaitlab/error.hpp"

namespace gaitlab {

inline constexpr std::string_view kMomentDbHeader = "GAITLAB-MOMENTDB v1";
inline constexpr std::string_view kModelBankHeader = "GAITLAB-MODELS v1";

inline std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorKind::Format, "cannot format real");
  return std::string(buf, ptr);
}

inline double parse_real(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error(ErrorKind::Format, "bad real '" + std::string(s) + "'");
  return v;
}

inline long long parse_int(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error(ErrorKind::Format, "bad integer '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline void check_field(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(",\n\r") != std::string::npos) {
    throw Error(ErrorKind::Format, std::string(what) + " '" + s + "' must be non-empty and free of commas/newlines");
  }
}

inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

struct MomentDbFile {
  std::string config_hash;
  GalleryMomentDb db;
};

inline void write_moment_db(std::ostream& out, const GalleryMomentDb& db, const std::string& config_hash) {
  out << kMomentDbHeader << '\n';
  out << "CONFIG," << config_hash << '\n';
  out << "MODE," << to_string(db.mode) << '\n';
  for (const auto& idx : db.index_set) out << "INDEX," << idx.n << ',' << idx.m << '\n';
  for (auto part : kAllParts) {
    const auto& entries = db.part_entries(part);
    if (entries.empty()) continue;
    out << "REGION," << to_string(part) << ',' << entries.front().moments.region_width << ','
        << entries.front().moments.region_height << '\n';
  }
  for (auto part : kAllParts) {
    for (const auto& e : db.part_entries(part)) {
      check_field(e.sequence_id, "sequence id");
      for (std::size_t k = 0; k < e.moments.indices.size(); ++k) {
        const auto& idx = e.moments.indices[k];
        out << to_string(part) << ',' << e.sequence_id << ',' << idx.n << ',' << idx.m << ','
            << format_real(e.moments.values[k].real()) << ',' << format_real(e.moments.values[k].imag()) << '\n';
      }
    }
  }
  if (db.stats) {
    for (auto part : kAllParts) {
      const auto& st = db.part_stats(part);
      out << "STATS," << to_string(part) << ',' << format_real(st.mu) << ',' << format_real(st.sigma) << '\n';
    }
  }
}

inline std::string moment_db_to_string(const GalleryMomentDb& db, const std::string& config_hash) {
  std::ostringstream out;
  write_moment_db(out, db, config_hash);
  return out.str();
}

inline MomentDbFile read_moment_db(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty() || lines.front() != kMomentDbHeader) throw Error(ErrorKind::Format, "missing moment database header");
  MomentDbFile file;
  file.db.index_set.clear();
  std::array<PartStats, 4> stats{};
  std::array<std::pair<int, int>, 4> regions{};
  int stats_seen = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split_csv(lines[li]);
    const auto tag = fields.front();
    if (tag == "CONFIG" && fields.size() == 2) {
      file.config_hash = std::string(fields[1]);
    } else if (tag == "MODE" && fields.size() == 2) {
      file.db.mode = moment_mode_from_string(std::string(fields[1]));
    } else if (tag == "INDEX" && fields.size() == 3) {
      ZernikeIndex idx{static_cast<int>(parse_int(fields[1])), static_cast<int>(parse_int(fields[2]))};
      idx.validate();
      file.db.index_set.push_back(idx);
    } else if (tag == "REGION" && fields.size() == 4) {
      const auto part = part_from_string(std::string(fields[1]));
      regions[static_cast<std::size_t>(part)] = {static_cast<int>(parse_int(fields[2])), static_cast<int>(parse_int(fields[3]))};
    } else if (tag == "STATS" && fields.size() == 4) {
      const auto part = part_from_string(std::string(fields[1]));
      stats[static_cast<std::size_t>(part)] = {parse_real(fields[2]), parse_real(fields[3])};
      ++stats_seen;
    } else if (fields.size() == 6) {
      const auto part = part_from_string(std::string(tag));
      auto& entries = file.db.entries[static_cast<std::size_t>(part)];
      const std::string seq(fields[1]);
      const ZernikeIndex idx{static_cast<int>(parse_int(fields[2])), static_cast<int>(parse_int(fields[3]))};
      if (entries.empty() || entries.back().sequence_id != seq) {
        const auto [w, h] = regions[static_cast<std::size_t>(part)];
        entries.push_back({seq, ZernikeMomentSet{{}, {}, w, h}});
      }
      auto& m = entries.back().moments;
      m.indices.push_back(idx);
      m.values.emplace_back(parse_real(fields[4]), parse_real(fields[5]));
    } else {
      throw Error(ErrorKind::Format, "unrecognised moment database line " + std::to_string(li + 1));
    }
  }
  for (const auto& part_entries : file.db.entries)
    for (const auto& e : part_entries)
      if (e.moments.indices != file.db.index_set) {
        throw Error(ErrorKind::Format, "moments of '" + e.sequence_id + "' do not match the declared index set");
      }
  if (stats_seen == 4) file.db.stats = stats;
  else if (stats_seen != 0) throw Error(ErrorKind::Format, "incomplete STATS section");
  return file;
}

inline void write_moment_db_file(const std::filesystem::path& path, const GalleryMomentDb& db, const std::string& hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  write_moment_db(out, db, hash);
}

inline MomentDbFile read_moment_db_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open moment database '" + path.string() + "'");
  return read_moment_db(in);
}

struct ModelBankFile {
  std::string config_hash;
  ModelBank bank;
};

inline void write_real_row(std::ostream& out, std::string_view tag, const std::vector<double>& values) {
  out << tag;
  for (double v : values) out << ',' << format_real(v);
  out << '\n';
}

inline void write_model_bank(std::ostream& out, const ModelBank& bank, const std::string& config_hash) {
  out << kModelBankHeader << '\n';
  out << "CONFIG," << config_hash << '\n';
  for (const auto& [bits, model] : bank.models) {
    out << "MODEL," << static_cast<int>(bits) << ',' << model.feature_dim << ',' << model.classes.size() << '\n';
    out << "CLASSES";
    for (const auto& c : model.classes) {
      check_field(c.label, "class label");
      out << ',' << c.label;
    }
    out << '\n';
    write_real_row(out, "MEAN", model.stats.mean);
    write_real_row(out, "STD", model.stats.stddev);
    for (const auto& c : model.classes) {
      out << c.label << ',' << format_real(c.bias);
      for (double w : c.weights) out << ',' << format_real(w);
      out << '\n';
    }
    out << "END\n";
  }
}

inline std::string model_bank_to_string(const ModelBank& bank, const std::string& config_hash) {
  std::ostringstream out;
  write_model_bank(out, bank, config_hash);
  return out.str();
}

inline ModelBankFile read_model_bank(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty() || lines.front() != kModelBankHeader) throw Error(ErrorKind::Format, "missing model bank header");
  ModelBankFile file;
  std::size_t li = 1;
  auto next = [&](const char* what) -> std::vector<std::string_view> {
    if (li >= lines.size()) throw Error(ErrorKind::Format, std::string("model bank truncated before ") + what);
    return split_csv(lines[li++]);
  };
  auto reals = [](const std::vector<std::string_view>& fields, std::size_t from) {
    std::vector<double> out;
    for (std::size_t i = from; i < fields.size(); ++i) out.push_back(parse_real(fields[i]));
    return out;
  };

  auto config = next("CONFIG");
  if (config.size() != 2 || config[0] != "CONFIG") throw Error(ErrorKind::Format, "model bank missing CONFIG line");
  file.config_hash = std::string(config[1]);

  while (li < lines.size()) {
    const auto head = next("MODEL");
    if (head.size() != 4 || head[0] != "MODEL") throw Error(ErrorKind::Format, "expected MODEL line " + std::to_string(li));
    SvmModel model;
    const auto bits = parse_int(head[1]);
    if (bits < 1 || bits > 15) throw Error(ErrorKind::Format, "model combination bitmask out of range");
    model.combination = PartSet(static_cast<std::uint8_t>(bits));
    model.feature_dim = static_cast<std::size_t>(parse_int(head[2]));
    const auto num_classes = static_cast<std::size_t>(parse_int(head[3]));

    const auto classes = next("CLASSES");
    if (classes[0] != "CLASSES" || classes.size() != num_classes + 1) throw Error(ErrorKind::Format, "bad CLASSES line");
    const auto mean = next("MEAN");
    const auto stddev = next("STD");
    if (mean[0] != "MEAN" || stddev[0] != "STD") throw Error(ErrorKind::Format, "bad standardization rows");
    model.stats.mean = reals(mean, 1);
    model.stats.stddev = reals(stddev, 1);
    if (model.stats.mean.size() != model.feature_dim || model.stats.stddev.size() != model.feature_dim) {
      throw Error(ErrorKind::Format, "standardization length differs from feature_dim");
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
      const auto row = next("class row");
      if (row.size() != model.feature_dim + 2 || row[0] != classes[c + 1]) {
        throw Error(ErrorKind::Format, "bad weight row for class '" + std::string(classes[c + 1]) + "'");
      }
      ClassWeights cw;
      cw.label = std::string(row[0]);
      cw.bias = parse_real(row[1]);
      cw.weights = reals(row, 2);
      model.classes.push_back(std::move(cw));
    }
    const auto end = next("END");
    if (end.size() != 1 || end[0] != "END") throw Error(ErrorKind::Format, "missing END after model");
    if (file.bank.contains(model.combination)) throw Error(ErrorKind::Format, "duplicate model combination");
    file.bank.insert(std::move(model));
  }
  return file;
}

inline void write_model_bank_file(const std::filesystem::path& path, const ModelBank& bank, const std::string& hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  write_model_bank(out, bank, hash);
}

inline ModelBankFile read_model_bank_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open model bank '" + path.string() + "'");
  return read_model_bank(in);
}

}  // namespace gaitlab
