#pragma once

// Pipeline configuration and its key = value file form:
//
//   # comment
//   norm_height = 128
//   norm_width = 88
//   zernike_indices = 5:1,5:3,5:5
//   k_sigma = 3
//   moment_mode = complex          # or magnitude
//   screening = on                 # off: always use the full AESI
//   smoothing_window = 3
//   sdog_bins = 9
//   sdog_levels = 0,1,2
//   sdog_normalization = global_l2 # or none
//   svm_c = 1
//   svm_max_iterations = 1000
//   svm_tol = 1e-6
//   seed = 1
//
// Every key is optional. Unknown keys are rejected. The config hash covers
// everything except the seed.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gaitlab/covariate.hpp"
#include "gaitlab/classifier.hpp"
#include "gaitlab/features.hpp"
#include "gaitlab/serialization.hpp"
#include "gaitlab/silhouette.hpp"
#include "gaitlab/zernike.hpp"

namespace gaitlab {

struct PipelineConfig {
  NormalizationSpec normalization;
  std::vector<ZernikeIndex> zernike_indices = default_zernike_indices();
  double k_sigma = 3.0;
  MomentMode moment_mode = MomentMode::Complex;
  bool screening = true;
  int smoothing_window = 3;
  SdogConfig sdog;
  TrainConfig svm;
  std::uint64_t seed = 1;

  void validate() const {
    normalization.validate();
    if (zernike_indices.empty()) throw Error(ErrorKind::Parameter, "zernike_indices must not be empty");
    for (const auto& idx : zernike_indices) idx.validate();
    if (!(k_sigma >= 0.0)) throw Error(ErrorKind::Parameter, "k_sigma must be >= 0");
    if (smoothing_window < 1 || smoothing_window % 2 == 0) throw Error(ErrorKind::Parameter, "smoothing_window must be odd");
    if (sdog.bins < 1 || sdog.levels.empty()) throw Error(ErrorKind::Parameter, "invalid SDOG configuration");
    svm.validate();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace detail

inline std::string format_indices(const std::vector<ZernikeIndex>& indices) {
  std::string out;
  for (const auto& idx : indices) {
    if (!out.empty()) out += ',';
    out += std::to_string(idx.n) + ":" + std::to_string(idx.m);
  }
  return out;
}

inline std::vector<ZernikeIndex> parse_indices(const std::string& text) {
  std::vector<ZernikeIndex> out;
  for (const auto& item : detail::split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Parameter, "Zernike index '" + item + "' is not n:m");
    ZernikeIndex idx{static_cast<int>(parse_int(item.substr(0, colon))), static_cast<int>(parse_int(item.substr(colon + 1)))};
    idx.validate();
    out.push_back(idx);
  }
  return out;
}

/// Canonical text of the hashed fields.
inline std::string canonical_config(const PipelineConfig& c) {
  std::string levels;
  for (int v : c.sdog.levels) levels += (levels.empty() ? "" : ",") + std::to_string(v);
  std::ostringstream out;
  out << "norm_height = " << c.normalization.target_height << '\n'
      << "norm_width = " << c.normalization.target_width << '\n'
      << "zernike_indices = " << format_indices(c.zernike_indices) << '\n'
      << "k_sigma = " << format_real(c.k_sigma) << '\n'
      << "moment_mode = " << to_string(c.moment_mode) << '\n'
      << "screening = " << (c.screening ? "on" : "off") << '\n'
      << "smoothing_window = " << c.smoothing_window << '\n'
      << "sdog_bins = " << c.sdog.bins << '\n'
      << "sdog_levels = " << levels << '\n'
      << "sdog_normalization = " << (c.sdog.normalization == SdogNormalization::GlobalL2 ? "global_l2" : "none") << '\n'
      << "svm_c = " << format_real(c.svm.c) << '\n'
      << "svm_max_iterations = " << c.svm.max_iterations << '\n'
      << "svm_tol = " << format_real(c.svm.convergence_tol) << '\n';
  return out.str();
}

inline std::string config_text(const PipelineConfig& c) { return canonical_config(c) + "seed = " + std::to_string(c.seed) + "\n"; }

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
inline std::string config_hash(const PipelineConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline bool parse_switch(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw Error(ErrorKind::Parameter, "'" + key + "' expects on/off, got '" + v + "'");
}

inline void apply_config_entry(PipelineConfig& c, const std::string& key, const std::string& value) {
  if (key == "norm_height") c.normalization.target_height = static_cast<int>(parse_int(value));
  else if (key == "norm_width") c.normalization.target_width = static_cast<int>(parse_int(value));
  else if (key == "zernike_indices") c.zernike_indices = parse_indices(value);
  else if (key == "k_sigma") c.k_sigma = parse_real(value);
  else if (key == "moment_mode") c.moment_mode = moment_mode_from_string(value);
  else if (key == "screening") c.screening = parse_switch(key, value);
  else if (key == "smoothing_window") c.smoothing_window = static_cast<int>(parse_int(value));
  else if (key == "sdog_bins") c.sdog.bins = static_cast<int>(parse_int(value));
  else if (key == "sdog_levels") {
    c.sdog.levels.clear();
    for (const auto& v : detail::split(value, ',')) c.sdog.levels.push_back(static_cast<int>(parse_int(v)));
  } else if (key == "sdog_normalization") {
    if (value == "global_l2") c.sdog.normalization = SdogNormalization::GlobalL2;
    else if (value == "none") c.sdog.normalization = SdogNormalization::None;
    else throw Error(ErrorKind::Parameter, "unknown sdog_normalization '" + value + "'");
  } else if (key == "svm_c") c.svm.c = parse_real(value);
  else if (key == "svm_max_iterations") c.svm.max_iterations = static_cast<int>(parse_int(value));
  else if (key == "svm_tol") c.svm.convergence_tol = parse_real(value);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(value));
  else throw Error(ErrorKind::Parameter, "unknown config key '" + key + "'");
}

inline PipelineConfig parse_config(std::istream& in) {
  PipelineConfig c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Parameter, "config line " + std::to_string(number) + " is not key = value");
    try {
      apply_config_entry(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.kind(), "config line " + std::to_string(number) + ": " + e.what());
    }
  }
  c.svm.seed = c.seed;
  c.validate();
  return c;
}

inline PipelineConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace gaitlab
