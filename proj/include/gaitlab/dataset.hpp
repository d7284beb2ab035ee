#pragma once

// On-disk dataset layout:
//   <root>/dataset.json                        manifest
//   <root>/<subject>/<sequence>/<frame>.png    zero-padded frame indices (.pgm also accepted)

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaitlab/error.hpp"
#include "gaitlab/image_io.hpp"
#include "gaitlab/silhouette.hpp"

namespace gaitlab {

enum class Role { Gallery, Probe };

inline const char* to_string(Role role) { return role == Role::Gallery ? "gallery" : "probe"; }

struct ManifestEntry {
  std::string subject;
  std::string sequence;
  std::string condition = "normal";
  std::optional<Role> role;
  /// Expected frame count; when present every index in the range must exist.
  std::optional<int> frames;
};

inline std::vector<ManifestEntry> parse_manifest(const nlohmann::json& doc) {
  if (!doc.is_array()) throw Error(ErrorKind::Manifest, "dataset.json must contain an array of entries");
  std::vector<ManifestEntry> entries;
  for (const auto& item : doc) {
    ManifestEntry e;
    try {
      e.subject = item.at("subject").get<std::string>();
      e.sequence = item.at("sequence").get<std::string>();
      if (item.contains("condition")) e.condition = item.at("condition").get<std::string>();
      if (item.contains("role")) {
        const auto role = item.at("role").get<std::string>();
        if (role == "gallery") e.role = Role::Gallery;
        else if (role == "probe") e.role = Role::Probe;
        else throw Error(ErrorKind::Manifest, "unknown role '" + role + "'");
      }
      if (item.contains("frames")) e.frames = item.at("frames").get<int>();
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorKind::Manifest, std::string("malformed manifest entry: ") + ex.what());
    }
    if (e.subject.empty() || e.sequence.empty()) throw Error(ErrorKind::Manifest, "subject and sequence must be non-empty");
    entries.push_back(std::move(e));
  }
  return entries;
}

inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& root) {
  const auto path = root / "dataset.json";
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open manifest '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::Manifest, "'" + path.string() + "': " + ex.what());
  }
  return parse_manifest(doc);
}

inline void write_manifest(const std::filesystem::path& root, const std::vector<ManifestEntry>& entries) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json item;
    item["subject"] = e.subject;
    item["sequence"] = e.sequence;
    item["condition"] = e.condition;
    if (e.role) item["role"] = to_string(*e.role);
    if (e.frames) item["frames"] = *e.frames;
    doc.push_back(std::move(item));
  }
  std::ofstream out(root / "dataset.json");
  if (!out) throw Error(ErrorKind::Io, "cannot write manifest in '" + root.string() + "'");
  out << doc.dump(2) << '\n';
}

/// Loads the frames of one sequence directory. Frames are named by integer
/// index; indices must be consecutive from the first one found.
inline GaitSequence load_sequence(const std::filesystem::path& directory, const ManifestEntry& entry) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) throw Error(ErrorKind::Io, "missing sequence directory '" + directory.string() + "'");

  struct FrameFile {
    long index;
    fs::path path;
  };
  std::vector<FrameFile> files;
  std::string extension = ".png";
  std::size_t pad = 0;
  for (const auto& dirent : fs::directory_iterator(directory)) {
    if (!dirent.is_regular_file()) continue;
    const auto ext = dirent.path().extension().string();
    if (ext != ".png" && ext != ".pgm") continue;
    const auto stem = dirent.path().stem().string();
    long index = 0;
    const auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), index);
    if (ec != std::errc{} || ptr != stem.data() + stem.size() || index < 0) {
      throw Error(ErrorKind::Manifest, "frame file '" + dirent.path().string() + "' is not named by an integer index");
    }
    extension = ext;
    pad = stem.size();
    files.push_back({index, dirent.path()});
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.index < b.index; });

  auto expected_name = [&](long index) {
    std::string digits = std::to_string(index);
    if (digits.size() < pad) digits.insert(0, pad - digits.size(), '0');
    return directory / (digits + extension);
  };

  if (entry.frames) {
    const long first = files.empty() ? 0 : std::min(files.front().index, 1L);
    for (long i = 0; i < *entry.frames; ++i) {
      const long index = first + i;
      const bool present = std::any_of(files.begin(), files.end(), [&](const auto& f) { return f.index == index; });
      if (!present) throw Error(ErrorKind::Io, "missing frame file '" + expected_name(index).string() + "'");
    }
  }
  if (files.empty()) throw Error(ErrorKind::Io, "no frame files in '" + directory.string() + "'");
  for (std::size_t i = 1; i < files.size(); ++i) {
    if (files[i].index == files[i - 1].index) {
      throw Error(ErrorKind::Manifest, "duplicate frame index in '" + files[i].path.string() + "'");
    }
    if (files[i].index != files[i - 1].index + 1) {
      throw Error(ErrorKind::Manifest, "frame numbering gap before '" + files[i].path.string() + "'");
    }
  }

  GaitSequence seq;
  seq.subject_id = entry.subject;
  seq.sequence_id = entry.sequence;
  seq.condition_tag = entry.condition;
  seq.frames.reserve(files.size());
  for (const auto& f : files) seq.frames.push_back(threshold_mask(read_gray_image(f.path)));
  seq.validate();
  return seq;
}

inline std::filesystem::path sequence_directory(const std::filesystem::path& root, const ManifestEntry& e) {
  return root / e.subject / e.sequence;
}

}  // namespace gaitlab
