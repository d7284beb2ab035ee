// gaitlab: enrollment, identification, evaluation and dataset tooling.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gaitlab.hpp"

namespace fs = std::filesystem;
using namespace gaitlab;

namespace {

constexpr int kExitError = 1;
constexpr int kExitAssert = 3;

constexpr const char* kMomentDbName = "moment_db.txt";
constexpr const char* kModelBankName = "model_bank.txt";

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = default_threads();
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("gaitlab");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("GAITLAB_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("unrecognised GAITLAB_LOG level '{}'", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

PipelineConfig load_config(const GlobalOptions& g) {
  PipelineConfig cfg = g.config_path.empty() ? PipelineConfig{} : read_config_file(g.config_path);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.svm.seed = *g.seed;
  }
  cfg.validate();
  spdlog::debug("config hash {}", config_hash(cfg));
  return cfg;
}

std::vector<SequenceTemplate> load_dataset(const fs::path& root, const PipelineConfig& cfg, unsigned threads) {
  const auto manifest = read_manifest(root);
  spdlog::info("loading {} sequences from {}", manifest.size(), root.string());
  auto templates = load_templates(root, manifest, cfg, threads);
  for (const auto& t : templates) {
    if (t.aesi.period_fallback) spdlog::warn("{}/{}: no full gait period found, averaged the whole sequence", t.subject, t.sequence);
  }
  return templates;
}

std::vector<const SequenceTemplate*> gallery_of(const std::vector<SequenceTemplate>& templates) {
  bool any_role = false;
  for (const auto& t : templates) any_role |= t.role.has_value();
  std::vector<const SequenceTemplate*> out;
  for (const auto& t : templates)
    if (!any_role || t.role == Role::Gallery) out.push_back(&t);
  return out;
}

int cmd_enroll(const GlobalOptions& g, const fs::path& data, const fs::path& out_dir) {
  const auto cfg = load_config(g);
  const auto templates = load_dataset(data, cfg, g.threads);
  const auto gallery = gallery_of(templates);
  spdlog::info("enrolling {} gallery sequences", gallery.size());
  const auto e = enroll(gallery, cfg, g.threads);
  fs::create_directories(out_dir);
  const auto hash = config_hash(cfg);
  write_moment_db_file(out_dir / kMomentDbName, e.db, hash);
  write_model_bank_file(out_dir / kModelBankName, e.bank, hash);
  std::cout << "enrolled " << gallery.size() << " sequences, " << e.bank.models.size() << " models\n"
            << "moment db: " << (out_dir / kMomentDbName).string() << '\n'
            << "model bank: " << (out_dir / kModelBankName).string() << '\n';
  return 0;
}

int cmd_identify(const GlobalOptions& g, const fs::path& probe_dir, const fs::path& db_path, const fs::path& bank_path,
                 int top) {
  const auto cfg = load_config(g);
  const auto db_file = read_moment_db_file(db_path);
  const auto bank_file = read_model_bank_file(bank_path);
  const auto hash = config_hash(cfg);
  if (db_file.config_hash != bank_file.config_hash) {
    throw Error(ErrorKind::Incompatible, "moment db and model bank were built with different configurations (" +
                                             db_file.config_hash + " vs " + bank_file.config_hash + ")");
  }
  if (db_file.config_hash != hash) {
    throw Error(ErrorKind::Incompatible, "artifacts were built with configuration " + db_file.config_hash +
                                             " but the current configuration is " + hash);
  }
  ManifestEntry entry;
  entry.subject = "probe";
  entry.sequence = probe_dir.filename().string();
  const auto seq = load_sequence(probe_dir, entry);
  const auto probe = make_template(seq, cfg);
  const auto id = identify(probe, db_file.db, bank_file.bank, cfg);

  std::cout << "screening:";
  for (auto p : kAllParts) {
    const auto& s = id.screen.parts[static_cast<std::size_t>(p)];
    std::cout << ' ' << to_string(p) << "=" << format_real(s.distance) << (s.infected ? "(infected)" : "");
  }
  std::cout << "\nclean set: " << id.screen.clean_set.to_string() << (id.screen.all_infected ? " (all parts infected)" : "")
            << "\ncombination: " << id.combination.to_string() << "\nranking:\n";
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(top), id.ranking.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::cout << "  " << i + 1 << ' ' << id.ranking[i].label << ' ' << format_real(id.ranking[i].score) << '\n';
  }
  return 0;
}

int cmd_evaluate(const GlobalOptions& g, const fs::path& data, const std::string& mode, const fs::path& report_dir,
                 std::optional<double> rank1_min, const std::string& dump_features) {
  const auto cfg = load_config(g);
  const auto templates = load_dataset(data, cfg, g.threads);
  if (!dump_features.empty()) {
    std::ofstream out(dump_features, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + dump_features + "'");
    write_features_csv(out, templates);
  }
  const auto report = mode == "loo" ? leave_one_out(templates, cfg, g.threads) : evaluate_split(templates, cfg, g.threads);
  for (const auto& w : report.warnings) spdlog::warn("{}", w);
  write_report_files(report_dir, report);
  std::cout << summary_text(report);
  if (rank1_min && report.rank1_ccr < *rank1_min) {
    std::cerr << "assertion failed: rank-1 CCR " << format_percent(report.rank1_ccr) << "% < " << *rank1_min << "%\n";
    return kExitAssert;
  }
  return 0;
}

int cmd_synth(const GlobalOptions& g, SynthConfig sc, const std::string& covariate, const std::string& affected,
              const fs::path& out_dir) {
  const auto cfg = load_config(g);
  sc.seed = cfg.seed;
  sc.normalization = cfg.normalization;
  sc.covariate = covariate_from_string(covariate);
  if (!affected.empty()) {
    PartSet parts;
    for (const auto& name : detail::split(affected, ',')) parts = parts.with(part_from_string(name));
    sc.affected_parts = parts;
  }
  const auto data = synth_generate(sc);
  write_dataset(out_dir, data);
  std::cout << "wrote " << data.sequences.size() << " sequences to " << out_dir.string() << '\n';
  return 0;
}

int cmd_zernike(const GlobalOptions& g, const fs::path& image_path, const std::string& indices) {
  auto cfg = load_config(g);
  const auto idx = indices.empty() ? cfg.zernike_indices : parse_indices(indices);
  const auto gray = read_gray_image(image_path);
  RealGrid image(gray.width(), gray.height());
  for (std::size_t i = 0; i < gray.size(); ++i) image.values()[i] = gray.values()[i] / 255.0;
  const auto m = compute_moments(image, idx);
  std::cout << "n,m,re,im,magnitude\n";
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto& z = m.values[k];
    std::cout << m.indices[k].n << ',' << m.indices[k].m << ',' << format_real(z.real()) << ',' << format_real(z.imag())
              << ',' << format_real(std::abs(z)) << '\n';
  }
  return 0;
}

int cmd_build_aesi(const GlobalOptions& g, const fs::path& sequence_dir, const fs::path& out, bool parts) {
  const auto cfg = load_config(g);
  ManifestEntry entry;
  entry.subject = "sequence";
  entry.sequence = sequence_dir.filename().string();
  const auto aesi = sequence_aesi(load_sequence(sequence_dir, entry), cfg);
  write_png(out, aesi_to_gray(aesi.energy));
  std::cout << "period: " << aesi.period_frames << " frames" << (aesi.period_fallback ? " (whole sequence)" : "") << '\n';
  if (parts) {
    const auto segments = segment_parts(aesi);
    for (const auto& p : segments) {
      auto path = out;
      path.replace_filename(out.stem().string() + "_" + to_string(p.part) + ".png");
      write_png(path, aesi_to_gray(p.data));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Covariate-aware gait recognition toolkit"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Pipeline configuration file (key = value)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  int rc = 0;

  auto* enroll_cmd = app.add_subcommand("enroll", "Build the gallery moment database and the 15 classifiers");
  fs::path enroll_data, enroll_out;
  enroll_cmd->add_option("--data", enroll_data, "Dataset root containing dataset.json")->required();
  enroll_cmd->add_option("--out", enroll_out, "Directory for moment_db.txt and model_bank.txt")->required();
  enroll_cmd->callback([&] { rc = cmd_enroll(g, enroll_data, enroll_out); });

  auto* identify_cmd = app.add_subcommand("identify", "Screen and identify one probe sequence");
  fs::path probe_dir, db_path, bank_path;
  int top = 5;
  identify_cmd->add_option("--probe", probe_dir, "Directory of probe frames")->required();
  identify_cmd->add_option("--moment-db", db_path, "Moment database file")->required();
  identify_cmd->add_option("--model-bank", bank_path, "Model bank file")->required();
  identify_cmd->add_option("--top", top, "Ranked identities to print")->check(CLI::PositiveNumber);
  identify_cmd->callback([&] { rc = cmd_identify(g, probe_dir, db_path, bank_path, top); });

  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a dataset and write report.csv, cmc.csv, summary.txt");
  fs::path eval_data, report_dir = "report";
  std::string mode = "split", dump_features;
  std::optional<double> rank1_min;
  eval_cmd->add_option("--data", eval_data, "Dataset root containing dataset.json")->required();
  eval_cmd->add_option("--mode", mode, "split (gallery/probe roles) or loo")->check(CLI::IsMember({"split", "loo"}));
  eval_cmd->add_option("--report", report_dir, "Report directory");
  eval_cmd->add_option("--assert-rank1-min", rank1_min, "Exit nonzero when rank-1 CCR (percent) is below this");
  eval_cmd->add_option("--dump-features", dump_features, "Write every fused feature vector to this CSV");
  eval_cmd->callback([&] { rc = cmd_evaluate(g, eval_data, mode, report_dir, rank1_min, dump_features); });

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic walking dataset");
  SynthConfig sc;
  std::string covariate = "none", affected;
  fs::path synth_out;
  synth_cmd->add_option("--out", synth_out, "Output dataset root")->required();
  synth_cmd->add_option("--subjects", sc.subjects, "Subjects")->capture_default_str();
  synth_cmd->add_option("--sequences", sc.sequences_per_subject, "Clean gallery sequences per subject")->capture_default_str();
  synth_cmd->add_option("--probe-sequences", sc.probe_sequences_per_subject, "Probe sequences per subject (covariate applied)")
      ->capture_default_str();
  synth_cmd->add_option("--frames", sc.frames_per_sequence, "Frames per sequence")->capture_default_str();
  synth_cmd->add_option("--cycle-length", sc.cycle_length, "Gait period in frames")->capture_default_str();
  synth_cmd->add_option("--covariate", covariate, "none, coat or bag")->check(CLI::IsMember({"none", "coat", "bag"}));
  synth_cmd->add_option("--affected", affected, "Comma-separated parts the covariate distorts (e.g. Chest,Pelvic)");
  synth_cmd->callback([&] { rc = cmd_synth(g, sc, covariate, affected, synth_out); });

  auto* zernike_cmd = app.add_subcommand("zernike", "Print Zernike moments of a grayscale image as CSV");
  fs::path zernike_image;
  std::string zernike_indices;
  zernike_cmd->add_option("--image", zernike_image, "PNG or PGM image; intensities scaled to [0,1]")->required();
  zernike_cmd->add_option("--indices", zernike_indices, "Index list such as 5:1,5:3,5:5 (default: from config)");
  zernike_cmd->callback([&] { rc = cmd_zernike(g, zernike_image, zernike_indices); });

  auto* aesi_cmd = app.add_subcommand("build-aesi", "Build the AESI of one sequence and export it as PNG");
  fs::path aesi_seq, aesi_out;
  bool aesi_parts = false;
  aesi_cmd->add_option("--sequence", aesi_seq, "Directory of frames")->required();
  aesi_cmd->add_option("--out", aesi_out, "Output PNG")->required();
  aesi_cmd->add_flag("--parts", aesi_parts, "Also write the four part images next to the output");
  aesi_cmd->callback([&] { rc = cmd_build_aesi(g, aesi_seq, aesi_out, aesi_parts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return rc;
}
