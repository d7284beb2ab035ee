#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

namespace gaitlab {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("gaitlab_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write_frames(const fs::path& dir, std::vector<int> indices, int pad = 4) {
    fs::create_directories(dir);
    for (int i : indices) {
      GrayImage img(6, 8);
      for (int r = 2; r < 7; ++r) img(r, 2) = img(r, 3) = 255;
      img(0, 0) = 100;
      std::string digits = std::to_string(i);
      digits.insert(0, static_cast<std::size_t>(std::max(0, pad - static_cast<int>(digits.size()))), '0');
      write_png(dir / (digits + ".png"), img);
    }
  }

  fs::path dir_;
};

TEST_F(TempDir, PngRoundTrip) {
  GrayImage img(5, 3);
  for (std::size_t i = 0; i < img.size(); ++i) img.values()[i] = static_cast<std::uint8_t>(i * 17);
  write_png(dir_ / "a.png", img);
  EXPECT_EQ(read_gray_image(dir_ / "a.png"), img);
}

TEST_F(TempDir, PgmBinaryAndAscii) {
  {
    std::ofstream out(dir_ / "b.pgm", std::ios::binary);
    out << "P5\n# comment\n3 2\n255\n";
    const unsigned char px[] = {0, 255, 10, 200, 128, 127};
    out.write(reinterpret_cast<const char*>(px), sizeof px);
  }
  const auto b = read_gray_image(dir_ / "b.pgm");
  ASSERT_EQ(b.width(), 3);
  EXPECT_EQ(b(1, 0), 200);
  const auto mask = threshold_mask(b);
  EXPECT_EQ(mask.data(), (std::vector<std::uint8_t>{0, 1, 0, 1, 1, 0}));
  {
    std::ofstream out(dir_ / "c.pgm");
    out << "P2\n2 2\n255\n0 255\n255 0\n";
  }
  EXPECT_EQ(read_gray_image(dir_ / "c.pgm").data(), (std::vector<std::uint8_t>{0, 255, 255, 0}));
}

TEST_F(TempDir, MissingImage) { EXPECT_THROW_KIND(read_gray_image(dir_ / "none.png"), Io); }

TEST_F(TempDir, LoadSequence) {
  std::vector<int> idx(40);
  std::iota(idx.begin(), idx.end(), 0);
  write_frames(dir_ / "s1" / "a", idx);
  const auto seq = load_sequence(dir_ / "s1" / "a", {"s1", "a", "normal", {}, {}});
  EXPECT_EQ(seq.frames.size(), 40u);
  EXPECT_EQ(seq.frames[0](3, 2), 1);
  EXPECT_EQ(seq.frames[0](0, 0), 0);
  for (auto v : seq.frames[5].values()) EXPECT_LE(v, 1);
}

TEST_F(TempDir, LoadSequenceErrors) {
  write_frames(dir_ / "gap", {0, 1, 3});
  EXPECT_THROW_KIND(load_sequence(dir_ / "gap", {"s", "gap", "normal", {}, {}}), Manifest);

  write_frames(dir_ / "short", {0, 1, 2});
  ManifestEntry e{"s", "short", "normal", {}, {}};
  e.frames = 5;
  try {
    load_sequence(dir_ / "short", e);
    FAIL() << "expected an error";
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::Io);
    EXPECT_NE(std::string(err.what()).find("0003.png"), std::string::npos) << err.what();
  }

  fs::create_directories(dir_ / "bad");
  write_png(dir_ / "bad" / "frame.png", GrayImage(2, 2));
  EXPECT_THROW_KIND(load_sequence(dir_ / "bad", {"s", "bad", "normal", {}, {}}), Manifest);
  EXPECT_THROW_KIND(load_sequence(dir_ / "absent", {"s", "absent", "normal", {}, {}}), Io);
}

TEST_F(TempDir, ManifestRoundTrip) {
  std::vector<ManifestEntry> entries = {{"s1", "nm-01", "normal", Role::Gallery, 30}, {"s2", "cl-01", "coat", Role::Probe, {}},
                                        {"s3", "x", "normal", {}, {}}};
  write_manifest(dir_, entries);
  const auto back = read_manifest(dir_);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0].role, Role::Gallery);
  EXPECT_EQ(back[0].frames, 30);
  EXPECT_EQ(back[1].condition, "coat");
  EXPECT_FALSE(back[2].role.has_value());
}

TEST(Manifest, Errors) {
  EXPECT_THROW_KIND(parse_manifest(nlohmann::json::object()), Manifest);
  EXPECT_THROW_KIND(parse_manifest(nlohmann::json::parse(R"([{"subject":"a"}])")), Manifest);
  EXPECT_THROW_KIND(parse_manifest(nlohmann::json::parse(R"([{"subject":"a","sequence":"b","role":"judge"}])")), Manifest);
  EXPECT_THROW_KIND(read_manifest("/nonexistent/root"), Io);
}

GalleryMomentDb sample_db() {
  std::vector<std::pair<std::string, PartAesiSet>> g;
  for (int i = 0; i < 3; ++i)
    g.emplace_back("s" + std::to_string(i) + "/nm", segment_parts(test::random_image(17, 40, static_cast<std::uint64_t>(i))));
  return compute_part_stats(build_moment_db(g));
}

TEST(Serialization, MomentDbRoundTrip) {
  const auto db = sample_db();
  const auto text = moment_db_to_string(db, "abc123");
  std::istringstream in(text);
  const auto back = read_moment_db(in);
  EXPECT_EQ(back.config_hash, "abc123");
  EXPECT_EQ(back.db, db);
  EXPECT_EQ(moment_db_to_string(back.db, back.config_hash), text);
}

TEST(Serialization, ModelBankRoundTrip) {
  Rng rng(4);
  ModelBank bank;
  for (std::uint8_t bits : {1, 6, 15}) {
    std::vector<FusedFeature> f;
    std::vector<std::string> y;
    for (int i = 0; i < 6; ++i) {
      FusedFeature ff{{}, PartSet(bits)};
      for (int d = 0; d < 5; ++d) ff.values.push_back(rng.uniform(-1, 1) + (i % 3));
      f.push_back(ff);
      y.push_back("subj" + std::to_string(i % 3));
    }
    bank.insert(train_ovr_svm(f, y));
  }
  const auto text = model_bank_to_string(bank, "feed");
  std::istringstream in(text);
  const auto back = read_model_bank(in);
  EXPECT_EQ(back.config_hash, "feed");
  EXPECT_EQ(back.bank, bank);
  EXPECT_EQ(model_bank_to_string(back.bank, back.config_hash), text);
}

TEST(Serialization, RealsAreExact) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, -0.0, 5e-324}) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(parse_real(format_real(v))), std::bit_cast<std::uint64_t>(v)) << v;
  }
}

TEST(Serialization, Malformed) {
  std::istringstream a("NOT-A-HEADER\n");
  EXPECT_THROW_KIND(read_moment_db(a), Format);
  std::istringstream b(std::string(kMomentDbHeader) + "\nINDEX,5,1\nNeck,s,5,1,x,0\n");
  EXPECT_THROW_KIND(read_moment_db(b), Format);
  std::istringstream c(std::string(kModelBankHeader) + "\nCONFIG,x\nMODEL,3,2,1\nCLASSES,a\nMEAN,0\nSTD,1\n");
  EXPECT_THROW_KIND(read_model_bank(c), Format);
  EXPECT_THROW_KIND(read_model_bank_file("/nonexistent/bank.txt"), Io);
}

TEST(Config, DefaultsAndParse) {
  std::istringstream in(
      "# comment\nk_sigma = 2.5\nzernike_indices = 5:1, 5:3\nmoment_mode = magnitude\nscreening = off\n"
      "sdog_levels = 0,1\nseed = 9\n");
  const auto c = parse_config(in);
  EXPECT_EQ(c.k_sigma, 2.5);
  EXPECT_EQ(c.zernike_indices, (std::vector<ZernikeIndex>{{5, 1}, {5, 3}}));
  EXPECT_EQ(c.moment_mode, MomentMode::Magnitude);
  EXPECT_FALSE(c.screening);
  EXPECT_EQ(c.sdog.levels, (std::vector<int>{0, 1}));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.svm.seed, 9u);
}

TEST(Config, TextRoundTripAndHash) {
  PipelineConfig c;
  c.k_sigma = 2.75;
  c.svm.c = 0.1;
  std::istringstream in(config_text(c));
  const auto back = parse_config(in);
  EXPECT_EQ(config_text(back), config_text(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
  auto reseeded = c;
  reseeded.seed = 77;
  EXPECT_EQ(config_hash(reseeded), config_hash(c));
  auto other = c;
  other.zernike_indices = {{4, 2}};
  EXPECT_NE(config_hash(other), config_hash(c));
}

TEST(Config, Errors) {
  std::istringstream unknown("colour = blue\n");
  EXPECT_THROW_KIND(parse_config(unknown), Parameter);
  std::istringstream even("smoothing_window = 4\n");
  EXPECT_THROW_KIND(parse_config(even), Parameter);
  std::istringstream bad_index("zernike_indices = 5:2\n");
  EXPECT_THROW_KIND(parse_config(bad_index), Parameter);
  std::istringstream no_eq("k_sigma 3\n");
  EXPECT_THROW_KIND(parse_config(no_eq), Parameter);
}

TEST(RandomTest, SeededAndForked) {
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const int k = c.uniform_int(2, 4);
    EXPECT_GE(k, 2);
    EXPECT_LE(k, 4);
  }
  Rng d(5), e(5);
  EXPECT_EQ(d.fork(1).next(), e.fork(1).next());
  Rng f(5);
  EXPECT_NE(f.fork(1).next(), Rng(5).fork(2).next());
}

TEST(Parallel, CoversEveryIndexAndRethrows) {
  std::vector<int> hit(100, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw Error(ErrorKind::Parameter, "boom");
               }),
               Error);
}

}  // namespace
}  // namespace gaitlab
