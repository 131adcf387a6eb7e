#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>

#include "lslrr/error.hpp"
#include "lslrr/io.hpp"
#include "lslrr/run.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using lslrr::Index;
using lslrr::Matrix;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lslrr_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void write_text(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  fs::path dir_;
};

}  // namespace

TEST(MatrixFile, HeaderLayoutIsBitExact) {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const std::string bytes = lslrr::io::encode_matrix(m);
  ASSERT_EQ(bytes.size(), 32u + 6u * 8u);
  EXPECT_EQ(bytes.substr(0, 8), "LSLRRMAT");
  const unsigned char* u = reinterpret_cast<const unsigned char*>(bytes.data());
  EXPECT_EQ(u[8], 1);  // version, little-endian
  EXPECT_EQ(u[9] | u[10] | u[11], 0);
  EXPECT_EQ(u[12], 1);  // dtype f64
  EXPECT_EQ(u[16], 2);  // rows
  EXPECT_EQ(u[24], 3);  // cols
  // payload is row-major: the second stored value is m(0, 1) = 2.0
  double second;
  std::memcpy(&second, bytes.data() + 40, 8);
  EXPECT_EQ(second, 2.0);
}

TEST(MatrixFile, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(1);
  Matrix m = oracle::random_matrix(rng, 7, 5, 1e3);
  m(0, 0) = -0.0;
  m(1, 1) = 1e-310;
  const Matrix back = lslrr::io::decode_matrix(lslrr::io::encode_matrix(m));
  ASSERT_EQ(back.rows(), 7);
  EXPECT_EQ(std::memcmp(back.data(), m.data(), sizeof(double) * 35), 0);
}

TEST(MatrixFile, RejectsCorruptHeaders) {
  const std::string good = lslrr::io::encode_matrix(Matrix::Ones(2, 2));
  EXPECT_THROW(lslrr::io::decode_matrix(good.substr(0, good.size() - 1)), lslrr::LoadError);
  EXPECT_THROW(lslrr::io::decode_matrix(good.substr(0, 20)), lslrr::LoadError);
  EXPECT_THROW(lslrr::io::decode_matrix(good + "x"), lslrr::LoadError);
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(lslrr::io::decode_matrix(bad_magic), lslrr::LoadError);
  std::string bad_version = good;
  bad_version[8] = 2;
  EXPECT_THROW(lslrr::io::decode_matrix(bad_version), lslrr::LoadError);
  try {
    lslrr::io::decode_matrix(good.substr(0, good.size() - 1), "m.bin");
    FAIL();
  } catch (const lslrr::LoadError& e) {
    EXPECT_EQ(e.path(), "m.bin");
    EXPECT_EQ(e.offset(), good.size() - 1);
  }
}

TEST(MatrixCsv, ParsesPlainRows) {
  Matrix expected(2, 3);
  expected << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(lslrr::io::parse_matrix_csv("1,2,3\n4,5,6"), expected);
  EXPECT_EQ(lslrr::io::parse_matrix_csv("1, 2,3\r\n4,5,6\n\n"), expected);
}

TEST(MatrixCsv, ReportsBadLines) {
  try {
    lslrr::io::parse_matrix_csv("1,2\n3,x\n", "a.csv");
    FAIL();
  } catch (const lslrr::LoadError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  EXPECT_THROW(lslrr::io::parse_matrix_csv("1,2\n3\n"), lslrr::LoadError);
}

TEST_F(IoTest, CsvAndBinaryDispatch) {
  std::mt19937_64 rng(2);
  const Matrix m = oracle::random_matrix(rng, 3, 4);
  lslrr::io::write_matrix(path("m.csv"), m);
  lslrr::io::write_matrix(path("m.mat"), m);
  EXPECT_EQ(lslrr::io::read_matrix(path("m.csv")), m);
  EXPECT_EQ(lslrr::io::read_matrix(path("m.mat")), m);
  EXPECT_EQ(lslrr::io::read_file(path("m.csv")).find("LSLRRMAT"), std::string::npos);
}

TEST_F(IoTest, LabelsRoundTripAndValidation) {
  lslrr::io::write_labels(path("l.txt"), {3, 0, 1, 2});
  EXPECT_EQ(lslrr::io::read_labels(path("l.txt")), (std::vector<int>{3, 0, 1, 2}));
  write_text("comma.txt", "1,2,\n3\n");
  EXPECT_EQ(lslrr::io::read_labels(path("comma.txt")), (std::vector<int>{1, 2, 3}));
  write_text("bad.txt", "1\n2.5\n");
  EXPECT_THROW(lslrr::io::read_labels(path("bad.txt")), lslrr::LoadError);
}

TEST_F(IoTest, DatasetShapesAreChecked) {
  write_text("s.csv", "1,2,3\n4,5,6\n");
  write_text("c.csv", "0,0,1\n0,1,0\n");
  write_text("l.txt", "1\n1\n2\n");
  const auto ds = lslrr::io::read_dataset(path("s.csv"), path("c.csv"), path("l.txt"));
  EXPECT_EQ(ds.band_count(), 2);
  EXPECT_EQ(ds.pixel_count(), 3);
  EXPECT_EQ(ds.class_count, 2);
  EXPECT_FALSE(lslrr::io::read_dataset(path("s.csv"), path("c.csv")).has_labels());

  write_text("c3.csv", "0,0,1\n0,1,0\n0,0,0\n");
  EXPECT_THROW(lslrr::io::read_dataset(path("s.csv"), path("c3.csv")), lslrr::LoadError);
  write_text("c2.csv", "0,0\n0,1\n");
  EXPECT_THROW(lslrr::io::read_dataset(path("s.csv"), path("c2.csv")), lslrr::LoadError);
  write_text("l2.txt", "1\n2\n");
  EXPECT_THROW(lslrr::io::read_dataset(path("s.csv"), path("c.csv"), path("l2.txt")), lslrr::LoadError);
  EXPECT_THROW(lslrr::io::read_dataset(path("missing.mat"), path("c.csv")), lslrr::LoadError);
}

TEST_F(IoTest, SplitRoundTrip) {
  lslrr::Split split;
  split.train_indices = {{0, 4}, {2}};
  split.class_sizes = {2, 1};
  split.test_indices = {1, 3, 5};
  const std::vector<int> labels{1, 2, 2, 1, 1, 2};
  lslrr::io::write_split(path("s.txt"), split, labels);
  EXPECT_EQ(lslrr::io::read_file(path("s.txt")), "0,1,1\n4,1,1\n2,2,1\n1,2,0\n3,1,0\n5,2,0\n");
  const auto back = lslrr::io::read_split(path("s.txt"));
  EXPECT_EQ(back.split.train_indices, split.train_indices);
  EXPECT_EQ(back.split.test_indices, split.test_indices);
  EXPECT_EQ(back.split.class_sizes, split.class_sizes);
  EXPECT_EQ(back.test_labels, (std::vector<int>{2, 1, 2}));
}

TEST_F(IoTest, SplitRejectsMalformedLines) {
  write_text("a.txt", "0,1\n");
  EXPECT_THROW(lslrr::io::read_split(path("a.txt")), lslrr::LoadError);
  write_text("b.txt", "0,1,1\n1,x,0\n");
  EXPECT_THROW(lslrr::io::read_split(path("b.txt")), lslrr::LoadError);
}

TEST(ClassificationMap, SingleBlackPixel) {
  const std::string ppm = lslrr::io::encode_classification_map({0}, 1, 1);
  EXPECT_EQ(ppm, std::string("P6\n1 1\n255\n") + std::string(3, '\0'));
}

TEST(ClassificationMap, TwoBands) {
  const std::string ppm = lslrr::io::encode_classification_map({1, 1, 2, 2}, 2, 2);
  const std::string header = "P6\n2 2\n255\n";
  ASSERT_EQ(ppm.substr(0, header.size()), header);
  const std::string body = ppm.substr(header.size());
  ASSERT_EQ(body.size(), 12u);
  std::set<std::string> colors;
  for (std::size_t p = 0; p < 4; ++p) colors.insert(body.substr(3 * p, 3));
  EXPECT_EQ(colors.size(), 2u);
  EXPECT_EQ(colors.count(std::string(3, '\0')), 0u);
  EXPECT_EQ(body.substr(0, 3), body.substr(3, 3));
  EXPECT_NE(body.substr(0, 3), body.substr(6, 3));
}

TEST(ClassificationMap, PaletteHasSixteenDistinctColours) {
  std::vector<int> labels(17);
  for (int k = 0; k < 17; ++k) labels[static_cast<std::size_t>(k)] = k;
  const std::string ppm = lslrr::io::encode_classification_map(labels, 1, 17);
  const std::string body = ppm.substr(ppm.size() - 51);
  std::set<std::string> colors;
  for (std::size_t p = 0; p < 17; ++p) colors.insert(body.substr(3 * p, 3));
  EXPECT_EQ(colors.size(), 17u);
  EXPECT_THROW(lslrr::io::encode_classification_map({1, 2}, 2, 2), lslrr::InvalidInputError);
}

TEST_F(IoTest, MapFileIsReproducible) {
  const std::vector<int> labels{1, 2, 3, 0, 4, 5};
  lslrr::io::write_classification_map(labels, 2, 3, path("a.ppm"));
  lslrr::io::write_classification_map(labels, 2, 3, path("b.ppm"));
  EXPECT_EQ(lslrr::io::read_file(path("a.ppm")), lslrr::io::read_file(path("b.ppm")));
}

TEST_F(IoTest, AtomicWriteLeavesNoTemporaries) {
  lslrr::io::write_file_atomic(path("out.txt"), "first");
  lslrr::io::write_file_atomic(path("out.txt"), "second");
  EXPECT_EQ(lslrr::io::read_file(path("out.txt")), "second");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir_)) ++entries;
  EXPECT_EQ(entries, 1);
  EXPECT_THROW(lslrr::io::write_file_atomic(dir_ / "no_such_dir" / "x", "y"), lslrr::IoError);
}

TEST(Trace, CsvColumns) {
  lslrr::IterationRecord r;
  r.iteration = 3;
  r.mu = 0.5;
  r.residuals.reconstruction = 1.0;
  r.residuals.column_sum = 0.25;
  const std::string csv = lslrr::io::encode_trace({r});
  EXPECT_EQ(csv,
            "iteration,mu,reconstruction,z_minus_j,h_minus_z,dictionary_change,column_sum\n"
            "3,0.5,1,0,0,0,0.25\n");
}

TEST(Digest, KnownSha256) {
  // SHA-256 of the empty label list equals SHA-256("").
  EXPECT_EQ(lslrr::io::digest(std::vector<int>{}),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_NE(lslrr::io::digest(Matrix::Zero(1, 2)), lslrr::io::digest(Matrix::Zero(2, 1)));
}

TEST(Manifest, EncodeParseRoundTrip) {
  lslrr::Manifest m;
  m.set("format", "lslrr-manifest-1");
  m.set("x", 0.1);
  m.set("n", "42");
  const auto back = lslrr::Manifest::parse(m.encode());
  EXPECT_EQ(back.entries(), m.entries());
  EXPECT_EQ(back.get_double("x"), 0.1);
  EXPECT_EQ(back.get_int("n"), 42);
  EXPECT_THROW(back.get("missing"), lslrr::LoadError);
  EXPECT_THROW(back.get_int("x"), lslrr::LoadError);
}

TEST(Manifest, RejectsDuplicatesAndGarbage) {
  EXPECT_THROW(lslrr::Manifest::parse("a=1\na=2\n"), lslrr::LoadError);
  EXPECT_THROW(lslrr::Manifest::parse("a=1\nnot a pair\n"), lslrr::LoadError);
}

TEST(Manifest, ConfigEchoHasEveryFieldOnce) {
  lslrr::SolverConfig cfg;
  cfg.sigma = 0.125;
  cfg.max_iter = 77;
  cfg.column_sum_constraint = false;
  lslrr::Manifest m;
  lslrr::put_config(m, cfg);
  EXPECT_EQ(m.entries().size(), 14u);
  const auto back = lslrr::config_from_manifest(lslrr::Manifest::parse(m.encode()));
  EXPECT_EQ(back.lambda, cfg.lambda);
  EXPECT_EQ(back.mu0, cfg.mu0);
  EXPECT_EQ(back.sigma, cfg.sigma);
  EXPECT_FALSE(back.theta.has_value());
  EXPECT_EQ(back.max_iter, 77);
  EXPECT_FALSE(back.column_sum_constraint);
  EXPECT_TRUE(back.dictionary_learning);
}

TEST(RunPipeline, ManifestReplaysExactly) {
  lslrr::RunRequest req;
  req.synthetic.pixels_per_class = 20;
  req.config.dictionary_learning = false;
  const auto first = lslrr::run_pipeline(req);
  EXPECT_TRUE(first.manifest.has("result.oa"));
  EXPECT_TRUE(first.manifest.has("result.wall_time_seconds"));
  const auto replay =
      lslrr::run_pipeline(lslrr::request_from_manifest(lslrr::Manifest::parse(first.manifest.encode())));
  EXPECT_EQ(replay.result.report.overall_accuracy, first.result.report.overall_accuracy);
  EXPECT_EQ(replay.result.solution.Z, first.result.solution.Z);
  EXPECT_EQ(replay.manifest.get("digest.spectra"), first.manifest.get("digest.spectra"));
  EXPECT_EQ(static_cast<Index>(first.label_map.size()), first.map_rows * first.map_cols);
}
