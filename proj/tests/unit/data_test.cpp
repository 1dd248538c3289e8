#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "swad/data.hpp"
#include "swad/error.hpp"
#include "swad/hash.hpp"

namespace fs = std::filesystem;

namespace swad {
namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("swad_data_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& bytes) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << bytes;
    return p;
  }

  fs::path dir_;
};

std::string be32(std::uint32_t v) {
  return {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
          static_cast<char>(v)};
}

// Hand-assembled IDX pair: `n` images of rows x cols, every pixel `pixel`.
std::pair<std::string, std::string> idx_bytes(std::uint32_t n, std::uint32_t rows,
                                              std::uint32_t cols, unsigned char pixel) {
  std::string img = be32(0x803) + be32(n) + be32(rows) + be32(cols) +
                    std::string(n * rows * cols, static_cast<char>(pixel));
  std::string lab = be32(0x801) + be32(n);
  for (std::uint32_t i = 0; i < n; ++i) lab.push_back(static_cast<char>(i % 10));
  return {img, lab};
}

using IdxTest = TempDir;

TEST_F(IdxTest, SaturatedPixelsScaleToOne) {
  const auto [img, lab] = idx_bytes(3, 2, 2, 255);
  const auto d = load_idx(write("i", img), write("l", lab));
  EXPECT_EQ(d.features.shape_string(), "3x4");
  for (double v : d.features.data()) EXPECT_EQ(v, 1.0);
  EXPECT_EQ(d.class_labels, (std::vector<int>{0, 1, 2}));
}

TEST_F(IdxTest, BadMagicIsNamed) {
  auto [img, lab] = idx_bytes(2, 2, 2, 0);
  img[3] = 0x04;
  try {
    load_idx(write("i", img), write("l", lab));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("0x00000804"), std::string::npos) << e.what();
  }
}

TEST_F(IdxTest, TruncationAndCountMismatchAreErrors) {
  auto [img, lab] = idx_bytes(2, 2, 2, 0);
  EXPECT_THROW(load_idx(write("i", img.substr(0, img.size() - 1)), write("l", lab)), DataError);
  EXPECT_THROW(load_idx(write("i", img.substr(0, 10)), write("l", lab)), DataError);
  const auto [img3, lab3] = idx_bytes(3, 2, 2, 0);
  EXPECT_THROW(load_idx(write("i", img), write("l", lab3)), DataError);
  EXPECT_THROW(load_idx(dir_ / "missing", dir_ / "missing"), DataError);
}

TEST_F(IdxTest, WriteThenLoadRoundTrips) {
  RawDataset d{Matrix{{0, 1, 128.0 / 255, 7.0 / 255}, {1, 1, 0, 0}}, {4, 9}, ""};
  write_idx(dir_ / "i", dir_ / "l", d, 2, 2);
  const auto back = load_idx(dir_ / "i", dir_ / "l");
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.class_labels, d.class_labels);
  EXPECT_THROW(write_idx(dir_ / "i", dir_ / "l", d, 3, 2), DimensionError);
}

TEST(BundledSubset, HasFourHundredTrainAndOneHundredTestImagesPerDigit) {
  const fs::path root = fs::path(SWAD_SOURCE_DIR) / "data" / "mnist-5k";
  if (!fs::exists(root / "train-images-idx3-ubyte.gz")) GTEST_SKIP() << "subset not generated";
  const auto train = load_idx(root / "train-images-idx3-ubyte.gz", root / "train-labels-idx1-ubyte.gz");
  const auto test = load_idx(root / "t10k-images-idx3-ubyte.gz", root / "t10k-labels-idx1-ubyte.gz");
  EXPECT_EQ(train.features.shape_string(), "4000x784");
  EXPECT_EQ(test.features.shape_string(), "1000x784");
  for (int c = 0; c < 10; ++c) {
    EXPECT_EQ(std::count(train.class_labels.begin(), train.class_labels.end(), c), 400);
    EXPECT_EQ(std::count(test.class_labels.begin(), test.class_labels.end(), c), 100);
  }
}

using CsvTest = TempDir;

TEST_F(CsvTest, ParsesQuotedHeadersAndPicksTheLabelColumn) {
  const auto d = load_csv(write("a.csv", "\"x,1\",label,x2\n1.5,0,-2\n3,1,4e-1\n"), "label");
  EXPECT_EQ(d.features, (Matrix{{1.5, -2}, {3, 0.4}}));
  EXPECT_EQ(d.class_labels, (std::vector<int>{0, 1}));
}

TEST_F(CsvTest, RejectsMalformedFiles) {
  EXPECT_THROW(load_csv(write("r.csv", "a,label\n1,0\n2\n"), "label"), DataError);
  EXPECT_THROW(load_csv(write("n.csv", "a,label\nabc,0\n"), "label"), DataError);
  EXPECT_THROW(load_csv(write("l.csv", "a,label\n1,0.5\n"), "label"), DataError);
  EXPECT_THROW(load_csv(write("m.csv", "a,b\n1,0\n"), "label"), DataError);
  EXPECT_THROW(load_csv(write("e.csv", ""), "label"), DataError);
  EXPECT_THROW(load_csv(write("h.csv", "a,label\n"), "label"), DataError);
}

using CifarTest = TempDir;

TEST_F(CifarTest, ReadsChannelMajorRecords) {
  std::string bytes;
  for (int rec = 0; rec < 2; ++rec) {
    bytes.push_back(static_cast<char>(rec == 0 ? 3 : 7));
    for (int i = 0; i < 3072; ++i) bytes.push_back(static_cast<char>(i < 1024 ? 255 : 0));
  }
  const auto d = load_cifar10({write("b.bin", bytes)});
  EXPECT_EQ(d.features.shape_string(), "2x3072");
  EXPECT_EQ(d.class_labels, (std::vector<int>{3, 7}));
  EXPECT_EQ(d.features(1, 1023), 1.0);
  EXPECT_EQ(d.features(1, 1024), 0.0);
  EXPECT_THROW(load_cifar10({write("c.bin", bytes.substr(1))}), DataError);
}

RawDataset labeled_blocks(std::size_t per_class, std::size_t classes, double offset) {
  RawDataset d;
  d.features = Matrix(per_class * classes, 2);
  for (std::size_t i = 0; i < per_class * classes; ++i) {
    d.class_labels.push_back(static_cast<int>(i % classes));
    d.features(i, 0) = static_cast<double>(i) + offset;  // unique row id
    d.features(i, 1) = static_cast<double>(i % classes);
  }
  return d;
}

TEST(OneClassSplit, CanonicalProtocolCountsAndPurity) {
  const auto train = labeled_blocks(50, 5, 0.0);
  const auto test = labeled_blocks(10, 5, 0.5);
  const auto s = make_one_class_split(train, test, 2, 0.1, Rng(3));
  // 50 normals: 5 held out, 45 left
  EXPECT_EQ(s.train_x.rows(), 45u);
  for (std::size_t i = 0; i < s.train_x.rows(); ++i) EXPECT_EQ(s.train_x(i, 1), 2.0);
  EXPECT_EQ(s.validation.x.rows(), 10u);
  EXPECT_EQ(std::count(s.validation.y.begin(), s.validation.y.end(), 1), 5);
  for (std::size_t i = 0; i < s.validation.x.rows(); ++i)
    EXPECT_EQ(s.validation.y[i], s.validation.x(i, 1) == 2.0 ? 0 : 1);
  EXPECT_EQ(s.test.x.rows(), 50u);
  EXPECT_EQ(std::count(s.test.y.begin(), s.test.y.end(), 0), 10);
  EXPECT_TRUE(s.canonical_test);
}

TEST(OneClassSplit, PartitionsAreDisjointAndDeterministic) {
  const auto data = labeled_blocks(40, 4, 0.0);
  const auto a = make_one_class_split(data, 1, 0.25, 0.25, Rng(5), NormalizationKind::kIdentity);
  std::set<std::size_t> seen;
  for (const auto* part : {&a.train_indices, &a.val_indices, &a.test_indices})
    for (std::size_t i : *part) EXPECT_TRUE(seen.insert(i).second) << "index " << i << " reused";
  EXPECT_EQ(seen.size(), data.size());

  const auto b = make_one_class_split(data, 1, 0.25, 0.25, Rng(5), NormalizationKind::kIdentity);
  EXPECT_EQ(a.train_x, b.train_x);
  EXPECT_EQ(a.val_indices, b.val_indices);
  const auto c = make_one_class_split(data, 1, 0.25, 0.25, Rng(6), NormalizationKind::kIdentity);
  EXPECT_NE(a.train_indices, c.train_indices);
}

TEST(OneClassSplit, MinMaxIsFittedOnTrainingRowsOnly) {
  const auto data = labeled_blocks(30, 3, 0.0);
  const auto s = make_one_class_split(data, 0, 0.2, 0.2, Rng(1));
  ASSERT_EQ(s.normalization.kind, "minmax");
  const Matrix raw_train = gather_rows(data.features, s.train_indices);
  double lo = raw_train(0, 0), hi = raw_train(0, 0);
  for (std::size_t i = 0; i < raw_train.rows(); ++i) {
    lo = std::min(lo, raw_train(i, 0));
    hi = std::max(hi, raw_train(i, 0));
  }
  for (std::size_t i = 0; i < raw_train.rows(); ++i)
    EXPECT_DOUBLE_EQ(s.train_x(i, 0), (raw_train(i, 0) - lo) / (hi - lo));
  // constant column keeps unit scale
  EXPECT_EQ(s.normalization.scale[1], 1.0);
  EXPECT_EQ(s.normalization.apply(gather_rows(data.features, s.test_indices)), s.test.x);
}

TEST(OneClassSplit, RejectsImpossibleRequests) {
  const auto data = labeled_blocks(20, 2, 0.0);
  EXPECT_THROW(make_one_class_split(data, data, 7, 0.1, Rng(1)), ValueError);
  EXPECT_THROW(make_one_class_split(data, data, 0, 0.0, Rng(1)), ValueError);
  EXPECT_THROW(make_one_class_split(data, data, 0, 0.6, Rng(1)), ValueError);
  // 1 abnormal sample cannot match 2 held-out normals
  RawDataset skewed = labeled_blocks(20, 1, 0.0);
  skewed.features = vstack(skewed.features, Matrix{{99, 1}});
  skewed.class_labels.push_back(1);
  EXPECT_THROW(make_one_class_split(skewed, data, 0, 0.1, Rng(1)), ValueError);
  EXPECT_THROW(make_one_class_split(data, 0, 0.5, 0.5, Rng(1), NormalizationKind::kIdentity),
               ValueError);
}

TEST(Sha256, KnownAnswer) {
  const std::string abc = "abc";
  EXPECT_EQ(sha256_hex(std::as_bytes(std::span(abc.data(), abc.size()))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  // 1.0 is 0x3FF0000000000000, stored low byte first
  const double one = 1.0;
  const auto bytes = to_le_bytes(std::span(&one, 1));
  EXPECT_EQ(bytes[7], std::byte{0x3f});
  EXPECT_EQ(bytes[6], std::byte{0xf0});
  EXPECT_EQ(bytes[0], std::byte{0x00});
}

TEST(SplitManifest, HashesMatchThePartitions) {
  const auto train = labeled_blocks(30, 3, 0.0);
  const auto s = make_one_class_split(train, train, 1, 0.1, Rng(2));
  const auto m = split_manifest(s);
  const auto bytes = to_le_bytes(s.train_x.data());
  EXPECT_EQ(m["partitions"]["train"]["sha256"], sha256_hex(bytes));
  EXPECT_EQ(m["partitions"]["validation"]["abnormal"], 3);
  EXPECT_EQ(m["seed"], 2);
  EXPECT_EQ(m["normal_class"], 1);
}

TEST(Synthetic, ClassesShareParametersAcrossDraws) {
  const Rng classes(4);
  Rng a(1), b(2);
  const auto x = make_synthetic(30, 6, 3, classes, a);
  const auto y = make_synthetic(30, 6, 3, classes, b);
  EXPECT_EQ(x.features.shape_string(), "30x6");
  EXPECT_EQ(x.class_labels[4], 1);
  EXPECT_NE(x.features, y.features);
  for (double v : x.features.data()) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

}  // namespace
}  // namespace swad
