#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swad/labeled_set.hpp"
#include "swad/matrix.hpp"
#include "swad/rng.hpp"

namespace swad {

// Features with integer class labels, as read from disk.
struct RawDataset {
  Matrix features;
  std::vector<int> class_labels;
  std::string source;

  std::size_t size() const noexcept { return features.rows(); }
};

// MNIST-style IDX pair (images 0x00000803, labels 0x00000801, big-endian
// header). Files may be gzip-compressed. Pixels are flattened row-major and
// divided by 255.
RawDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

// Writes an uncompressed IDX pair. Features are multiplied by 255 and rounded,
// so data read with load_idx round-trips exactly.
void write_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
               const RawDataset& data, std::uint32_t image_rows, std::uint32_t image_cols);

// Rectangular numeric CSV with a header row. `label_column` names an integer
// column; the remaining columns become features, unscaled.
RawDataset load_csv(const std::filesystem::path& path, const std::string& label_column);

// CIFAR-10 binary batches (1 label byte + 3072 channel-major pixel bytes per
// record), concatenated in the given order, scaled by 1/255.
RawDataset load_cifar10(const std::vector<std::filesystem::path>& batches);

// Labeled toy data: every class is a 3-dimensional sigmoid manifold
// x = sigmoid(A_c u + b_c), u ~ U(0,1)^3, in `dim` dimensions. Class
// parameters depend on `rng` only, so train and test draws made from child
// streams share them. Labels cycle 0..classes-1.
RawDataset make_synthetic(std::size_t samples, std::size_t dim, std::size_t classes,
                          const Rng& class_rng, Rng& sample_rng);

// Per-feature affine transform x' = (x - offset) * scale.
struct Normalization {
  std::string kind = "identity";  // identity | minmax
  std::vector<double> offset;
  std::vector<double> scale;

  Matrix apply(const Matrix& x) const;
  nlohmann::json to_json() const;
};

enum class NormalizationKind { kIdentity, kMinMax };

// Min-max over `x`; constant columns get scale 1.
Normalization fit_minmax(const Matrix& x);

// One-class experiment partitions. Indices point into the source dataset(s)
// the split was built from.
struct OneClassSplit {
  Matrix train_x;  // normal samples only
  LabeledSet validation;
  LabeledSet test;
  int normal_class = 0;
  double val_fraction = 0.0;
  std::uint64_t seed = 0;
  Normalization normalization;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;
  std::vector<std::size_t> test_indices;
  bool canonical_test = false;  // test indices refer to a separate test file
};

// Benchmark protocol with canonical train/test files: a val_fraction slice of
// the normal training samples is held out and joined by as many abnormal
// training samples; the whole test file becomes the test partition.
OneClassSplit make_one_class_split(const RawDataset& train, const RawDataset& test,
                                   int normal_class, double val_fraction, const Rng& rng,
                                   NormalizationKind normalization = NormalizationKind::kIdentity);

// Single-file variant: normals are divided into train / validation / test
// (test_fraction of them go to test), abnormals into an equal-count
// validation draw and the test remainder.
OneClassSplit make_one_class_split(const RawDataset& data, int normal_class, double val_fraction,
                                   double test_fraction, const Rng& rng,
                                   NormalizationKind normalization = NormalizationKind::kMinMax);

// Seed, class, sizes and a SHA-256 of every partition.
nlohmann::json split_manifest(const OneClassSplit& split);

}  // namespace swad
