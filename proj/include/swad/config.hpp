#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "swad/autoencoder.hpp"
#include "swad/feature_mask.hpp"

namespace swad {

// Where the data comes from and how the one-class split is built.
struct DatasetSpec {
  std::string kind = "mnist";  // mnist | cifar10 | csv | synthetic
  std::filesystem::path train_images, train_labels, test_images, test_labels;
  std::vector<std::filesystem::path> cifar_train, cifar_test;
  std::filesystem::path csv;
  std::string label_column = "label";
  double test_fraction = 0.2;  // csv / synthetic only
  int normal_class = 0;
  double val_fraction = 0.1;
  // synthetic: `classes` clusters of low-rank sigmoid data in `dim` dims
  std::size_t synthetic_train = 600;
  std::size_t synthetic_test = 300;
  std::size_t synthetic_dim = 16;
  std::size_t synthetic_classes = 3;
  std::uint64_t synthetic_seed = 7;
};

struct RunConfig {
  DatasetSpec dataset;
  AutoencoderSpec model{0, 128, 256, nn::Activation::kLeakyRelu, 0.2};
  std::vector<std::size_t> fm_hidden;  // hidden widths of the mask net
  TrainOptions stage1;
  Stage2Options stage2;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  // Fixed (k, tau) for stage-2 early stopping; absent => fixed epoch budget.
  std::optional<std::size_t> swad_k;
  std::optional<double> swad_tau;
  std::vector<std::size_t> k_grid;  // empty => L/16, L/8, L/4, L/2, 3L/4, L
  std::vector<double> tau_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<std::size_t> latent_grid{64, 128, 256, 512};
  std::vector<int> latdim_classes;  // empty => dataset.normal_class only
  std::filesystem::path output_dir = "runs";

  // Sweep grid over k for the configured latent dimension.
  std::vector<std::size_t> effective_k_grid() const;

  // Throws ConfigError on any violated invariant.
  void validate() const;

  // Canonical "section.key = value" dump; its SHA-256 is the config hash.
  std::string canonical_text() const;
  std::string hash() const;
};

// Parses the INI-style config: `[section]` headers, `key = value` lines,
// `#` / `;` comments. Unknown sections or keys are errors. Relative paths
// resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace swad
