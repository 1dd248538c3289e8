#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "swad/autoencoder.hpp"
#include "swad/feature_mask.hpp"
#include "swad/matrix.hpp"
#include "swad/metrics.hpp"

namespace swad {

// Soft selection: the k selected latent features keep their value, every
// other feature is multiplied by tau.
struct WeightingConfig {
  std::size_t k = 0;
  double tau = 1.0;
  std::vector<std::size_t> selected;

  // Top-k of `mask`. Throws ValueError unless 1 <= k <= L and 0 < tau <= 1.
  static WeightingConfig from_mask(const FeatureMask& mask, std::size_t k, double tau);
  // All L features selected; scores reduce to the plain autoencoder.
  static WeightingConfig all_features(std::size_t latent_dim);

  // Throws unless the invariants hold for a latent width of `latent_dim`.
  void validate(std::size_t latent_dim) const;
};

Matrix weight_latent(const Matrix& z, const WeightingConfig& cfg);

// ||x_i - dec(weight(enc(x_i)))||^2 per row; labels are carried through.
ScoreSet score(const AutoencoderModel& model, const WeightingConfig& cfg, const Matrix& x,
               std::vector<int> labels = {});

// Same as score() for already-encoded latents, so sweeps encode once.
ScoreSet score_latent(const AutoencoderModel& model, const WeightingConfig& cfg,
                      const Matrix& z, const Matrix& x, std::vector<int> labels = {});

// CSV with header sample_id,score,label (label column empty when unlabeled).
void write_scores_csv(std::ostream& out, const ScoreSet& scores);
void write_scores_csv(const std::filesystem::path& path, const ScoreSet& scores);

}  // namespace swad
