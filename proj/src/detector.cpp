#include "swad/detector.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "swad/error.hpp"

namespace swad {

WeightingConfig WeightingConfig::from_mask(const FeatureMask& mask, std::size_t k, double tau) {
  WeightingConfig cfg{k, tau, select_top_k(mask, k)};
  cfg.validate(mask.size());
  return cfg;
}

WeightingConfig WeightingConfig::all_features(std::size_t latent_dim) {
  WeightingConfig cfg{latent_dim, 1.0, {}};
  for (std::size_t j = 0; j < latent_dim; ++j) cfg.selected.push_back(j);
  return cfg;
}

void WeightingConfig::validate(std::size_t latent_dim) const {
  if (k < 1 || k > latent_dim) {
    throw ValueError("weighting: k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(latent_dim) + "]");
  }
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw ValueError("weighting: tau=" + std::to_string(tau) + " outside (0, 1]");
  }
  if (selected.size() != k) {
    throw ValueError("weighting: " + std::to_string(selected.size()) +
                     " selected indices for k=" + std::to_string(k));
  }
  std::vector<bool> seen(latent_dim, false);
  for (std::size_t j : selected) {
    if (j >= latent_dim) {
      throw DimensionError("weighting: selected index " + std::to_string(j) +
                           " out of range for L=" + std::to_string(latent_dim));
    }
    if (seen[j]) throw ValueError("weighting: duplicate selected index " + std::to_string(j));
    seen[j] = true;
  }
}

Matrix weight_latent(const Matrix& z, const WeightingConfig& cfg) {
  cfg.validate(z.cols());
  Matrix factors(1, z.cols(), cfg.tau);
  for (std::size_t j : cfg.selected) factors(0, j) = 1.0;
  Matrix out = z;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j)
      if (factors(0, j) != 1.0) r[j] *= factors(0, j);
  }
  return out;
}

ScoreSet score_latent(const AutoencoderModel& model, const WeightingConfig& cfg,
                      const Matrix& z, const Matrix& x, std::vector<int> labels) {
  if (x.cols() != model.input_dim()) {
    throw DimensionError("score: expected " + std::to_string(model.input_dim()) +
                         " input columns, got " + x.shape_string());
  }
  if (!labels.empty() && labels.size() != x.rows()) {
    throw ValueError("score: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(x.rows()) + " samples");
  }
  const Matrix recon = decode(model, weight_latent(z, cfg));
  return ScoreSet{row_squared_distances(x, recon), std::move(labels)};
}

ScoreSet score(const AutoencoderModel& model, const WeightingConfig& cfg, const Matrix& x,
               std::vector<int> labels) {
  return score_latent(model, cfg, encode(model, x), x, std::move(labels));
}

void write_scores_csv(std::ostream& out, const ScoreSet& scores) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "sample_id,score,label\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    buf << i << ',' << scores.errors[i] << ',';
    if (scores.labeled()) buf << scores.labels[i];
    buf << '\n';
  }
  out << buf.str();
}

void write_scores_csv(const std::filesystem::path& path, const ScoreSet& scores) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_scores_csv(out, scores);
}

}  // namespace swad
