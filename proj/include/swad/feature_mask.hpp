#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "swad/autoencoder.hpp"
#include "swad/matrix.hpp"
#include "swad/nn.hpp"
#include "swad/rng.hpp"

namespace swad {

// Produces one importance vector per minibatch of latent codes: dense layers
// ending in a linear L-wide layer give per-sample logits, a softmax over features turns them
// into a distribution, and the batch mean of those distributions is the mask.
struct FmModule {
  nn::LayerStack mask_net;

  std::size_t latent_dim() const noexcept {
    return mask_net.empty() ? 0 : mask_net.front().in_dim();
  }
};

// `hidden` inserts leaky-ReLU layers of the given widths before the final
// linear L-wide logit layer; empty gives the single-layer module.
FmModule build_fm_module(std::size_t latent_dim, const Rng& rng,
                         std::span<const std::size_t> hidden = {}, double leaky_slope = 0.2);

// 1 x L row, entries in [0, 1] summing to 1.
Matrix fm_forward(const FmModule& fm, const Matrix& z_batch);

// Intermediate values of an FM forward pass, kept for fm_backward.
struct FmTrace {
  Matrix mask;
  Matrix softmax;  // per-sample distributions, batch x L
  nn::GradientTape tape;
};

FmTrace fm_forward_traced(const FmModule& fm, const Matrix& z_batch);

// Gradients of the mask-net parameters given d loss / d mask (1 x L).
std::vector<nn::LayerGrad> fm_backward(const FmModule& fm, FmTrace&& trace,
                                       const Matrix& mask_grad);

// Importance values plus their ranking: indices sorted by descending value,
// lower index first on ties.
class FeatureMask {
 public:
  FeatureMask() = default;
  // Throws ValueError if any value lies outside [0, 1] or is non-finite.
  explicit FeatureMask(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<std::size_t>& ranking() const noexcept { return ranking_; }
  std::size_t size() const noexcept { return values_.size(); }

  friend bool operator==(const FeatureMask&, const FeatureMask&) = default;

 private:
  std::vector<double> values_;
  std::vector<std::size_t> ranking_;
};

// First k entries of the ranking. Throws ValueError unless 1 <= k <= L.
std::vector<std::size_t> select_top_k(const FeatureMask& mask, std::size_t k);

// "index value" per line in ranking order; values printed with round-trip
// precision.
void write_mask_text(std::ostream& out, const FeatureMask& mask);
FeatureMask read_mask_text(std::istream& in);

struct Stage2Options {
  std::size_t batch_size = 512;
  std::size_t max_epochs = 100;
  std::size_t patience = 20;
  nn::AdamConfig adam;
};

// Scores a candidate mask on held-out data (higher is better). When given to
// train_stage2 it turns on early stopping.
using MaskMonitor = std::function<double(const FeatureMask&)>;

struct Stage2Result {
  FeatureMask mask;
  TrainReport report;
};

// The stage-2 objective on one batch: mean over rows of
// ||x_i - g(z_i * fm(Z))||^2 with a single mask for the whole batch.
double stage2_loss(const FmModule& fm, const nn::LayerStack& learn_net, const Matrix& z,
                   const Matrix& x);

// Mask over a full set of latents: fm_forward on every row at once.
FeatureMask compute_mask(const FmModule& fm, const Matrix& z_all);

// Jointly fits the mask net and the learning net `learn_net` (decoder-shaped,
// independent of the stage-1 decoder) on frozen latents. The returned mask
// comes from the trained module applied to all of `z_train`.
Stage2Result train_stage2(FmModule& fm, nn::LayerStack& learn_net, const Matrix& z_train,
                          const Matrix& x_train, const Stage2Options& options, const Rng& rng,
                          const MaskMonitor& monitor = {});

}  // namespace swad
