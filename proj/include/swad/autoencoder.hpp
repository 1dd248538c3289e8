#pragma once

#include <cstddef>
#include <vector>

#include "swad/labeled_set.hpp"
#include "swad/matrix.hpp"
#include "swad/nn.hpp"
#include "swad/rng.hpp"

namespace swad {

// Architecture of the dense autoencoder:
//   encoder  D -> hidden (LeakyReLU) -> L (sigmoid)
//   decoder  L -> hidden (LeakyReLU) -> D (output_activation)
struct AutoencoderSpec {
  std::size_t input_dim = 784;
  std::size_t latent_dim = 128;
  std::size_t hidden = 256;
  nn::Activation output_activation = nn::Activation::kLeakyRelu;
  double leaky_slope = 0.2;
};

struct AutoencoderModel {
  AutoencoderSpec spec;
  nn::LayerStack encoder;
  nn::LayerStack decoder;

  std::size_t input_dim() const noexcept { return spec.input_dim; }
  std::size_t latent_dim() const noexcept { return spec.latent_dim; }
};

// Fresh model. Each layer draws from its own labeled child stream of `rng`.
AutoencoderModel build_autoencoder(const AutoencoderSpec& spec, const Rng& rng);

// Decoder-shaped stack L -> hidden -> D, shared with the stage-2 learning net.
nn::LayerStack build_decoder_stack(const AutoencoderSpec& spec, const Rng& rng);

Matrix encode(const AutoencoderModel& model, const Matrix& x);
// z may hold weighted codes outside (0, 1).
Matrix decode(const AutoencoderModel& model, const Matrix& z);
Matrix reconstruct(const AutoencoderModel& model, const Matrix& x);

// Plain autoencoder anomaly scores ||x_i - dec(enc(x_i))||^2.
std::vector<double> reconstruction_errors(const AutoencoderModel& model, const Matrix& x);

struct TrainOptions {
  std::size_t batch_size = 512;
  std::size_t max_epochs = 200;
  std::size_t patience = 20;
  nn::AdamConfig adam;
};

struct TrainReport {
  std::size_t epochs_run = 0;
  std::vector<double> train_loss;      // sample-weighted mean minibatch loss per epoch
  std::vector<double> validation_auc;  // empty when no validation monitor ran
  std::size_t best_epoch = 0;          // 0-based; weights from this epoch were kept
};

// Minimizes the mean squared reconstruction loss over `train_x` with Adam.
// With a validation set, training stops after `patience` epochs without a
// new best validation AUC and the best epoch's weights are restored; without
// one, all `max_epochs` run. Throws NumericError on a non-finite loss.
TrainReport train_stage1(AutoencoderModel& model, const Matrix& train_x,
                         const LabeledSet* validation, const TrainOptions& options,
                         const Rng& rng);

}  // namespace swad
