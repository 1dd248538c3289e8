#include "swad/autoencoder.hpp"

#include <cmath>

#include "swad/error.hpp"
#include "swad/metrics.hpp"

namespace swad {

using nn::Activation;

AutoencoderModel build_autoencoder(const AutoencoderSpec& spec, const Rng& rng) {
  if (spec.input_dim == 0 || spec.latent_dim == 0 || spec.hidden == 0) {
    throw DimensionError("autoencoder dimensions must be positive (D=" +
                         std::to_string(spec.input_dim) + ", L=" +
                         std::to_string(spec.latent_dim) + ", hidden=" +
                         std::to_string(spec.hidden) + ")");
  }
  AutoencoderModel model{spec, {}, {}};
  Rng enc0 = rng.split("encoder/0");
  Rng enc1 = rng.split("encoder/1");
  model.encoder.push_back(
      nn::make_dense(spec.input_dim, spec.hidden, Activation::kLeakyRelu, enc0, spec.leaky_slope));
  model.encoder.push_back(
      nn::make_dense(spec.hidden, spec.latent_dim, Activation::kSigmoid, enc1, spec.leaky_slope));
  model.decoder = build_decoder_stack(spec, rng.split("decoder"));
  return model;
}

nn::LayerStack build_decoder_stack(const AutoencoderSpec& spec, const Rng& rng) {
  Rng r0 = rng.split("0");
  Rng r1 = rng.split("1");
  nn::LayerStack stack;
  stack.push_back(
      nn::make_dense(spec.latent_dim, spec.hidden, Activation::kLeakyRelu, r0, spec.leaky_slope));
  stack.push_back(nn::make_dense(spec.hidden, spec.input_dim, spec.output_activation, r1,
                                 spec.leaky_slope));
  return stack;
}

Matrix encode(const AutoencoderModel& model, const Matrix& x) {
  if (x.cols() != model.input_dim()) {
    throw DimensionError("encode: expected " + std::to_string(model.input_dim()) +
                         " input columns, got " + x.shape_string());
  }
  return nn::predict(model.encoder, x);
}

Matrix decode(const AutoencoderModel& model, const Matrix& z) {
  if (z.cols() != model.latent_dim()) {
    throw DimensionError("decode: expected " + std::to_string(model.latent_dim()) +
                         " latent columns, got " + z.shape_string());
  }
  return nn::predict(model.decoder, z);
}

Matrix reconstruct(const AutoencoderModel& model, const Matrix& x) {
  return decode(model, encode(model, x));
}

std::vector<double> reconstruction_errors(const AutoencoderModel& model, const Matrix& x) {
  return row_squared_distances(x, reconstruct(model, x));
}

namespace {

// One Adam step on a minibatch; returns the batch loss before the update.
double train_batch(AutoencoderModel& model, nn::AdamState& adam, const Matrix& batch,
                   const std::vector<Matrix*>& params) {
  auto enc = nn::forward(model.encoder, batch, true);
  auto dec = nn::forward(model.decoder, enc.output, true);
  const double loss = nn::mse_loss(dec.output, batch);
  if (!std::isfinite(loss)) return loss;

  auto dec_grads =
      nn::backward(model.decoder, std::move(*dec.tape), nn::mse_loss_grad(dec.output, batch));
  auto enc_grads = nn::backward(model.encoder, std::move(*enc.tape), dec_grads.input);

  std::vector<const Matrix*> grads = nn::flatten(enc_grads.layers);
  for (const Matrix* g : nn::flatten(dec_grads.layers)) grads.push_back(g);
  nn::adam_step(adam, params, grads);
  return loss;
}

}  // namespace

TrainReport train_stage1(AutoencoderModel& model, const Matrix& train_x,
                         const LabeledSet* validation, const TrainOptions& options,
                         const Rng& rng) {
  if (train_x.rows() == 0) throw ValueError("train_stage1: empty training set");
  if (train_x.cols() != model.input_dim()) {
    throw DimensionError("train_stage1: expected " + std::to_string(model.input_dim()) +
                         " columns, got " + train_x.shape_string());
  }
  if (options.batch_size == 0) throw ValueError("train_stage1: batch_size must be >= 1");

  TrainReport report;
  if (options.max_epochs == 0) return report;

  nn::AdamState adam{options.adam, {}, {}, 0};
  std::vector<Matrix*> params = nn::parameters(model.encoder);
  for (Matrix* p : nn::parameters(model.decoder)) params.push_back(p);

  const Rng shuffle_root = rng.split("stage1/shuffle");
  AutoencoderModel best = model;
  double best_auc = -1.0;
  std::size_t since_best = 0;

  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    Rng shuffle = shuffle_root.split(epoch);
    const auto order = random_permutation(shuffle, train_x.rows());
    double weighted = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const double loss = train_batch(model, adam, gather_rows(train_x, idx), params);
      if (!std::isfinite(loss)) {
        throw NumericError("stage-1 training diverged: non-finite loss in epoch " +
                           std::to_string(epoch));
      }
      weighted += loss * static_cast<double>(idx.size());
    }
    report.train_loss.push_back(weighted / static_cast<double>(train_x.rows()));
    report.epochs_run = epoch + 1;

    if (validation == nullptr) {
      report.best_epoch = epoch;
      continue;
    }
    const ScoreSet val{reconstruction_errors(model, validation->x), validation->y};
    const double val_auc = auc(val);
    report.validation_auc.push_back(val_auc);
    if (val_auc > best_auc) {
      best_auc = val_auc;
      best = model;
      report.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= options.patience) {
      break;
    }
  }
  if (validation != nullptr) model = std::move(best);
  return report;
}

}  // namespace swad
