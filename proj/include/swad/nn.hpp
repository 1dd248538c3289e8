#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swad/matrix.hpp"
#include "swad/rng.hpp"

namespace swad::nn {

enum class Activation { kLinear, kLeakyRelu, kSigmoid };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

// y = act(x * W + b). W is in_dim x out_dim, b is 1 x out_dim.
struct DenseLayer {
  Matrix weights;
  Matrix bias;
  Activation activation = Activation::kLinear;
  double leaky_slope = 0.2;

  std::size_t in_dim() const noexcept { return weights.rows(); }
  std::size_t out_dim() const noexcept { return weights.cols(); }
};

// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero bias.
DenseLayer make_dense(std::size_t in_dim, std::size_t out_dim, Activation activation,
                      Rng& rng, double leaky_slope = 0.2);

using LayerStack = std::vector<DenseLayer>;

// What backward() needs from a forward pass. activations[0] is the network
// input and activations[i + 1] is the output of layer i.
struct GradientTape {
  std::vector<Matrix> activations;
  std::vector<Matrix> pre_activations;
};

struct ForwardPass {
  Matrix output;
  std::optional<GradientTape> tape;
};

ForwardPass forward(std::span<const DenseLayer> layers, const Matrix& x, bool capture);

// Convenience wrapper for inference.
Matrix predict(std::span<const DenseLayer> layers, const Matrix& x);

struct LayerGrad {
  Matrix weights;
  Matrix bias;
};

struct Gradients {
  std::vector<LayerGrad> layers;
  // d loss / d network input; used to chain into upstream modules.
  Matrix input;
};

// Analytic gradients given d loss / d output. The tape is consumed.
Gradients backward(std::span<const DenseLayer> layers, GradientTape&& tape,
                   const Matrix& output_grad);

// (1/N) * sum_i ||pred_i - target_i||^2 over the N rows.
double mse_loss(const Matrix& pred, const Matrix& target);

// d mse_loss / d pred = (2/N) (pred - target).
Matrix mse_loss_grad(const Matrix& pred, const Matrix& target);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  std::uint64_t step = 0;
};

// Bias-corrected Adam update applied in place. Moments are allocated on the
// first call and must keep matching shapes afterwards.
void adam_step(AdamState& state, std::span<Matrix* const> params,
               std::span<const Matrix* const> grads);

// Parameter / gradient views in the canonical order: per layer, weights then
// bias.
std::vector<Matrix*> parameters(LayerStack& layers);
std::vector<const Matrix*> parameters(const LayerStack& layers);
std::vector<const Matrix*> flatten(const std::vector<LayerGrad>& grads);

std::size_t parameter_count(const LayerStack& layers);

}  // namespace swad::nn
