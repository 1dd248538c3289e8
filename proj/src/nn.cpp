#include "swad/nn.hpp"

#include <cmath>

#include "swad/error.hpp"

namespace swad::nn {
namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix apply_activation(const DenseLayer& layer, const Matrix& pre) {
  if (layer.activation == Activation::kLinear) return pre;
  Matrix out = pre;
  if (layer.activation == Activation::kLeakyRelu) {
    for (double& v : out.data())
      if (v < 0.0) v *= layer.leaky_slope;
  } else {
    for (double& v : out.data()) v = sigmoid(v);
  }
  return out;
}

// grad (in place) *= act'(pre). LeakyReLU'(0) is taken as the slope.
void scale_by_derivative(const DenseLayer& layer, const Matrix& pre, const Matrix& out,
                         Matrix& grad) {
  auto g = grad.data();
  switch (layer.activation) {
    case Activation::kLinear:
      break;
    case Activation::kLeakyRelu: {
      auto p = pre.data();
      for (std::size_t i = 0; i < g.size(); ++i)
        if (p[i] <= 0.0) g[i] *= layer.leaky_slope;
      break;
    }
    case Activation::kSigmoid: {
      auto y = out.data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] *= y[i] * (1.0 - y[i]);
      break;
    }
  }
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kLinear: return "linear";
    case Activation::kLeakyRelu: return "leaky_relu";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "unknown";
}

Activation activation_from_string(const std::string& name) {
  if (name == "linear") return Activation::kLinear;
  if (name == "leaky_relu") return Activation::kLeakyRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw ValueError("unknown activation '" + name +
                   "' (expected linear, leaky_relu or sigmoid)");
}

DenseLayer make_dense(std::size_t in_dim, std::size_t out_dim, Activation activation,
                      Rng& rng, double leaky_slope) {
  if (in_dim == 0 || out_dim == 0) throw DimensionError("dense layer with zero dimension");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0))
    throw ValueError("leaky_relu slope must lie in (0, 1)");
  const double limit = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
  return DenseLayer{rng_uniform(rng, in_dim, out_dim, -limit, limit), Matrix(1, out_dim),
                    activation, leaky_slope};
}

ForwardPass forward(std::span<const DenseLayer> layers, const Matrix& x, bool capture) {
  ForwardPass pass;
  if (capture) {
    pass.tape.emplace();
    pass.tape->activations.reserve(layers.size() + 1);
    pass.tape->pre_activations.reserve(layers.size());
    pass.tape->activations.push_back(x);
  }
  Matrix current = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    if (current.cols() != layer.in_dim()) {
      throw DimensionError("forward: layer " + std::to_string(i) + " expects " +
                           std::to_string(layer.in_dim()) + " inputs, got " +
                           current.shape_string());
    }
    Matrix pre = elementwise(matmul(current, layer.weights), layer.bias, ElementOp::kAdd);
    Matrix out = apply_activation(layer, pre);
    if (capture) {
      pass.tape->pre_activations.push_back(std::move(pre));
      pass.tape->activations.push_back(out);
    }
    current = std::move(out);
  }
  pass.output = std::move(current);
  return pass;
}

Matrix predict(std::span<const DenseLayer> layers, const Matrix& x) {
  return forward(layers, x, false).output;
}

Gradients backward(std::span<const DenseLayer> layers, GradientTape&& tape,
                   const Matrix& output_grad) {
  if (tape.pre_activations.size() != layers.size() ||
      tape.activations.size() != layers.size() + 1) {
    throw DimensionError("backward: tape has " + std::to_string(tape.pre_activations.size()) +
                         " entries for " + std::to_string(layers.size()) + " layers");
  }
  const Matrix& final_out = tape.activations.back();
  if (output_grad.rows() != final_out.rows() || output_grad.cols() != final_out.cols()) {
    throw DimensionError("backward: output gradient " + output_grad.shape_string() +
                         " does not match network output " + final_out.shape_string());
  }
  Gradients grads;
  grads.layers.resize(layers.size());
  Matrix delta = output_grad;
  for (std::size_t i = layers.size(); i-- > 0;) {
    scale_by_derivative(layers[i], tape.pre_activations[i], tape.activations[i + 1], delta);
    grads.layers[i].weights = matmul_tn(tape.activations[i], delta);
    grads.layers[i].bias = column_sums(delta);
    delta = matmul_nt(delta, layers[i].weights);
  }
  grads.input = std::move(delta);
  tape = GradientTape{};
  return grads;
}

double mse_loss(const Matrix& pred, const Matrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw DimensionError("mse_loss: " + pred.shape_string() + " vs " + target.shape_string());
  }
  if (pred.rows() == 0) return 0.0;
  double total = 0.0;
  auto p = pred.data();
  auto t = target.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - t[i];
    total += d * d;
  }
  return total / static_cast<double>(pred.rows());
}

Matrix mse_loss_grad(const Matrix& pred, const Matrix& target) {
  Matrix g = elementwise(pred, target, ElementOp::kSub);
  if (pred.rows() == 0) return g;
  return scale(g, 2.0 / static_cast<double>(pred.rows()));
}

void adam_step(AdamState& state, std::span<Matrix* const> params,
               std::span<const Matrix* const> grads) {
  if (params.size() != grads.size()) {
    throw DimensionError("adam_step: " + std::to_string(params.size()) + " parameters but " +
                         std::to_string(grads.size()) + " gradients");
  }
  if (state.first_moment.empty()) {
    for (const Matrix* p : params) {
      state.first_moment.emplace_back(p->rows(), p->cols());
      state.second_moment.emplace_back(p->rows(), p->cols());
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw DimensionError("adam_step: optimizer state tracks " +
                         std::to_string(state.first_moment.size()) + " parameters, got " +
                         std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Matrix& g = *grads[i];
    if (g.rows() != params[i]->rows() || g.cols() != params[i]->cols() ||
        state.first_moment[i].rows() != g.rows() || state.first_moment[i].cols() != g.cols()) {
      throw DimensionError("adam_step: gradient " + g.shape_string() + " for parameter " +
                           params[i]->shape_string());
    }
  }

  const auto& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(c.beta1, t);
  const double bias2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i]->data();
    auto g = grads[i]->data();
    auto m = state.first_moment[i].data();
    auto v = state.second_moment[i].data();
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g[j];
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g[j] * g[j];
      const double m_hat = m[j] / bias1;
      const double v_hat = v[j] / bias2;
      p[j] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

std::vector<Matrix*> parameters(LayerStack& layers) {
  std::vector<Matrix*> out;
  for (auto& l : layers) {
    out.push_back(&l.weights);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<const Matrix*> parameters(const LayerStack& layers) {
  std::vector<const Matrix*> out;
  for (const auto& l : layers) {
    out.push_back(&l.weights);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<const Matrix*> flatten(const std::vector<LayerGrad>& grads) {
  std::vector<const Matrix*> out;
  for (const auto& g : grads) {
    out.push_back(&g.weights);
    out.push_back(&g.bias);
  }
  return out;
}

std::size_t parameter_count(const LayerStack& layers) {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

}  // namespace swad::nn
