#include "swad/feature_mask.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "swad/error.hpp"

namespace swad {

FmModule build_fm_module(std::size_t latent_dim, const Rng& rng,
                         std::span<const std::size_t> hidden, double leaky_slope) {
  if (latent_dim == 0) throw DimensionError("fm module needs a positive latent dimension");
  FmModule fm;
  std::size_t in = latent_dim;
  for (std::size_t i = 0; i <= hidden.size(); ++i) {
    const bool last = i == hidden.size();
    const std::size_t out = last ? latent_dim : hidden[i];
    if (out == 0) throw DimensionError("fm module hidden widths must be positive");
    Rng r = rng.split("fm/" + std::to_string(i));
    fm.mask_net.push_back(nn::make_dense(
        in, out, last ? nn::Activation::kLinear : nn::Activation::kLeakyRelu, r, leaky_slope));
    in = out;
  }
  return fm;
}

FmTrace fm_forward_traced(const FmModule& fm, const Matrix& z_batch) {
  if (z_batch.rows() == 0) throw DimensionError("fm_forward: empty batch");
  if (z_batch.cols() != fm.latent_dim()) {
    throw DimensionError("fm_forward: expected " + std::to_string(fm.latent_dim()) +
                         " latent columns, got " + z_batch.shape_string());
  }
  auto pass = nn::forward(fm.mask_net, z_batch, true);
  Matrix soft = std::move(pass.output);
  for (std::size_t i = 0; i < soft.rows(); ++i) {
    auto r = soft.row(i);
    const double peak = *std::max_element(r.begin(), r.end());
    double total = 0.0;
    for (double& v : r) {
      v = std::exp(v - peak);
      total += v;
    }
    for (double& v : r) v /= total;
  }
  Matrix mask = scale(column_sums(soft), 1.0 / static_cast<double>(soft.rows()));
  return FmTrace{std::move(mask), std::move(soft), std::move(*pass.tape)};
}

Matrix fm_forward(const FmModule& fm, const Matrix& z_batch) {
  return fm_forward_traced(fm, z_batch).mask;
}

std::vector<nn::LayerGrad> fm_backward(const FmModule& fm, FmTrace&& trace,
                                       const Matrix& mask_grad) {
  const Matrix& s = trace.softmax;
  if (mask_grad.rows() != 1 || mask_grad.cols() != s.cols()) {
    throw DimensionError("fm_backward: mask gradient " + mask_grad.shape_string() +
                         " for latent dimension " + std::to_string(s.cols()));
  }
  // mask = mean_i s_i, so d/ds_i = g / N; through the softmax,
  // d/dlogit_i = s_i * (g/N - <g/N, s_i>).
  const double inv_n = 1.0 / static_cast<double>(s.rows());
  auto g = mask_grad.row(0);
  Matrix logit_grad(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    auto si = s.row(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < si.size(); ++j) dot += g[j] * si[j];
    auto out = logit_grad.row(i);
    for (std::size_t j = 0; j < si.size(); ++j) out[j] = si[j] * (g[j] - dot) * inv_n;
  }
  return nn::backward(fm.mask_net, std::move(trace.tape), logit_grad).layers;
}

FeatureMask::FeatureMask(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValueError("feature mask value " + std::to_string(v) + " outside [0, 1]");
    }
  }
  ranking_.resize(values_.size());
  std::iota(ranking_.begin(), ranking_.end(), std::size_t{0});
  std::stable_sort(ranking_.begin(), ranking_.end(),
                   [&](std::size_t a, std::size_t b) { return values_[a] > values_[b]; });
}

std::vector<std::size_t> select_top_k(const FeatureMask& mask, std::size_t k) {
  if (k < 1 || k > mask.size()) {
    throw ValueError("select_top_k: k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(mask.size()) + "]");
  }
  return {mask.ranking().begin(), mask.ranking().begin() + static_cast<std::ptrdiff_t>(k)};
}

void write_mask_text(std::ostream& out, const FeatureMask& mask) {
  std::ostringstream buf;
  buf.precision(17);
  for (std::size_t idx : mask.ranking()) buf << idx << ' ' << mask.values()[idx] << '\n';
  out << buf.str();
}

FeatureMask read_mask_text(std::istream& in) {
  std::vector<std::pair<std::size_t, double>> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t idx;
    double value;
    if (!(ls >> idx >> value)) throw DataError("mask text: malformed line '" + line + "'");
    entries.emplace_back(idx, value);
  }
  std::vector<double> values(entries.size(), -1.0);
  for (const auto& [idx, value] : entries) {
    if (idx >= values.size() || values[idx] != -1.0) {
      throw DataError("mask text: indices must be a permutation of 0.." +
                      std::to_string(values.size() - 1));
    }
    values[idx] = value;
  }
  return FeatureMask(std::move(values));
}

namespace {

Matrix masked_latents(const Matrix& z, const Matrix& mask) {
  return elementwise(z, mask, ElementOp::kMul);
}

}  // namespace

double stage2_loss(const FmModule& fm, const nn::LayerStack& learn_net, const Matrix& z,
                   const Matrix& x) {
  const Matrix mask = fm_forward(fm, z);
  return nn::mse_loss(nn::predict(learn_net, masked_latents(z, mask)), x);
}

FeatureMask compute_mask(const FmModule& fm, const Matrix& z_all) {
  const Matrix mask = fm_forward(fm, z_all);
  std::vector<double> values(mask.data().begin(), mask.data().end());
  // Mean of distributions can round a hair past [0, 1].
  for (double& v : values) v = std::clamp(v, 0.0, 1.0);
  return FeatureMask(std::move(values));
}

Stage2Result train_stage2(FmModule& fm, nn::LayerStack& learn_net, const Matrix& z_train,
                          const Matrix& x_train, const Stage2Options& options, const Rng& rng,
                          const MaskMonitor& monitor) {
  if (z_train.rows() == 0) throw ValueError("train_stage2: empty training set");
  if (z_train.rows() != x_train.rows()) {
    throw DimensionError("train_stage2: " + std::to_string(z_train.rows()) + " latent rows but " +
                         std::to_string(x_train.rows()) + " input rows");
  }
  if (z_train.cols() != fm.latent_dim() || learn_net.empty() ||
      learn_net.front().in_dim() != z_train.cols() || learn_net.back().out_dim() != x_train.cols()) {
    throw DimensionError("train_stage2: latent/input widths do not match the networks");
  }
  if (options.batch_size == 0) throw ValueError("train_stage2: batch_size must be >= 1");

  Stage2Result result;
  TrainReport& report = result.report;

  nn::AdamState adam{options.adam, {}, {}, 0};
  std::vector<Matrix*> params = nn::parameters(fm.mask_net);
  for (Matrix* p : nn::parameters(learn_net)) params.push_back(p);

  const Rng shuffle_root = rng.split("stage2/shuffle");
  FmModule best_fm = fm;
  nn::LayerStack best_net = learn_net;
  double best_score = -std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    Rng shuffle = shuffle_root.split(epoch);
    const auto order = random_permutation(shuffle, z_train.rows());
    double weighted = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const Matrix zb = gather_rows(z_train, idx);
      const Matrix xb = gather_rows(x_train, idx);

      FmTrace trace = fm_forward_traced(fm, zb);
      const Matrix mask = trace.mask;
      auto pass = nn::forward(learn_net, masked_latents(zb, mask), true);
      const double loss = nn::mse_loss(pass.output, xb);
      if (!std::isfinite(loss)) {
        throw NumericError("stage-2 training diverged: non-finite loss in epoch " +
                           std::to_string(epoch));
      }
      auto net_grads =
          nn::backward(learn_net, std::move(*pass.tape), nn::mse_loss_grad(pass.output, xb));
      // d/dm_j = sum_i dL/d(zm)_ij * z_ij
      const Matrix mask_grad = column_sums(elementwise(net_grads.input, zb, ElementOp::kMul));
      auto fm_grads = fm_backward(fm, std::move(trace), mask_grad);

      std::vector<const Matrix*> grads = nn::flatten(fm_grads);
      for (const Matrix* g : nn::flatten(net_grads.layers)) grads.push_back(g);
      nn::adam_step(adam, params, grads);
      weighted += loss * static_cast<double>(idx.size());
    }
    report.train_loss.push_back(weighted / static_cast<double>(z_train.rows()));
    report.epochs_run = epoch + 1;

    if (!monitor) {
      report.best_epoch = epoch;
      continue;
    }
    const double score = monitor(compute_mask(fm, z_train));
    report.validation_auc.push_back(score);
    if (score > best_score) {
      best_score = score;
      best_fm = fm;
      best_net = learn_net;
      report.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= options.patience) {
      break;
    }
  }
  if (monitor && report.epochs_run > 0) {
    fm = std::move(best_fm);
    learn_net = std::move(best_net);
  }
  result.mask = compute_mask(fm, z_train);
  return result;
}

}  // namespace swad
