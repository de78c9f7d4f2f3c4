// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include "abspose/regressor.hpp"

#include <algorithm>
#include <cmath>

#include "abspose/errors.hpp"
#include "abspose/rng.hpp"

namespace abspose {

namespace {

// Hidden activations and the network output for one feature vector.
struct Forward {
  std::vector<double> tanh_a;  // tanh(W1 f + b1)
  double net = 0.0;
  double gamma_prime = 1.0;
};

Forward forward(const RegressorParams& p, const FeatureVector& f) {
  Forward fw;
  fw.tanh_a.resize(p.hidden_width);
  double net = 0.0;
  for (int d = 0; d < p.feature_dim; ++d) net += p.skip[d] * f[d];
  for (int h = 0; h < p.hidden_width; ++h) {
    double a = p.b1[h];
    for (int d = 0; d < p.feature_dim; ++d) a += p.w1[h * p.feature_dim + d] * f[d];
    fw.tanh_a[h] = std::tanh(a);
    net += p.w2[h] * fw.tanh_a[h];
  }
  fw.net = net;
  fw.gamma_prime = std::exp(net);
  return fw;
}

void check_dims(const RegressorParams& p, const FeatureVector& f) {
  if (static_cast<int>(f.size()) != p.feature_dim) {
    throw DimensionMismatch("predict_gamma: feature vector length does not match the model");
  }
}

}  // namespace

FeatureVector featurize(const BBox& b, const CameraIntrinsics& cam, const ImageSize& image,
                        const Pose2D* p2d, double a_real) {
  const double k = compute_k(square_extend(b), cam, a_real);
  double extent_ratio = 0.0;
  if (p2d != nullptr && !p2d->joints.empty() && b.h > 0.0) {
    double vmin = p2d->joints.front().v, vmax = vmin;
    for (const Point2& q : p2d->joints) {
      vmin = std::min(vmin, q.v);
      vmax = std::max(vmax, q.v);
    }
    extent_ratio = (vmax - vmin) / b.h;
  }
  return {std::log(k / 1000.0), b.h / b.w, b.h / static_cast<double>(image.height),
          extent_ratio, 1.0};
}

RegressorParams zero_params(int feature_dim, int hidden_width) {
  RegressorParams p;
  p.feature_dim = feature_dim;
  p.hidden_width = hidden_width;
  p.skip.assign(feature_dim, 0.0);
  p.w1.assign(static_cast<size_t>(hidden_width) * feature_dim, 0.0);
  p.b1.assign(hidden_width, 0.0);
  p.w2.assign(hidden_width, 0.0);
  return p;
}

CorrectionFactor predict_gamma(const RegressorParams& params, const FeatureVector& f) {
  check_dims(params, f);
  return {forward(params, f).gamma_prime};
}

double dataset_loss(const RegressorParams& params, std::span<const TrainSample> data) {
  double sum = 0.0;
  for (const TrainSample& s : data) {
    sum += std::abs(forward(params, s.features).gamma_prime * s.k_mm - s.target_z_mm);
  }
  return data.empty() ? 0.0 : sum / static_cast<double>(data.size());
}

std::pair<double, std::vector<double>> loss_and_gradient(const RegressorParams& params,
                                                         std::span<const TrainSample> data) {
  const size_t np = params.parameter_count();
  std::vector<double> grad(np, 0.0);
  double loss = 0.0;
  const double inv_n = data.empty() ? 0.0 : 1.0 / static_cast<double>(data.size());

  const size_t off_w1 = params.skip.size();
  const size_t off_b1 = off_w1 + params.w1.size();
  const size_t off_w2 = off_b1 + params.b1.size();

  for (const TrainSample& s : data) {
    check_dims(params, s.features);
    const Forward fw = forward(params, s.features);
    const double r = fw.gamma_prime * s.k_mm - s.target_z_mm;
    loss += std::abs(r) * inv_n;
    const double sign = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    // d|r|/d net = sign * k * gamma'
    const double dnet = sign * s.k_mm * fw.gamma_prime * inv_n;
    for (int d = 0; d < params.feature_dim; ++d) grad[d] += dnet * s.features[d];
    for (int h = 0; h < params.hidden_width; ++h) {
      const double t = fw.tanh_a[h];
      const double dpre = dnet * params.w2[h] * (1.0 - t * t);
      for (int d = 0; d < params.feature_dim; ++d) {
        grad[off_w1 + h * params.feature_dim + d] += dpre * s.features[d];
      }
      grad[off_b1 + h] += dpre;
      grad[off_w2 + h] += dnet * t;
    }
  }
  return {loss, grad};
}

std::vector<double> flatten(const RegressorParams& params) {
  std::vector<double> flat;
  flat.reserve(params.parameter_count());
  flat.insert(flat.end(), params.skip.begin(), params.skip.end());
  flat.insert(flat.end(), params.w1.begin(), params.w1.end());
  flat.insert(flat.end(), params.b1.begin(), params.b1.end());
  flat.insert(flat.end(), params.w2.begin(), params.w2.end());
  return flat;
}

RegressorParams unflatten(int feature_dim, int hidden_width, std::span<const double> flat) {
  RegressorParams p = zero_params(feature_dim, hidden_width);
  if (flat.size() != p.parameter_count()) {
    throw DimensionMismatch("unflatten: wrong parameter count");
  }
  size_t i = 0;
  for (double& w : p.skip) w = flat[i++];
  for (double& w : p.w1) w = flat[i++];
  for (double& w : p.b1) w = flat[i++];
  for (double& w : p.w2) w = flat[i++];
  return p;
}

TrainResult train(const std::vector<TrainSample>& data, const TrainConfig& cfg) {
  if (data.empty()) {
    throw EmptyDataset("train: no training samples");
  }
  const int feature_dim = static_cast<int>(data.front().features.size());

  Rng rng(cfg.seed);
  RegressorParams params = zero_params(feature_dim, cfg.hidden_width);
  for (double& w : params.w1) w = rng.normal(0.0, 0.1);
  for (double& w : params.w2) w = rng.normal(0.0, 0.1);

  // Residuals are in mm; step on meters so learning_rate 1e-2 behaves.
  constexpr double kGradScale = 1e-3;

  TrainResult result;
  result.epoch_loss.reserve(cfg.epochs);
  std::vector<size_t> order(data.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<TrainSample> batch;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Linearly decaying step keeps the L1 subgradient iteration from
    // oscillating near the optimum.
    const double lr = cfg.learning_rate *
                      (1.0 - static_cast<double>(epoch) / static_cast<double>(cfg.epochs));
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.bounded(i)]);
    }
    for (size_t start = 0; start < data.size(); start += cfg.batch_size) {
      const size_t stop = std::min(start + cfg.batch_size, data.size());
      batch.clear();
      for (size_t i = start; i < stop; ++i) batch.push_back(data[order[i]]);
      auto [loss, grad] = loss_and_gradient(params, batch);
      std::vector<double> flat = flatten(params);
      for (size_t i = 0; i < flat.size(); ++i) flat[i] -= lr * kGradScale * grad[i];
      params = unflatten(feature_dim, cfg.hidden_width, flat);
    }
    result.epoch_loss.push_back(dataset_loss(params, data));
  }
  result.params = std::move(params);
  return result;
}

}  // namespace abspose
