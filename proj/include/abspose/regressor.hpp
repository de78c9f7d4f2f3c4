// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "abspose/camera.hpp"
#include "abspose/root_fit.hpp"
#include "abspose/types.hpp"

namespace abspose {

// Hand-crafted per-detection features standing in for an image feature:
//   [ log(k / 1000), box aspect h/w before squaring,
//     box height / image height, keypoint-extent-to-box-height ratio (0 when
//     no keypoints are given), bias 1 ].
using FeatureVector = std::vector<double>;

inline constexpr int kFeatureDim = 5;

FeatureVector featurize(const BBox& b, const CameraIntrinsics& cam, const ImageSize& image,
                        const Pose2D* p2d = nullptr, double a_real = kDefaultARealMm2);

// Correction model: gamma' = exp(skip . f + w2 . tanh(W1 f + b1)). The exp
// head keeps the output positive; all-zero weights give gamma' = 1 exactly.
struct RegressorParams {
  int feature_dim = kFeatureDim;
  int hidden_width = 0;
  std::vector<double> skip;  // feature_dim
  std::vector<double> w1;    // hidden_width x feature_dim, row-major
  std::vector<double> b1;    // hidden_width
  std::vector<double> w2;    // hidden_width

  size_t parameter_count() const {
    return skip.size() + w1.size() + b1.size() + w2.size();
  }
};

RegressorParams zero_params(int feature_dim, int hidden_width);

CorrectionFactor predict_gamma(const RegressorParams& params, const FeatureVector& f);

struct TrainConfig {
  double learning_rate = 1e-2;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 0;
  int hidden_width = 8;
};

struct TrainSample {
  FeatureVector features;
  double target_z_mm = 0.0;
  double k_mm = 0.0;
};

struct TrainResult {
  RegressorParams params;
  std::vector<double> epoch_loss;  // mean |gamma' k - Z| in mm, one per epoch
};

// Minimizes mean |gamma'(f) k - Z| by seeded mini-batch subgradient descent
// with a linearly decaying step. Depth residuals are scaled to meters inside
// the optimizer so the default learning rate is stable; the reported loss
// stays in millimeters. Single-threaded and bit-reproducible per seed.
TrainResult train(const std::vector<TrainSample>& data, const TrainConfig& cfg);

// Mean L1 depth loss of a model over a dataset, mm.
double dataset_loss(const RegressorParams& params, std::span<const TrainSample> data);

// Loss plus its exact subgradient with respect to the flattened parameters
// (sign(0) taken as 0). Used by training and by gradient checks.
std::pair<double, std::vector<double>> loss_and_gradient(const RegressorParams& params,
                                                         std::span<const TrainSample> data);

// Flat parameter order: skip, w1, b1, w2.
std::vector<double> flatten(const RegressorParams& params);
RegressorParams unflatten(int feature_dim, int hidden_width, std::span<const double> flat);

}  // namespace abspose
