// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "abspose/types.hpp"

namespace abspose {

// Row-major score grid, data[y * width + x].
struct Heatmap2D {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
};

// Score volume, data[(z * height + y) * width + x].
struct Heatmap3D {
  int width = 0;
  int height = 0;
  int depth = 0;
  std::vector<double> data;

  double& at(int z, int y, int x) {
    return data[(static_cast<size_t>(z) * height + y) * width + x];
  }
  double at(int z, int y, int x) const {
    return data[(static_cast<size_t>(z) * height + y) * width + x];
  }
};

// Probability-weighted centroid of a single softmax over all cells, in
// 0-indexed cell coordinates. Differentiable everywhere; softmax uses
// max-subtraction for stability. Rows are processed in parallel with partial
// sums merged in row order, so the result does not depend on thread count.
Point2 soft_argmax_2d(const Heatmap2D& h);
Point3 soft_argmax_3d(const Heatmap3D& h);

// Decode plus per-cell partial derivatives of each output coordinate with
// respect to the input scores. Gradient layout matches the heatmap's data.
struct SoftArgmax2dGrad {
  Point2 value;
  std::vector<double> du;
  std::vector<double> dv;
};
struct SoftArgmax3dGrad {
  Point3 value;
  std::vector<double> dx;
  std::vector<double> dy;
  std::vector<double> dz;
};
SoftArgmax2dGrad soft_argmax_2d_grad(const Heatmap2D& h);
SoftArgmax3dGrad soft_argmax_3d_grad(const Heatmap3D& h);

// L1 distance between root coordinates: |dx| + |dy| + |dz|.
double l1_root_loss(const RootCoord& pred, const RootCoord& gt);

// Mean over joints of the per-joint L1 distance.
double l1_pose_loss(const RelPose3D& pred, const RelPose3D& gt);

// Central finite differences (f(x + eps e_i) - f(x - eps e_i)) / (2 eps).
std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double eps);

}  // namespace abspose
