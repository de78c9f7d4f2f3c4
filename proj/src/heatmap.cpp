// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include "abspose/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abspose/errors.hpp"

namespace abspose {

namespace {

// Per-row exp partials against a shared max. Summing the returned slots in
// row order keeps the result independent of the thread schedule.
struct RowPartial {
  double norm = 0.0;
  double wx = 0.0;
  double wy = 0.0;
};

double grid_max(const std::vector<double>& data) {
  double m = -std::numeric_limits<double>::infinity();
  const std::int64_t n = static_cast<std::int64_t>(data.size());
#pragma omp parallel for reduction(max : m)
  for (std::int64_t i = 0; i < n; ++i) {
    m = std::max(m, data[i]);
  }
  return m;
}

}  // namespace

Point2 soft_argmax_2d(const Heatmap2D& h) {
  const double m = grid_max(h.data);
  std::vector<RowPartial> rows(h.height);
#pragma omp parallel for
  for (int y = 0; y < h.height; ++y) {
    RowPartial r;
    for (int x = 0; x < h.width; ++x) {
      const double e = std::exp(h.at(y, x) - m);
      r.norm += e;
      r.wx += e * x;
      r.wy += e * y;
    }
    rows[y] = r;
  }
  double norm = 0.0, wx = 0.0, wy = 0.0;
  for (const RowPartial& r : rows) {
    norm += r.norm;
    wx += r.wx;
    wy += r.wy;
  }
  return {wx / norm, wy / norm};
}

Point3 soft_argmax_3d(const Heatmap3D& h) {
  const double m = grid_max(h.data);
  std::vector<RowPartial> slices(h.depth);
  std::vector<double> wz(h.depth, 0.0);
#pragma omp parallel for
  for (int z = 0; z < h.depth; ++z) {
    RowPartial r;
    for (int y = 0; y < h.height; ++y) {
      for (int x = 0; x < h.width; ++x) {
        const double e = std::exp(h.at(z, y, x) - m);
        r.norm += e;
        r.wx += e * x;
        r.wy += e * y;
      }
    }
    slices[z] = r;
    wz[z] = r.norm * z;
  }
  double norm = 0.0, sx = 0.0, sy = 0.0, sz = 0.0;
  for (int z = 0; z < h.depth; ++z) {
    norm += slices[z].norm;
    sx += slices[z].wx;
    sy += slices[z].wy;
    sz += wz[z];
  }
  return {sx / norm, sy / norm, sz / norm};
}

SoftArgmax2dGrad soft_argmax_2d_grad(const Heatmap2D& h) {
  SoftArgmax2dGrad g;
  g.value = soft_argmax_2d(h);
  g.du.resize(h.data.size());
  g.dv.resize(h.data.size());
  const double m = grid_max(h.data);
  double norm = 0.0;
  for (double s : h.data) norm += std::exp(s - m);
#pragma omp parallel for
  for (int y = 0; y < h.height; ++y) {
    for (int x = 0; x < h.width; ++x) {
      const size_t i = static_cast<size_t>(y) * h.width + x;
      const double p = std::exp(h.data[i] - m) / norm;
      g.du[i] = p * (x - g.value.u);
      g.dv[i] = p * (y - g.value.v);
    }
  }
  return g;
}

SoftArgmax3dGrad soft_argmax_3d_grad(const Heatmap3D& h) {
  SoftArgmax3dGrad g;
  g.value = soft_argmax_3d(h);
  g.dx.resize(h.data.size());
  g.dy.resize(h.data.size());
  g.dz.resize(h.data.size());
  const double m = grid_max(h.data);
  double norm = 0.0;
  for (double s : h.data) norm += std::exp(s - m);
#pragma omp parallel for
  for (int z = 0; z < h.depth; ++z) {
    for (int y = 0; y < h.height; ++y) {
      for (int x = 0; x < h.width; ++x) {
        const size_t i = (static_cast<size_t>(z) * h.height + y) * h.width + x;
        const double p = std::exp(h.data[i] - m) / norm;
        g.dx[i] = p * (x - g.value.x);
        g.dy[i] = p * (y - g.value.y);
        g.dz[i] = p * (z - g.value.z);
      }
    }
  }
  return g;
}

double l1_root_loss(const RootCoord& pred, const RootCoord& gt) {
  return std::abs(pred.x - gt.x) + std::abs(pred.y - gt.y) + std::abs(pred.z - gt.z);
}

double l1_pose_loss(const RelPose3D& pred, const RelPose3D& gt) {
  if (pred.joints.size() != gt.joints.size()) {
    throw JointCountMismatch("l1_pose_loss: poses have different joint counts");
  }
  if (pred.joints.empty()) return 0.0;
  double sum = 0.0;
  for (size_t j = 0; j < pred.joints.size(); ++j) {
    sum += std::abs(pred.joints[j].x - gt.joints[j].x) +
           std::abs(pred.joints[j].y - gt.joints[j].y) +
           std::abs(pred.joints[j].z - gt.joints[j].z);
  }
  return sum / static_cast<double>(pred.joints.size());
}

std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double eps) {
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> grad(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    const double orig = xs[i];
    xs[i] = orig + eps;
    const double fp = f(xs);
    xs[i] = orig - eps;
    const double fm = f(xs);
    xs[i] = orig;
    grad[i] = (fp - fm) / (2.0 * eps);
  }
  return grad;
}

}  // namespace abspose
