// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "abspose/camera.hpp"
#include "abspose/types.hpp"

namespace abspose {

// Multiplier applied to k to obtain the absolute root depth: depth = gamma_prime * k.
struct CorrectionFactor {
  double gamma_prime = 1.0;
};

// Result of fitting the root translation T so that the root-relative 3D
// joints, shifted by T, project onto the observed 2D pose.
struct RootFitResult {
  Point3 translation;           // mm, camera-centered; equals the root position
  double residual = 0.0;        // mean squared reprojection error, px^2
  std::vector<std::uint8_t> inlier_mask;  // per joint; only set by RANSAC
};

struct RansacConfig {
  int iterations = 256;
  int sample_size = 3;
  double inlier_threshold_px = 10.0;
  std::uint64_t seed = 0;
};

// Joint subset selector, one flag per joint.
using JointMask = std::vector<std::uint8_t>;

JointMask full_mask(int joint_count);

// Mask deselecting every joint flagged as a limb joint. Throws EmptyMask if
// nothing remains.
JointMask limb_exclusion_mask(const SkeletonDef& s);

// Root depth from box area: depth = gamma_prime * compute_k(b, cam, a_real).
// The box must already be square.
RootCoord k_localize(const BBox& b, const CameraIntrinsics& cam, const Point2& root2d,
                     const CorrectionFactor& corr, double a_real = kDefaultARealMm2);

// Linear least-squares root translation. rel_cam holds camera-axis-aligned
// root-relative joint positions in mm. Each masked joint contributes the two
// equations obtained by multiplying the projection through by depth:
//   alpha_x Tx - (u - cx) Tz = (u - cx) Zj - alpha_x Xj
//   alpha_y Ty - (v - cy) Tz = (v - cy) Zj - alpha_y Yj
// Throws DegenerateConfiguration when the system is rank-deficient.
RootFitResult lsq_root_fit(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                           const CameraIntrinsics& cam, const JointMask& mask);

// Robust variant: repeatedly fits on random minimal joint subsets, keeps the
// model with the most reprojection inliers (ties by lower inlier residual,
// then by earlier trial), and refits on the winning inlier set. Trials are
// scored in parallel; the sampled subsets and the selection rule depend only
// on the seed, so the result is identical across runs and thread counts.
RootFitResult ransac_root_fit(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                              const CameraIntrinsics& cam, const SkeletonDef& skeleton,
                              const RansacConfig& cfg);

// Mean squared reprojection error of rel_cam + t against p2d over the masked
// joints; +inf if any masked joint lands at non-positive depth.
double reprojection_residual(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                             const CameraIntrinsics& cam, const JointMask& mask,
                             const Point3& t);

namespace detail {

// Shared between the parallel implementation and the serial reference.
struct RansacTrial {
  bool valid = false;
  Point3 translation;
  std::vector<std::uint8_t> inliers;
  int inlier_count = 0;
  double inlier_residual = std::numeric_limits<double>::infinity();
};

std::vector<std::vector<int>> draw_ransac_samples(int joint_count, const RansacConfig& cfg);
RansacTrial score_ransac_trial(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                               const CameraIntrinsics& cam, const std::vector<int>& sample,
                               double inlier_threshold_px);
int select_best_trial(const std::vector<RansacTrial>& trials);
RootFitResult refit_on_inliers(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                               const CameraIntrinsics& cam, const RansacTrial& trial);

}  // namespace detail

}  // namespace abspose
