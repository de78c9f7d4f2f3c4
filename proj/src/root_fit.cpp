// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include "abspose/root_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "abspose/errors.hpp"
#include "abspose/rng.hpp"

namespace abspose {

namespace {

constexpr double kRankTol = 1e-8;  // smallest/largest singular value cutoff

std::vector<int> mask_indices(const JointMask& mask) {
  std::vector<int> idx;
  for (size_t j = 0; j < mask.size(); ++j) {
    if (mask[j]) idx.push_back(static_cast<int>(j));
  }
  return idx;
}

// Squared reprojection error of a single joint; +inf behind the camera.
double joint_error2(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                    const CameraIntrinsics& cam, const Point3& t, size_t j) {
  const double z = rel_cam[j].z + t.z;
  if (!(z > 0.0)) return std::numeric_limits<double>::infinity();
  const double du = cam.alpha_x * (rel_cam[j].x + t.x) / z + cam.cx - p2d.joints[j].u;
  const double dv = cam.alpha_y * (rel_cam[j].y + t.y) / z + cam.cy - p2d.joints[j].v;
  return du * du + dv * dv;
}

}  // namespace

JointMask full_mask(int joint_count) {
  return JointMask(static_cast<size_t>(joint_count), 1);
}

JointMask limb_exclusion_mask(const SkeletonDef& s) {
  JointMask mask(s.limb_flags.size());
  bool any = false;
  for (size_t j = 0; j < s.limb_flags.size(); ++j) {
    mask[j] = s.limb_flags[j] ? 0 : 1;
    any = any || mask[j];
  }
  if (!any) {
    throw EmptyMask("limb_exclusion_mask: every joint is flagged as a limb");
  }
  return mask;
}

RootCoord k_localize(const BBox& b, const CameraIntrinsics& cam, const Point2& root2d,
                     const CorrectionFactor& corr, double a_real) {
  const double k = compute_k(b, cam, a_real);
  return {root2d.u, root2d.v, corr.gamma_prime * k};
}

double reprojection_residual(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                             const CameraIntrinsics& cam, const JointMask& mask,
                             const Point3& t) {
  double sum = 0.0;
  int n = 0;
  for (size_t j = 0; j < rel_cam.size(); ++j) {
    if (!mask[j]) continue;
    sum += joint_error2(p2d, rel_cam, cam, t, j);
    ++n;
  }
  return n > 0 ? sum / n : std::numeric_limits<double>::infinity();
}

RootFitResult lsq_root_fit(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                           const CameraIntrinsics& cam, const JointMask& mask) {
  if (p2d.joints.size() != rel_cam.size() || mask.size() != rel_cam.size()) {
    throw JointCountMismatch("lsq_root_fit: joint arrays differ in length");
  }
  const std::vector<int> idx = mask_indices(mask);
  if (idx.size() < 2) {
    throw DegenerateConfiguration("lsq_root_fit: mask must select at least 2 joints");
  }

  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd a(2 * m, 3);
  Eigen::VectorXd b(2 * m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const int j = idx[r];
    const double du = p2d.joints[j].u - cam.cx;
    const double dv = p2d.joints[j].v - cam.cy;
    a(2 * r, 0) = cam.alpha_x;
    a(2 * r, 1) = 0.0;
    a(2 * r, 2) = -du;
    b(2 * r) = du * rel_cam[j].z - cam.alpha_x * rel_cam[j].x;
    a(2 * r + 1, 0) = 0.0;
    a(2 * r + 1, 1) = cam.alpha_y;
    a(2 * r + 1, 2) = -dv;
    b(2 * r + 1) = dv * rel_cam[j].z - cam.alpha_y * rel_cam[j].y;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(sv.size() - 1) < kRankTol * sv(0)) {
    throw DegenerateConfiguration("lsq_root_fit: normal system is rank-deficient");
  }
  const Eigen::Vector3d t = svd.solve(b);

  RootFitResult res;
  res.translation = {t(0), t(1), t(2)};
  res.residual = reprojection_residual(p2d, rel_cam, cam, mask, res.translation);
  return res;
}

namespace detail {

std::vector<std::vector<int>> draw_ransac_samples(int joint_count, const RansacConfig& cfg) {
  Rng rng(cfg.seed);
  std::vector<std::vector<int>> samples(cfg.iterations);
  std::vector<int> pool(joint_count);
  for (int i = 0; i < cfg.iterations; ++i) {
    for (int j = 0; j < joint_count; ++j) pool[j] = j;
    samples[i].resize(cfg.sample_size);
    for (int s = 0; s < cfg.sample_size; ++s) {
      const int pick =
          s + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(joint_count - s)));
      std::swap(pool[s], pool[pick]);
      samples[i][s] = pool[s];
    }
  }
  return samples;
}

RansacTrial score_ransac_trial(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                               const CameraIntrinsics& cam, const std::vector<int>& sample,
                               double inlier_threshold_px) {
  RansacTrial trial;
  JointMask sample_mask(rel_cam.size(), 0);
  for (int j : sample) sample_mask[j] = 1;
  try {
    trial.translation = lsq_root_fit(p2d, rel_cam, cam, sample_mask).translation;
  } catch (const DegenerateConfiguration&) {
    return trial;  // invalid trial, zero inliers
  }

  const double thr2 = inlier_threshold_px * inlier_threshold_px;
  trial.inliers.assign(rel_cam.size(), 0);
  double err_sum = 0.0;
  for (size_t j = 0; j < rel_cam.size(); ++j) {
    const double err2 = joint_error2(p2d, rel_cam, cam, trial.translation, j);
    if (err2 <= thr2) {
      trial.inliers[j] = 1;
      ++trial.inlier_count;
      err_sum += err2;
    }
  }
  trial.inlier_residual = trial.inlier_count > 0
                              ? err_sum / trial.inlier_count
                              : std::numeric_limits<double>::infinity();
  trial.valid = true;
  return trial;
}

int select_best_trial(const std::vector<RansacTrial>& trials) {
  int best = -1;
  for (size_t i = 0; i < trials.size(); ++i) {
    if (!trials[i].valid) continue;
    if (best < 0 || trials[i].inlier_count > trials[best].inlier_count ||
        (trials[i].inlier_count == trials[best].inlier_count &&
         trials[i].inlier_residual < trials[best].inlier_residual)) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

RootFitResult refit_on_inliers(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                               const CameraIntrinsics& cam, const RansacTrial& trial) {
  RootFitResult res;
  try {
    res = lsq_root_fit(p2d, rel_cam, cam, trial.inliers);
  } catch (const DegenerateConfiguration&) {
    // Keep the trial model when the inlier set cannot be refit.
    res.translation = trial.translation;
    res.residual = trial.inlier_residual;
  }
  res.inlier_mask = trial.inliers;
  return res;
}

}  // namespace detail

RootFitResult ransac_root_fit(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                              const CameraIntrinsics& cam, const SkeletonDef& skeleton,
                              const RansacConfig& cfg) {
  const int joints = skeleton.joint_count();
  if (static_cast<size_t>(joints) != rel_cam.size() || p2d.joints.size() != rel_cam.size()) {
    throw JointCountMismatch("ransac_root_fit: joint arrays do not match the skeleton");
  }
  if (cfg.sample_size < 2 || cfg.sample_size > joints) {
    throw DegenerateConfiguration("ransac_root_fit: need joints >= sample_size >= 2");
  }

  const auto samples = detail::draw_ransac_samples(joints, cfg);
  std::vector<detail::RansacTrial> trials(cfg.iterations);
#pragma omp parallel for
  for (int i = 0; i < cfg.iterations; ++i) {
    trials[i] = detail::score_ransac_trial(p2d, rel_cam, cam, samples[i],
                                           cfg.inlier_threshold_px);
  }

  const int best = detail::select_best_trial(trials);
  if (best < 0 || trials[best].inlier_count < cfg.sample_size) {
    throw NoConsensus("ransac_root_fit: no sample reached the required inlier count");
  }
  return detail::refit_on_inliers(p2d, rel_cam, cam, trials[best]);
}

}  // namespace abspose
