// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "abspose/camera.hpp"
#include "abspose/types.hpp"

namespace abspose {

// Skeleton plus unit-height joint offsets (x right, y down, z depth; the
// vertical extent of the offsets is 1, so scaling by a height in mm gives a
// person of that height).
struct BodyTemplate {
  SkeletonDef skeleton;
  std::vector<Point3> unit_offsets;
};

// 17-joint humanoid with adult proportions.
BodyTemplate adult_body();
// Same joint set with child proportions: relatively wider arm span and a
// larger head, so tight-box aspect separates the two populations.
BodyTemplate child_body();
// Flat square calibration target (5 joints, root at center). Its projected
// extent is exactly height x height, which makes k proportional to depth.
BodyTemplate flat_body();

struct NoiseConfig {
  double sigma2d_px = 0.0;
  double box_jitter_frac = 0.0;
  double sigma_depth_mm = 0.0;
};

struct SceneConfig {
  int min_persons = 1;
  int max_persons = 3;
  double height_min_mm = 1400.0;
  double height_max_mm = 1900.0;
  double depth_min_mm = 3000.0;
  double depth_max_mm = 8000.0;
  double lateral_x_mm = 1200.0;  // half-range of root X around the optical axis
  double lateral_y_mm = 300.0;   // half-range of root Y
  CameraIntrinsics cam{1500.0, 1500.0, 960.0, 540.0};
  ImageSize image{1920, 1080};
  BodyTemplate body = adult_body();
  // Optional second population mixed in with the given fraction.
  double child_fraction = 0.0;
  BodyTemplate child = child_body();
  double child_height_min_mm = 900.0;
  double child_height_max_mm = 1200.0;
  NoiseConfig noise;
  std::uint64_t seed = 0;
  int scene_count = 1;
  double a_real_mm2 = kDefaultARealMm2;
  double box_pad_frac = 0.10;  // per-side padding of the tight box
  int max_attempts = 200;
};

// One generated person with its groundtruth and the derived observations.
struct SceneSample {
  int image_id = 0;
  AbsPose3D gt_pose;
  BBox tight_box;    // box of projected joints, padded
  BBox squared_box;  // square_extend(tight_box)
  Pose2D pose2d;
  RelPose3D rel_pose;
  RootCoord true_root;
  double true_k = 0.0;
  double true_gamma_prime = 0.0;  // Z_root / k
};

// Samples one scene's persons. Placement rejection keeps every projected
// joint inside the image; a person that cannot be placed within
// cfg.max_attempts raises PlacementFailure. Persons are generated in parallel
// from per-person substreams, so the output is identical across thread counts.
std::vector<SceneSample> generate_scene(const SceneConfig& cfg);

// cfg.scene_count scenes with per-scene derived seeds; image_id is the scene
// index.
std::vector<SceneSample> generate_scenes(const SceneConfig& cfg);

// Applies Gaussian pixel noise to the 2D joints (mirrored into the relative
// pose's pixel coordinates) and multiplicative jitter to the box extents.
// Groundtruth fields are returned untouched.
SceneSample perturb(const SceneSample& s, const NoiseConfig& noise, std::uint64_t seed);

// Corrupts each limb joint with the given probability by an offset of the
// given magnitude in a random direction.
Pose2D with_limb_outliers(const Pose2D& p2d, const SkeletonDef& skeleton, double fraction,
                          double magnitude_px, std::uint64_t seed);

// Sample Pearson correlation coefficient.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct CorrelationResult {
  double r = 0.0;
  std::vector<std::pair<double, double>> rows;  // (k mm, true depth mm)
};

// Generates scenes, applies the configured noise, computes k from each
// squared box and pairs it with the true root depth.
CorrelationResult run_k_correlation(const SceneConfig& cfg);

namespace detail {

// Samples one person from its own substream; shared by the parallel
// implementation and the serial reference.
SceneSample sample_person(const SceneConfig& cfg, std::uint64_t person_seed);
int draw_person_count(const SceneConfig& cfg);

}  // namespace detail

}  // namespace abspose
