// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "abspose/types.hpp"

namespace abspose {

// Assumed real-world area of a person, mm^2 (2000mm x 2000mm).
inline constexpr double kDefaultARealMm2 = 2000.0 * 2000.0;

// Pinhole projection. Requires p.z > 0.
Point2 project(const Point3& p, const CameraIntrinsics& cam);

// Inverse of project at a known depth (mm). Requires depth > 0.
Point3 back_project(const Point2& q, double depth, const CameraIntrinsics& cam);

// Grows the shorter side about the box center until the box is square.
// The result is not clamped to any image bounds.
BBox square_extend(const BBox& b);

// Depth measure k = sqrt(alpha_x * alpha_y * a_real / area(b)), mm.
// The box must already be square (see square_extend); a_real is the assumed
// real-world area in mm^2.
double compute_k(const BBox& b, const CameraIntrinsics& cam,
                 double a_real = kDefaultARealMm2);

// Camera-to-object distance from one axis extent: d = alpha * l_real / l_img.
double depth_from_extent(double l_real_mm, double l_img_px, double alpha_px);

// Affine map from crop pixel space (origin (0,0), extent crop_size) to the
// original-image coordinates of crop_box, and its inverse.
Point2 crop_to_original(const Point2& q, const BBox& crop_box, const ImageSize& crop_size);
Point2 original_to_crop(const Point2& q, const BBox& crop_box, const ImageSize& crop_size);

// Lifts a root-relative pose (pixels + relative depth) to absolute
// camera-centered coordinates: each joint depth becomes z_rel + root depth and
// the pixel position is back-projected at that depth. Relative pixel
// coordinates must already be in original-image space.
AbsPose3D compose_absolute_pose(const RelPose3D& rel, const RootCoord& root,
                                const CameraIntrinsics& cam);

}  // namespace abspose
