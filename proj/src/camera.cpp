// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include "abspose/camera.hpp"

#include <algorithm>
#include <cmath>

#include "abspose/errors.hpp"

namespace abspose {

Point2 project(const Point3& p, const CameraIntrinsics& cam) {
  if (!(p.z > 0.0)) {
    throw NonPositiveDepth("project: point depth must be positive");
  }
  return {cam.alpha_x * p.x / p.z + cam.cx, cam.alpha_y * p.y / p.z + cam.cy};
}

Point3 back_project(const Point2& q, double depth, const CameraIntrinsics& cam) {
  if (!(depth > 0.0)) {
    throw NonPositiveDepth("back_project: depth must be positive");
  }
  return {(q.u - cam.cx) * depth / cam.alpha_x, (q.v - cam.cy) * depth / cam.alpha_y, depth};
}

BBox square_extend(const BBox& b) {
  const double side = std::max(b.w, b.h);
  const Point2 c = b.center();
  return {c.u - 0.5 * side, c.v - 0.5 * side, side, side};
}

double compute_k(const BBox& b, const CameraIntrinsics& cam, double a_real) {
  const double a_img = b.area();
  if (a_img == 0.0) {
    throw ZeroArea("compute_k: bounding box has zero area");
  }
  return std::sqrt(cam.alpha_x * cam.alpha_y * a_real / a_img);
}

double depth_from_extent(double l_real_mm, double l_img_px, double alpha_px) {
  if (!(l_img_px > 0.0)) {
    throw ZeroExtent("depth_from_extent: image extent must be positive");
  }
  return alpha_px * l_real_mm / l_img_px;
}

Point2 crop_to_original(const Point2& q, const BBox& crop_box, const ImageSize& crop_size) {
  return {crop_box.x + q.u * crop_box.w / crop_size.width,
          crop_box.y + q.v * crop_box.h / crop_size.height};
}

Point2 original_to_crop(const Point2& q, const BBox& crop_box, const ImageSize& crop_size) {
  return {(q.u - crop_box.x) * crop_size.width / crop_box.w,
          (q.v - crop_box.y) * crop_size.height / crop_box.h};
}

AbsPose3D compose_absolute_pose(const RelPose3D& rel, const RootCoord& root,
                                const CameraIntrinsics& cam) {
  AbsPose3D out;
  out.joints.reserve(rel.joints.size());
  for (const Point3& j : rel.joints) {
    const double z_abs = j.z + root.z;
    if (!(z_abs > 0.0)) {
      throw NonPositiveDepth("compose_absolute_pose: joint depth must be positive");
    }
    out.joints.push_back(back_project({j.x, j.y}, z_abs, cam));
  }
  return out;
}

}  // namespace abspose
