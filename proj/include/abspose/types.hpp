// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace abspose {

// Pixel coordinates (u right, v down).
struct Point2 {
  double u = 0.0;
  double v = 0.0;
};

// Camera-centered coordinates in millimeters: x right, y down, z along the
// optical axis. Also reused for cell coordinates of 3D heatmaps.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ImageSize {
  int width = 0;
  int height = 0;
};

// Pinhole intrinsics. alpha_x/alpha_y are the focal lengths divided by the
// per-pixel distance factors, in pixels.
struct CameraIntrinsics {
  double alpha_x = 0.0;
  double alpha_y = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

// Axis-aligned box in pixels, top-left origin.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  Point2 center() const { return {x + 0.5 * w, y + 0.5 * h}; }
};

// Joint layout shared by poses: names, the root (pelvis) index, per-joint
// limb flags (elbows, wrists, knees, ankles) and bone edges.
struct SkeletonDef {
  std::vector<std::string> joint_names;
  int root_index = 0;
  std::vector<std::uint8_t> limb_flags;
  std::vector<std::array<int, 2>> edges;

  int joint_count() const { return static_cast<int>(joint_names.size()); }
};

// 2D pose in pixels. visibility may be empty (all visible) or length J.
struct Pose2D {
  std::vector<Point2> joints;
  std::vector<std::uint8_t> visibility;
};

// Root-relative pose: x/y in pixels, z in millimeters relative to the root
// depth (zero at the root joint).
struct RelPose3D {
  std::vector<Point3> joints;
};

// Absolute camera-centered pose, millimeters.
struct AbsPose3D {
  std::vector<Point3> joints;
};

// Root joint location: pixel position plus absolute depth in millimeters.
struct RootCoord {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;  // absolute depth, mm
};

}  // namespace abspose
