// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "abspose/heatmap.hpp"
#include "abspose/metrics.hpp"
#include "abspose/root_fit.hpp"
#include "abspose/synth.hpp"

// Single-threaded counterparts of the OpenMP kernels. soft_argmax_* are
// independent straight-line reimplementations; the others run the same
// per-item code without the parallel loop. Kept for tests (parallel results
// must match) and for the benchmark tool.
namespace abspose::reference {

Point2 soft_argmax_2d(const Heatmap2D& h);
Point3 soft_argmax_3d(const Heatmap3D& h);

RootFitResult ransac_root_fit(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                              const CameraIntrinsics& cam, const SkeletonDef& skeleton,
                              const RansacConfig& cfg);

std::vector<SceneSample> generate_scene(const SceneConfig& cfg);

EvalReport evaluate(const std::vector<PersonPrediction>& preds,
                    const std::vector<PersonGroundTruth>& gts, const EvalConfig& cfg);

}  // namespace abspose::reference
