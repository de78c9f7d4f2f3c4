// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent test-side implementations used as oracles: brute-force search
// where the library uses closed forms, simple loops where the library
// aggregates, and Eigen's umeyama for the similarity alignment.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "abspose/metrics.hpp"
#include "abspose/types.hpp"

namespace oracles {

using abspose::AbsPose3D;
using abspose::CameraIntrinsics;
using abspose::Point2;
using abspose::Point3;
using abspose::Pose2D;

// Mean squared pixel reprojection error of rel_cam + t against p2d over the
// masked joints (own projection code).
double reprojection_objective(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                              const CameraIntrinsics& cam,
                              const std::vector<std::uint8_t>& mask, const Point3& t);

// Exhaustive lattice around `center` followed by compass-search polish.
Point3 grid_fit_oracle(const Pose2D& p2d, const std::vector<Point3>& rel_cam,
                       const CameraIntrinsics& cam, const std::vector<std::uint8_t>& mask,
                       const Point3& center, double half_range_mm, int n_per_axis);

// Best mean joint distance after similarity alignment, found by random
// multi-start compass search over (axis-angle, log scale, translation).
double procrustes_search_oracle(const AbsPose3D& pred, const AbsPose3D& gt, int starts,
                                std::uint64_t seed);

// Mean joint distance after aligning pred to gt with Eigen::umeyama.
double umeyama_pa_mpjpe(const AbsPose3D& pred, const AbsPose3D& gt);

// Average precision by independent precision-recall enumeration.
double ap_bruteforce(const std::vector<abspose::PersonPrediction>& preds,
                     const std::vector<abspose::PersonGroundTruth>& gts, int root_index,
                     double threshold_mm);

// Exhaustive matching: maximize the number of pairs within radius, then
// minimize the total distance. Only for small person counts.
std::vector<std::pair<int, int>> min_cost_matching(const std::vector<Point3>& pred_roots,
                                                   const std::vector<Point3>& gt_roots,
                                                   double radius_mm);

// Straightforward reimplementation of the full evaluation.
struct NaiveReport {
  std::optional<double> mpjpe, pa_mpjpe, mrpe;
  Point3 mrpe_axes;
  std::optional<double> pck_rel_matched, pck_abs_matched, auc_rel_matched;
  double pck_rel_all = 0.0, pck_abs_all = 0.0, auc_rel_all = 0.0;
  double ap_root = 0.0;
  std::int64_t matched = 0;
};
NaiveReport naive_evaluate(const std::vector<abspose::PersonPrediction>& preds,
                           const std::vector<abspose::PersonGroundTruth>& gts,
                           const abspose::EvalConfig& cfg);

}  // namespace oracles
