// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "abspose/types.hpp"

namespace abspose {

struct PersonPrediction {
  AbsPose3D pose;
  double score = 1.0;
  int image_id = 0;
};

struct PersonGroundTruth {
  AbsPose3D pose;
  int image_id = 0;
};

// Prediction-to-groundtruth assignment for one image.
struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (prediction index, groundtruth index)
  std::vector<int> unmatched_gt;
};

// Ordered (threshold mm, fraction correct) samples of a PCK curve.
struct PckCurve {
  std::vector<std::pair<double, double>> points;
};

struct EvalConfig {
  double match_radius_mm = 500.0;
  double pck_threshold_mm = 150.0;
  double ap_threshold_mm = 250.0;
  double auc_min_mm = 5.0;
  double auc_max_mm = 150.0;
  double auc_step_mm = 5.0;
  int root_index = 0;
};

// Metric bundle for one prediction set against one groundtruth set.
// Matched-only values are absent when nothing matched.
struct EvalReport {
  std::optional<double> mpjpe_mm;      // root-aligned
  std::optional<double> pa_mpjpe_mm;   // Procrustes-aligned
  std::optional<double> mrpe_mm;
  std::optional<Point3> mrpe_axes_mm;  // mean |dx|, |dy|, |dz|
  std::optional<double> pck_rel_matched;
  std::optional<double> pck_abs_matched;
  std::optional<double> auc_rel_matched;
  double pck_rel_all = 0.0;
  double pck_abs_all = 0.0;
  double auc_rel_all = 0.0;
  double ap_root = 0.0;
  PckCurve curve_rel_matched;
  PckCurve curve_abs_matched;
  PckCurve curve_rel_all;
  PckCurve curve_abs_all;
  std::int64_t images = 0;
  std::int64_t predictions = 0;
  std::int64_t groundtruths = 0;
  std::int64_t matched = 0;
};

// Mean per-joint position error, mm. With root_align the prediction is first
// translated so its root joint coincides with the groundtruth root.
double mpjpe(const AbsPose3D& pred, const AbsPose3D& gt, bool root_align, int root_index);

// Closed-form similarity alignment (rotation + translation + uniform scale,
// reflections excluded) of pred onto gt, minimizing summed squared joint
// distances. Throws DegenerateGt when gt has zero spatial variance.
struct ProcrustesResult {
  AbsPose3D aligned;
  double scale = 1.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};
ProcrustesResult procrustes_align(const AbsPose3D& pred, const AbsPose3D& gt);

// MPJPE after Procrustes alignment.
double pa_mpjpe(const AbsPose3D& pred, const AbsPose3D& gt);

// Mean Euclidean root position error plus per-axis means of the absolute
// componentwise differences.
struct MrpeResult {
  double total = 0.0;
  Point3 axes;
};
MrpeResult mrpe(const std::vector<Point3>& preds, const std::vector<Point3>& gts);

// Greedy matching on ascending root-to-root 3D distance; pairs beyond radius
// stay unmatched, ties break on the lower (prediction, groundtruth) index
// pair. Inputs must belong to one image.
Matching match_persons(const std::vector<PersonPrediction>& preds,
                       const std::vector<AbsPose3D>& gts, double radius_mm, int root_index);

// Fraction of joints with Euclidean error <= threshold over matched pose
// pairs. pck_all additionally counts the joints of unmatched groundtruths as
// incorrect.
double pck(const std::vector<std::pair<AbsPose3D, AbsPose3D>>& pairs, double threshold_mm,
           bool root_align, int root_index);
double pck_all(const std::vector<std::pair<AbsPose3D, AbsPose3D>>& pairs, double threshold_mm,
               bool root_align, int root_index, std::int64_t unmatched_gt_joints);

// Normalized area under a PCK curve: the mean fraction over the threshold grid.
double auc(const PckCurve& curve);

// Average precision of root localization. Predictions are ranked by
// descending score; one is a true positive when its root lies strictly within
// threshold of a still-unclaimed groundtruth root in its image. The area
// under the precision-recall curve uses all-point interpolation.
double ap_root(const std::vector<PersonPrediction>& preds,
               const std::vector<PersonGroundTruth>& gts, int root_index,
               double threshold_mm = 250.0);

// Full evaluation: per-image matching plus every metric in both "matched
// only" and "all groundtruths" modes. Images are processed in parallel and
// merged in index order, so the report does not depend on thread count.
EvalReport evaluate(const std::vector<PersonPrediction>& preds,
                    const std::vector<PersonGroundTruth>& gts, const EvalConfig& cfg);

namespace detail {

// Per-image partial results, merged serially by evaluate().
struct ImageEval {
  Matching matching;
  double sum_mpjpe = 0.0;
  double sum_pa_mpjpe = 0.0;
  std::int64_t matched_pairs = 0;
  std::vector<Point3> matched_pred_roots;
  std::vector<Point3> matched_gt_roots;
  std::vector<double> rel_joint_errors;  // root-aligned, matched joints only
  std::vector<double> abs_joint_errors;
  std::int64_t unmatched_gt_joints = 0;
};
ImageEval evaluate_image(const std::vector<PersonPrediction>& preds,
                         const std::vector<AbsPose3D>& gts, const EvalConfig& cfg);
EvalReport merge_image_evals(const std::vector<ImageEval>& evals,
                             const std::vector<PersonPrediction>& preds,
                             const std::vector<PersonGroundTruth>& gts,
                             const EvalConfig& cfg);

}  // namespace detail

}  // namespace abspose
