// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include "abspose/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "abspose/errors.hpp"

namespace abspose {

namespace {

double joint_distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void check_same_joints(const AbsPose3D& pred, const AbsPose3D& gt) {
  if (pred.joints.size() != gt.joints.size()) {
    throw JointCountMismatch("poses have different joint counts");
  }
}

std::vector<double> auc_grid(const EvalConfig& cfg) {
  std::vector<double> grid;
  for (double t = cfg.auc_min_mm; t <= cfg.auc_max_mm + 1e-9; t += cfg.auc_step_mm) {
    grid.push_back(t);
  }
  return grid;
}

PckCurve curve_from_errors(const std::vector<double>& errors, std::int64_t denominator,
                           const std::vector<double>& grid) {
  PckCurve curve;
  curve.points.reserve(grid.size());
  for (double t : grid) {
    std::int64_t correct = 0;
    for (double e : errors) {
      if (e <= t) ++correct;
    }
    const double frac =
        denominator > 0 ? static_cast<double>(correct) / static_cast<double>(denominator) : 0.0;
    curve.points.emplace_back(t, frac);
  }
  return curve;
}

}  // namespace

double mpjpe(const AbsPose3D& pred, const AbsPose3D& gt, bool root_align, int root_index) {
  check_same_joints(pred, gt);
  Point3 shift{0.0, 0.0, 0.0};
  if (root_align) {
    const Point3& pr = pred.joints[root_index];
    const Point3& gr = gt.joints[root_index];
    shift = {gr.x - pr.x, gr.y - pr.y, gr.z - pr.z};
  }
  double sum = 0.0;
  for (size_t j = 0; j < pred.joints.size(); ++j) {
    const Point3 p{pred.joints[j].x + shift.x, pred.joints[j].y + shift.y,
                   pred.joints[j].z + shift.z};
    sum += joint_distance(p, gt.joints[j]);
  }
  return sum / static_cast<double>(pred.joints.size());
}

ProcrustesResult procrustes_align(const AbsPose3D& pred, const AbsPose3D& gt) {
  check_same_joints(pred, gt);
  const Eigen::Index n = static_cast<Eigen::Index>(pred.joints.size());

  Eigen::Matrix3Xd p(3, n), g(3, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    p.col(j) << pred.joints[j].x, pred.joints[j].y, pred.joints[j].z;
    g.col(j) << gt.joints[j].x, gt.joints[j].y, gt.joints[j].z;
  }
  const Eigen::Vector3d mu_p = p.rowwise().mean();
  const Eigen::Vector3d mu_g = g.rowwise().mean();
  const Eigen::Matrix3Xd pc = p.colwise() - mu_p;
  const Eigen::Matrix3Xd gc = g.colwise() - mu_g;

  const double var_g = gc.squaredNorm();
  if (var_g == 0.0) {
    throw DegenerateGt("procrustes_align: groundtruth has zero spatial variance");
  }

  ProcrustesResult res;
  const double var_p = pc.squaredNorm();
  if (var_p == 0.0) {
    // All prediction joints coincide; only the translation is determined.
    res.translation = mu_g - mu_p;
  } else {
    const Eigen::Matrix3d cov = gc * pc.transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Vector3d d = Eigen::Vector3d::Ones();
    if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) {
      d(2) = -1.0;  // exclude reflections
    }
    res.rotation = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
    res.scale = svd.singularValues().dot(d) / var_p;
    res.translation = mu_g - res.scale * res.rotation * mu_p;
  }

  res.aligned.joints.resize(pred.joints.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Vector3d q = res.scale * res.rotation * p.col(j) + res.translation;
    res.aligned.joints[j] = {q(0), q(1), q(2)};
  }
  return res;
}

double pa_mpjpe(const AbsPose3D& pred, const AbsPose3D& gt) {
  return mpjpe(procrustes_align(pred, gt).aligned, gt, false, 0);
}

MrpeResult mrpe(const std::vector<Point3>& preds, const std::vector<Point3>& gts) {
  if (preds.size() != gts.size()) {
    throw JointCountMismatch("mrpe: prediction and groundtruth counts differ");
  }
  if (preds.empty()) {
    throw EmptySet("mrpe: no samples");
  }
  MrpeResult res;
  for (size_t i = 0; i < preds.size(); ++i) {
    res.total += joint_distance(preds[i], gts[i]);
    res.axes.x += std::abs(preds[i].x - gts[i].x);
    res.axes.y += std::abs(preds[i].y - gts[i].y);
    res.axes.z += std::abs(preds[i].z - gts[i].z);
  }
  const double n = static_cast<double>(preds.size());
  res.total /= n;
  res.axes = {res.axes.x / n, res.axes.y / n, res.axes.z / n};
  return res;
}

Matching match_persons(const std::vector<PersonPrediction>& preds,
                       const std::vector<AbsPose3D>& gts, double radius_mm, int root_index) {
  struct Candidate {
    double dist;
    int pred;
    int gt;
  };
  std::vector<Candidate> cands;
  for (size_t i = 0; i < preds.size(); ++i) {
    for (size_t j = 0; j < gts.size(); ++j) {
      const double d =
          joint_distance(preds[i].pose.joints[root_index], gts[j].joints[root_index]);
      if (d <= radius_mm) {
        cands.push_back({d, static_cast<int>(i), static_cast<int>(j)});
      }
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });

  Matching m;
  std::vector<std::uint8_t> pred_used(preds.size(), 0), gt_used(gts.size(), 0);
  for (const Candidate& c : cands) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = 1;
    gt_used[c.gt] = 1;
    m.pairs.emplace_back(c.pred, c.gt);
  }
  for (size_t j = 0; j < gts.size(); ++j) {
    if (!gt_used[j]) m.unmatched_gt.push_back(static_cast<int>(j));
  }
  return m;
}

double pck(const std::vector<std::pair<AbsPose3D, AbsPose3D>>& pairs, double threshold_mm,
           bool root_align, int root_index) {
  return pck_all(pairs, threshold_mm, root_align, root_index, 0);
}

double pck_all(const std::vector<std::pair<AbsPose3D, AbsPose3D>>& pairs, double threshold_mm,
               bool root_align, int root_index, std::int64_t unmatched_gt_joints) {
  std::int64_t correct = 0, total = unmatched_gt_joints;
  for (const auto& [pred, gt] : pairs) {
    check_same_joints(pred, gt);
    Point3 shift{0.0, 0.0, 0.0};
    if (root_align) {
      const Point3& pr = pred.joints[root_index];
      const Point3& gr = gt.joints[root_index];
      shift = {gr.x - pr.x, gr.y - pr.y, gr.z - pr.z};
    }
    for (size_t j = 0; j < pred.joints.size(); ++j) {
      const Point3 p{pred.joints[j].x + shift.x, pred.joints[j].y + shift.y,
                     pred.joints[j].z + shift.z};
      if (joint_distance(p, gt.joints[j]) <= threshold_mm) ++correct;
      ++total;
    }
  }
  return total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

double auc(const PckCurve& curve) {
  if (curve.points.size() < 2) {
    throw TooFewPoints("auc: curve needs at least 2 points");
  }
  double sum = 0.0;
  for (const auto& [t, frac] : curve.points) sum += frac;
  return sum / static_cast<double>(curve.points.size());
}

double ap_root(const std::vector<PersonPrediction>& preds,
               const std::vector<PersonGroundTruth>& gts, int root_index,
               double threshold_mm) {
  if (preds.empty() || gts.empty()) return 0.0;

  std::vector<int> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return preds[a].score > preds[b].score; });

  std::map<int, std::vector<int>> gt_by_image;
  for (size_t j = 0; j < gts.size(); ++j) {
    gt_by_image[gts[j].image_id].push_back(static_cast<int>(j));
  }
  std::vector<std::uint8_t> claimed(gts.size(), 0);

  std::vector<double> precision, recall;
  std::int64_t tp = 0;
  const double n_gt = static_cast<double>(gts.size());
  for (size_t rank = 0; rank < order.size(); ++rank) {
    const PersonPrediction& pred = preds[order[rank]];
    const Point3& root = pred.pose.joints[root_index];
    int best_gt = -1;
    double best_dist = threshold_mm;  // strict: correct only when dist < threshold
    auto it = gt_by_image.find(pred.image_id);
    if (it != gt_by_image.end()) {
      for (int j : it->second) {
        if (claimed[j]) continue;
        const double d = joint_distance(root, gts[j].pose.joints[root_index]);
        if (d < best_dist) {
          best_dist = d;
          best_gt = j;
        }
      }
    }
    if (best_gt >= 0) {
      claimed[best_gt] = 1;
      ++tp;
    }
    precision.push_back(static_cast<double>(tp) / static_cast<double>(rank + 1));
    recall.push_back(static_cast<double>(tp) / n_gt);
  }

  // All-point interpolation: integrate the running-max precision over recall.
  double ap = 0.0, prev_recall = 0.0, max_prec = 0.0;
  std::vector<double> interp(precision.size());
  for (size_t i = precision.size(); i-- > 0;) {
    max_prec = std::max(max_prec, precision[i]);
    interp[i] = max_prec;
  }
  for (size_t i = 0; i < precision.size(); ++i) {
    ap += (recall[i] - prev_recall) * interp[i];
    prev_recall = recall[i];
  }
  return ap;
}

namespace detail {

ImageEval evaluate_image(const std::vector<PersonPrediction>& preds,
                         const std::vector<AbsPose3D>& gts, const EvalConfig& cfg) {
  ImageEval ev;
  ev.matching = match_persons(preds, gts, cfg.match_radius_mm, cfg.root_index);

  for (const auto& [pi, gi] : ev.matching.pairs) {
    const AbsPose3D& pred = preds[pi].pose;
    const AbsPose3D& gt = gts[gi];
    ev.sum_mpjpe += mpjpe(pred, gt, true, cfg.root_index);
    ev.sum_pa_mpjpe += pa_mpjpe(pred, gt);
    ++ev.matched_pairs;

    const Point3& pr = pred.joints[cfg.root_index];
    const Point3& gr = gt.joints[cfg.root_index];
    ev.matched_pred_roots.push_back(pr);
    ev.matched_gt_roots.push_back(gr);

    const Point3 shift{gr.x - pr.x, gr.y - pr.y, gr.z - pr.z};
    for (size_t j = 0; j < pred.joints.size(); ++j) {
      const Point3 aligned{pred.joints[j].x + shift.x, pred.joints[j].y + shift.y,
                           pred.joints[j].z + shift.z};
      ev.rel_joint_errors.push_back(joint_distance(aligned, gt.joints[j]));
      ev.abs_joint_errors.push_back(joint_distance(pred.joints[j], gt.joints[j]));
    }
  }
  for (int gi : ev.matching.unmatched_gt) {
    ev.unmatched_gt_joints += static_cast<std::int64_t>(gts[gi].joints.size());
  }
  return ev;
}

EvalReport merge_image_evals(const std::vector<ImageEval>& evals,
                             const std::vector<PersonPrediction>& preds,
                             const std::vector<PersonGroundTruth>& gts,
                             const EvalConfig& cfg) {
  EvalReport rep;
  rep.images = static_cast<std::int64_t>(evals.size());
  rep.predictions = static_cast<std::int64_t>(preds.size());
  rep.groundtruths = static_cast<std::int64_t>(gts.size());

  double sum_mpjpe = 0.0, sum_pa = 0.0;
  std::vector<Point3> pred_roots, gt_roots;
  std::vector<double> rel_errors, abs_errors;
  std::int64_t unmatched_gt_joints = 0;
  for (const ImageEval& ev : evals) {
    sum_mpjpe += ev.sum_mpjpe;
    sum_pa += ev.sum_pa_mpjpe;
    rep.matched += ev.matched_pairs;
    unmatched_gt_joints += ev.unmatched_gt_joints;
    pred_roots.insert(pred_roots.end(), ev.matched_pred_roots.begin(),
                      ev.matched_pred_roots.end());
    gt_roots.insert(gt_roots.end(), ev.matched_gt_roots.begin(), ev.matched_gt_roots.end());
    rel_errors.insert(rel_errors.end(), ev.rel_joint_errors.begin(), ev.rel_joint_errors.end());
    abs_errors.insert(abs_errors.end(), ev.abs_joint_errors.begin(), ev.abs_joint_errors.end());
  }

  const std::vector<double> grid = auc_grid(cfg);
  const std::int64_t matched_joints = static_cast<std::int64_t>(rel_errors.size());
  const std::int64_t all_joints = matched_joints + unmatched_gt_joints;

  rep.curve_rel_matched = curve_from_errors(rel_errors, matched_joints, grid);
  rep.curve_abs_matched = curve_from_errors(abs_errors, matched_joints, grid);
  rep.curve_rel_all = curve_from_errors(rel_errors, all_joints, grid);
  rep.curve_abs_all = curve_from_errors(abs_errors, all_joints, grid);

  auto frac_at = [](const std::vector<double>& errors, double thr, std::int64_t denom) {
    std::int64_t c = 0;
    for (double e : errors) {
      if (e <= thr) ++c;
    }
    return denom > 0 ? static_cast<double>(c) / static_cast<double>(denom) : 0.0;
  };
  rep.pck_rel_all = frac_at(rel_errors, cfg.pck_threshold_mm, all_joints);
  rep.pck_abs_all = frac_at(abs_errors, cfg.pck_threshold_mm, all_joints);
  rep.auc_rel_all = auc(rep.curve_rel_all);

  if (rep.matched > 0) {
    rep.mpjpe_mm = sum_mpjpe / static_cast<double>(rep.matched);
    rep.pa_mpjpe_mm = sum_pa / static_cast<double>(rep.matched);
    const MrpeResult r = mrpe(pred_roots, gt_roots);
    rep.mrpe_mm = r.total;
    rep.mrpe_axes_mm = r.axes;
    rep.pck_rel_matched = frac_at(rel_errors, cfg.pck_threshold_mm, matched_joints);
    rep.pck_abs_matched = frac_at(abs_errors, cfg.pck_threshold_mm, matched_joints);
    rep.auc_rel_matched = auc(rep.curve_rel_matched);
  }

  rep.ap_root = ap_root(preds, gts, cfg.root_index, cfg.ap_threshold_mm);
  return rep;
}

}  // namespace detail

EvalReport evaluate(const std::vector<PersonPrediction>& preds,
                    const std::vector<PersonGroundTruth>& gts, const EvalConfig& cfg) {
  if (cfg.root_index < 0) {
    throw SchemaMismatch("evaluate: root index out of range");
  }
  for (const auto& p : preds) {
    if (!gts.empty() && p.pose.joints.size() != gts.front().pose.joints.size()) {
      throw SchemaMismatch("evaluate: prediction and groundtruth joint counts differ");
    }
    if (static_cast<size_t>(cfg.root_index) >= p.pose.joints.size()) {
      throw SchemaMismatch("evaluate: root index out of range");
    }
  }
  for (const auto& g : gts) {
    if (static_cast<size_t>(cfg.root_index) >= g.pose.joints.size()) {
      throw SchemaMismatch("evaluate: root index out of range");
    }
  }

  // Group person lists per image id, keeping input order inside each image.
  std::map<int, std::pair<std::vector<PersonPrediction>, std::vector<AbsPose3D>>> images;
  for (const auto& p : preds) images[p.image_id].first.push_back(p);
  for (const auto& g : gts) images[g.image_id].second.push_back(g.pose);

  std::vector<const std::pair<std::vector<PersonPrediction>, std::vector<AbsPose3D>>*> slots;
  slots.reserve(images.size());
  for (const auto& [id, lists] : images) slots.push_back(&lists);

  std::vector<detail::ImageEval> evals(slots.size());
  const std::int64_t n = static_cast<std::int64_t>(slots.size());
#pragma omp parallel for
  for (std::int64_t i = 0; i < n; ++i) {
    evals[i] = detail::evaluate_image(slots[i]->first, slots[i]->second, cfg);
  }
  return detail::merge_image_evals(evals, preds, gts, cfg);
}

}  // namespace abspose
