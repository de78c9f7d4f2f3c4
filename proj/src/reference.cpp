// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include "abspose/reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "abspose/errors.hpp"
#include "abspose/rng.hpp"

namespace abspose::reference {

Point2 soft_argmax_2d(const Heatmap2D& h) {
  double m = h.data[0];
  for (double s : h.data) m = std::max(m, s);
  double norm = 0.0, wx = 0.0, wy = 0.0;
  for (int y = 0; y < h.height; ++y) {
    for (int x = 0; x < h.width; ++x) {
      const double e = std::exp(h.at(y, x) - m);
      norm += e;
      wx += e * x;
      wy += e * y;
    }
  }
  return {wx / norm, wy / norm};
}

Point3 soft_argmax_3d(const Heatmap3D& h) {
  double m = h.data[0];
  for (double s : h.data) m = std::max(m, s);
  double norm = 0.0, wx = 0.0, wy = 0.0, wz = 0.0;
  for (int z = 0; z < h.depth; ++z) {
    for (int y = 0; y < h.height; ++y) {
      for (int x = 0; x < h.width; ++x) {
        const double e = std::exp(h.at(z, y, x) - m);
        norm += e;
        wx += e * x;
        wy += e * y;
        wz += e * z;
      }
    }
  }
  return {wx / norm, wy / norm, wz / norm};
}

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

std::vector<SceneSample> generate_scene(const SceneConfig& cfg) {
  const int n = detail::draw_person_count(cfg);
  std::vector<SceneSample> persons(n);
  for (int i = 0; i < n; ++i) {
    persons[i] = detail::sample_person(cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
  }
  return persons;
}

EvalReport evaluate(const std::vector<PersonPrediction>& preds,
                    const std::vector<PersonGroundTruth>& gts, const EvalConfig& cfg) {
  std::map<int, std::pair<std::vector<PersonPrediction>, std::vector<AbsPose3D>>> images;
  for (const auto& p : preds) images[p.image_id].first.push_back(p);
  for (const auto& g : gts) images[g.image_id].second.push_back(g.pose);

  std::vector<detail::ImageEval> evals;
  evals.reserve(images.size());
  for (const auto& [id, lists] : images) {
    evals.push_back(detail::evaluate_image(lists.first, lists.second, cfg));
  }
  return detail::merge_image_evals(evals, preds, gts, cfg);
}

}  // namespace abspose::reference
