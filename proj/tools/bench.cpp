// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0
//
// Compares the OpenMP kernels against their serial reference implementations
// on synthetic workloads and prints per-kernel timings plus speedup.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "abspose/heatmap.hpp"
#include "abspose/metrics.hpp"
#include "abspose/reference.hpp"
#include "abspose/rng.hpp"
#include "abspose/root_fit.hpp"
#include "abspose/synth.hpp"

namespace {

using abspose::Rng;

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx\n", name.c_str(),
              serial_ms, parallel_ms, serial_ms / parallel_ms);
}

volatile double g_sink = 0.0;  // keeps results alive

}  // namespace

int main(int argc, char** argv) {
  int reps = 5;
  if (argc > 1) reps = std::max(1, std::atoi(argv[1]));

#ifdef _OPENMP
  std::printf("threads: %d, best of %d reps\n", omp_get_max_threads(), reps);
#else
  std::printf("built without OpenMP, best of %d reps\n", reps);
#endif

  {
    abspose::Heatmap2D h{1024, 1024, {}};
    h.data.resize(static_cast<size_t>(h.width) * h.height);
    Rng rng(11);
    for (double& v : h.data) v = rng.normal();
    const double s = time_best_of(reps, [&] { g_sink = abspose::reference::soft_argmax_2d(h).u; });
    const double p = time_best_of(reps, [&] { g_sink = abspose::soft_argmax_2d(h).u; });
    report("soft_argmax_2d 1024x1024", s, p);
  }

  {
    abspose::Heatmap3D h{96, 96, 96, {}};
    h.data.resize(static_cast<size_t>(h.width) * h.height * h.depth);
    Rng rng(12);
    for (double& v : h.data) v = rng.normal();
    const double s = time_best_of(reps, [&] { g_sink = abspose::reference::soft_argmax_3d(h).x; });
    const double p = time_best_of(reps, [&] { g_sink = abspose::soft_argmax_3d(h).x; });
    report("soft_argmax_3d 96^3", s, p);
  }

  {
    abspose::SceneConfig cfg;
    cfg.seed = 5;
    cfg.min_persons = cfg.max_persons = 1;
    const abspose::SceneSample sample = abspose::generate_scene(cfg).front();
    abspose::RansacConfig rc;
    rc.iterations = 20000;
    rc.seed = 17;
    std::vector<abspose::Point3> rel;
    const abspose::Point3 root = sample.gt_pose.joints[0];
    for (const abspose::Point3& q : sample.gt_pose.joints) {
      rel.push_back({q.x - root.x, q.y - root.y, q.z - root.z});
    }
    const abspose::SkeletonDef skel = abspose::adult_body().skeleton;
    const double s = time_best_of(reps, [&] {
      g_sink = abspose::reference::ransac_root_fit(sample.pose2d, rel, cfg.cam, skel, rc)
                   .translation.z;
    });
    const double p = time_best_of(reps, [&] {
      g_sink = abspose::ransac_root_fit(sample.pose2d, rel, cfg.cam, skel, rc).translation.z;
    });
    report("ransac_root_fit 20k trials", s, p);
  }

  {
    abspose::SceneConfig cfg;
    cfg.seed = 23;
    cfg.min_persons = cfg.max_persons = 512;
    cfg.lateral_x_mm = 1500.0;
    const double s =
        time_best_of(reps, [&] { g_sink = abspose::reference::generate_scene(cfg).size(); });
    const double p = time_best_of(reps, [&] { g_sink = abspose::generate_scene(cfg).size(); });
    report("generate_scene 512 persons", s, p);
  }

  {
    abspose::SceneConfig cfg;
    cfg.seed = 31;
    cfg.min_persons = cfg.max_persons = 3;
    cfg.scene_count = 400;
    const std::vector<abspose::SceneSample> samples = abspose::generate_scenes(cfg);
    std::vector<abspose::PersonPrediction> preds;
    std::vector<abspose::PersonGroundTruth> gts;
    Rng rng(7);
    for (const abspose::SceneSample& s : samples) {
      gts.push_back({s.gt_pose, s.image_id});
      abspose::AbsPose3D noisy = s.gt_pose;
      for (abspose::Point3& q : noisy.joints) {
        q.x += 20.0 * rng.normal();
        q.y += 20.0 * rng.normal();
        q.z += 60.0 * rng.normal();
      }
      preds.push_back({noisy, rng.uniform(), s.image_id});
    }
    abspose::EvalConfig ecfg;
    const double s =
        time_best_of(reps, [&] { g_sink = abspose::reference::evaluate(preds, gts, ecfg).ap_root; });
    const double p = time_best_of(reps, [&] { g_sink = abspose::evaluate(preds, gts, ecfg).ap_root; });
    report("evaluate 400 images", s, p);
  }

  return 0;
}
