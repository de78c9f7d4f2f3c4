// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include "abspose/synth.hpp"

#include <algorithm>
#include <cmath>

#include "abspose/errors.hpp"
#include "abspose/rng.hpp"

namespace abspose {

namespace {

SkeletonDef humanoid_skeleton() {
  SkeletonDef s;
  s.joint_names = {"pelvis",  "spine",   "thorax",  "neck",    "head",   "l_shoulder",
                   "r_shoulder", "l_elbow", "r_elbow", "l_wrist", "r_wrist", "l_hip",
                   "r_hip",   "l_knee",  "r_knee",  "l_ankle", "r_ankle"};
  s.root_index = 0;
  s.limb_flags.assign(17, 0);
  for (int j : {7, 8, 9, 10, 13, 14, 15, 16}) s.limb_flags[j] = 1;  // elbows..ankles
  s.edges = {{0, 1},  {1, 2},  {2, 3},  {3, 4},  {2, 5},  {5, 7},  {7, 9},  {2, 6},
             {6, 8},  {8, 10}, {0, 11}, {11, 13}, {13, 15}, {0, 12}, {12, 14}, {14, 16}};
  return s;
}

}  // namespace

BodyTemplate adult_body() {
  BodyTemplate b;
  b.skeleton = humanoid_skeleton();
  b.unit_offsets = {
      {0.00, 0.00, 0.00},   // pelvis
      {0.00, -0.14, 0.01},  // spine
      {0.00, -0.28, 0.02},  // thorax
      {0.00, -0.37, 0.01},  // neck
      {0.00, -0.48, 0.00},  // head
      {-0.11, -0.32, 0.02}, {0.11, -0.32, 0.02},  // shoulders
      {-0.16, -0.15, 0.05}, {0.16, -0.15, 0.05},  // elbows
      {-0.18, 0.01, 0.07},  {0.18, 0.01, 0.07},   // wrists
      {-0.06, 0.02, 0.00},  {0.06, 0.02, 0.00},   // hips
      {-0.07, 0.26, 0.04},  {0.07, 0.26, 0.04},   // knees
      {-0.08, 0.52, 0.00},  {0.08, 0.52, 0.00},   // ankles
  };
  return b;
}

BodyTemplate child_body() {
  BodyTemplate b;
  b.skeleton = humanoid_skeleton();
  b.unit_offsets = {
      {0.00, 0.00, 0.00},
      {0.00, -0.13, 0.01},
      {0.00, -0.26, 0.02},
      {0.00, -0.34, 0.01},
      {0.00, -0.46, 0.00},
      {-0.14, -0.28, 0.02}, {0.14, -0.28, 0.02},
      {-0.22, -0.15, 0.04}, {0.22, -0.15, 0.04},
      {-0.28, -0.02, 0.05}, {0.28, -0.02, 0.05},
      {-0.07, 0.03, 0.00},  {0.07, 0.03, 0.00},
      {-0.08, 0.28, 0.03},  {0.08, 0.28, 0.03},
      {-0.09, 0.54, 0.00},  {0.09, 0.54, 0.00},
  };
  return b;
}

BodyTemplate flat_body() {
  BodyTemplate b;
  b.skeleton.joint_names = {"center", "tl", "tr", "bl", "br"};
  b.skeleton.root_index = 0;
  b.skeleton.limb_flags.assign(5, 0);
  b.skeleton.edges = {{1, 2}, {2, 4}, {4, 3}, {3, 1}, {0, 1}, {0, 2}, {0, 3}, {0, 4}};
  b.unit_offsets = {
      {0.0, 0.0, 0.0}, {-0.5, -0.5, 0.0}, {0.5, -0.5, 0.0}, {-0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}};
  return b;
}

namespace detail {

int draw_person_count(const SceneConfig& cfg) {
  if (cfg.min_persons < 1 || cfg.max_persons < cfg.min_persons) {
    throw Error("generate_scene: invalid person count range");
  }
  Rng rng(cfg.seed);
  return cfg.min_persons +
         static_cast<int>(rng.bounded(static_cast<std::uint64_t>(cfg.max_persons - cfg.min_persons + 1)));
}

SceneSample sample_person(const SceneConfig& cfg, std::uint64_t person_seed) {
  Rng rng(person_seed);
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    const bool child = cfg.child_fraction > 0.0 && rng.uniform() < cfg.child_fraction;
    const BodyTemplate& body = child ? cfg.child : cfg.body;
    const double height = child ? rng.uniform(cfg.child_height_min_mm, cfg.child_height_max_mm)
                                : rng.uniform(cfg.height_min_mm, cfg.height_max_mm);
    const Point3 root{rng.uniform(-cfg.lateral_x_mm, cfg.lateral_x_mm),
                      rng.uniform(-cfg.lateral_y_mm, cfg.lateral_y_mm),
                      rng.uniform(cfg.depth_min_mm, cfg.depth_max_mm)};

    SceneSample s;
    s.gt_pose.joints.reserve(body.unit_offsets.size());
    s.pose2d.joints.reserve(body.unit_offsets.size());
    bool inside = true;
    for (const Point3& off : body.unit_offsets) {
      const Point3 p{root.x + height * off.x, root.y + height * off.y,
                     root.z + height * off.z};
      const Point2 q = project(p, cfg.cam);
      if (q.u < 0.0 || q.u >= cfg.image.width || q.v < 0.0 || q.v >= cfg.image.height) {
        inside = false;
        break;
      }
      s.gt_pose.joints.push_back(p);
      s.pose2d.joints.push_back(q);
    }
    if (!inside) continue;

    double umin = s.pose2d.joints[0].u, umax = umin;
    double vmin = s.pose2d.joints[0].v, vmax = vmin;
    for (const Point2& q : s.pose2d.joints) {
      umin = std::min(umin, q.u);
      umax = std::max(umax, q.u);
      vmin = std::min(vmin, q.v);
      vmax = std::max(vmax, q.v);
    }
    const double pad_w = cfg.box_pad_frac * (umax - umin);
    const double pad_h = cfg.box_pad_frac * (vmax - vmin);
    s.tight_box = {umin - pad_w, vmin - pad_h, (umax - umin) + 2.0 * pad_w,
                   (vmax - vmin) + 2.0 * pad_h};
    s.squared_box = square_extend(s.tight_box);

    const int root_idx = body.skeleton.root_index;
    const double z_root = s.gt_pose.joints[root_idx].z;
    s.rel_pose.joints.reserve(s.pose2d.joints.size());
    for (size_t j = 0; j < s.pose2d.joints.size(); ++j) {
      s.rel_pose.joints.push_back(
          {s.pose2d.joints[j].u, s.pose2d.joints[j].v, s.gt_pose.joints[j].z - z_root});
    }
    s.true_root = {s.pose2d.joints[root_idx].u, s.pose2d.joints[root_idx].v, z_root};
    s.true_k = compute_k(s.squared_box, cfg.cam, cfg.a_real_mm2);
    s.true_gamma_prime = z_root / s.true_k;
    return s;
  }
  throw PlacementFailure("sample_person: no placement kept all joints in the image");
}

}  // namespace detail

std::vector<SceneSample> generate_scene(const SceneConfig& cfg) {
  const int n = detail::draw_person_count(cfg);
  std::vector<std::uint64_t> seeds(n);
  for (int i = 0; i < n; ++i) seeds[i] = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));

  std::vector<SceneSample> persons(n);
  bool failed = false;
#pragma omp parallel for reduction(|| : failed)
  for (int i = 0; i < n; ++i) {
    try {
      persons[i] = detail::sample_person(cfg, seeds[i]);
    } catch (const PlacementFailure&) {
      failed = true;
    }
  }
  if (failed) {
    throw PlacementFailure("generate_scene: a person could not be placed");
  }
  return persons;
}

std::vector<SceneSample> generate_scenes(const SceneConfig& cfg) {
  std::vector<SceneSample> all;
  for (int s = 0; s < cfg.scene_count; ++s) {
    SceneConfig scene_cfg = cfg;
    scene_cfg.seed = derive_seed(cfg.seed, 0x5ce4e5ULL + static_cast<std::uint64_t>(s));
    std::vector<SceneSample> persons = generate_scene(scene_cfg);
    for (SceneSample& p : persons) p.image_id = s;
    all.insert(all.end(), std::make_move_iterator(persons.begin()),
               std::make_move_iterator(persons.end()));
  }
  return all;
}

SceneSample perturb(const SceneSample& s, const NoiseConfig& noise, std::uint64_t seed) {
  SceneSample out = s;
  Rng rng(seed);
  for (size_t j = 0; j < out.pose2d.joints.size(); ++j) {
    out.pose2d.joints[j].u += noise.sigma2d_px * rng.normal();
    out.pose2d.joints[j].v += noise.sigma2d_px * rng.normal();
    out.rel_pose.joints[j].x = out.pose2d.joints[j].u;
    out.rel_pose.joints[j].y = out.pose2d.joints[j].v;
  }
  const Point2 c = out.tight_box.center();
  const double sw = 1.0 + noise.box_jitter_frac * rng.normal();
  const double sh = 1.0 + noise.box_jitter_frac * rng.normal();
  out.tight_box.w = std::max(1e-6, out.tight_box.w * sw);
  out.tight_box.h = std::max(1e-6, out.tight_box.h * sh);
  out.tight_box.x = c.u - 0.5 * out.tight_box.w;
  out.tight_box.y = c.v - 0.5 * out.tight_box.h;
  out.squared_box = square_extend(out.tight_box);
  return out;
}

Pose2D with_limb_outliers(const Pose2D& p2d, const SkeletonDef& skeleton, double fraction,
                          double magnitude_px, std::uint64_t seed) {
  Pose2D out = p2d;
  Rng rng(seed);
  for (size_t j = 0; j < out.joints.size(); ++j) {
    if (!skeleton.limb_flags[j]) continue;
    if (rng.uniform() < fraction) {
      const double angle = rng.uniform(0.0, 6.28318530717958647692);
      out.joints[j].u += magnitude_px * std::cos(angle);
      out.joints[j].v += magnitude_px * std::sin(angle);
    }
  }
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DimensionMismatch("pearson: input lengths differ");
  }
  if (xs.size() < 2) {
    throw ConstantInput("pearson: need at least 2 samples");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ConstantInput("pearson: an input is constant");
  }
  return sxy / std::sqrt(sxx * syy);
}

CorrelationResult run_k_correlation(const SceneConfig& cfg) {
  const std::vector<SceneSample> samples = generate_scenes(cfg);
  CorrelationResult res;
  res.rows.reserve(samples.size());
  std::vector<double> ks, zs;
  for (size_t i = 0; i < samples.size(); ++i) {
    const SceneSample obs =
        perturb(samples[i], cfg.noise, derive_seed(cfg.seed, 0xb0c5ULL + i));
    const double k = compute_k(obs.squared_box, cfg.cam, cfg.a_real_mm2);
    res.rows.emplace_back(k, samples[i].true_root.z);
    ks.push_back(k);
    zs.push_back(samples[i].true_root.z);
  }
  res.r = pearson(ks, zs);
  return res;
}

}  // namespace abspose
