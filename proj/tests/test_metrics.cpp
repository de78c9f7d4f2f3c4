// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>

#include "abspose/errors.hpp"
#include "abspose/metrics.hpp"
#include "abspose/rng.hpp"
#include "oracles.hpp"

using namespace abspose;

namespace {

AbsPose3D random_pose(Rng& rng, int joints, double depth) {
  AbsPose3D pose;
  for (int j = 0; j < joints; ++j) {
    pose.joints.push_back({rng.uniform(-900.0, 900.0), rng.uniform(-900.0, 900.0),
                           depth + rng.uniform(-400.0, 400.0)});
  }
  return pose;
}

AbsPose3D add_noise(const AbsPose3D& pose, Rng& rng, double sigma) {
  AbsPose3D out = pose;
  for (Point3& p : out.joints) {
    p.x += sigma * rng.normal();
    p.y += sigma * rng.normal();
    p.z += sigma * rng.normal();
  }
  return out;
}

AbsPose3D apply_similarity(const AbsPose3D& pose, const Eigen::Matrix3d& r, double s,
                           const Eigen::Vector3d& t) {
  AbsPose3D out;
  for (const Point3& p : pose.joints) {
    const Eigen::Vector3d q = s * r * Eigen::Vector3d(p.x, p.y, p.z) + t;
    out.joints.push_back({q.x(), q.y(), q.z()});
  }
  return out;
}

Eigen::Matrix3d random_rotation(Rng& rng) {
  Eigen::Vector3d axis(rng.normal(), rng.normal(), rng.normal());
  axis.normalize();
  return Eigen::AngleAxisd(rng.uniform(0.0, 3.14159265), axis).toRotationMatrix();
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("mpjpe") {
  Rng rng(1);
  const AbsPose3D gt = random_pose(rng, 6, 4000.0);
  CHECK(mpjpe(gt, gt, false, 0) == 0.0);

  AbsPose3D shifted = gt;
  for (Point3& p : shifted.joints) p.z += 100.0;
  CHECK(mpjpe(shifted, gt, true, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mpjpe(shifted, gt, false, 0) == doctest::Approx(100.0));

  AbsPose3D a, b;
  a.joints = {{30.0, 0.0, 0.0}, {0.0, 50.0, 0.0}};
  b.joints = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  CHECK(mpjpe(a, b, false, 0) == doctest::Approx(40.0));

  AbsPose3D c;
  c.joints = {{0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(mpjpe(a, c, false, 0), JointCountMismatch);
}

TEST_CASE("procrustes recovers similarity transforms") {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const AbsPose3D gt = random_pose(rng, 8, 3500.0);
    const AbsPose3D pred = apply_similarity(
        gt, random_rotation(rng), rng.uniform(0.3, 3.0),
        Eigen::Vector3d(rng.uniform(-2000.0, 2000.0), rng.uniform(-2000.0, 2000.0),
                        rng.uniform(-2000.0, 2000.0)));
    const ProcrustesResult res = procrustes_align(pred, gt);
    CHECK(mpjpe(res.aligned, gt, false, 0) < 1e-9);
    CHECK(res.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.scale > 0.0);
  }
}

TEST_CASE("procrustes identity on equal inputs") {
  Rng rng(3);
  const AbsPose3D gt = random_pose(rng, 7, 3000.0);
  const ProcrustesResult res = procrustes_align(gt, gt);
  CHECK(res.scale == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((res.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-9);
  CHECK(res.translation.norm() < 1e-6);
}

TEST_CASE("procrustes beats random similarity transforms") {
  Rng rng(4);
  const AbsPose3D gt = random_pose(rng, 6, 3200.0);
  const AbsPose3D pred = add_noise(gt, rng, 80.0);
  const ProcrustesResult res = procrustes_align(pred, gt);
  double closed = 0.0;
  for (size_t j = 0; j < gt.joints.size(); ++j) {
    const Point3& a = res.aligned.joints[j];
    const Point3& b = gt.joints[j];
    closed += (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z);
  }
  for (int i = 0; i < 10000; ++i) {
    const AbsPose3D cand = apply_similarity(
        pred, random_rotation(rng), rng.uniform(0.2, 4.0),
        Eigen::Vector3d(rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0),
                        rng.uniform(-500.0, 500.0)));
    double val = 0.0;
    for (size_t j = 0; j < gt.joints.size(); ++j) {
      const Point3& a = cand.joints[j];
      const Point3& b = gt.joints[j];
      val += (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z);
    }
    CHECK(closed <= val + 1e-9);
  }
}

TEST_CASE("procrustes rejects degenerate groundtruth") {
  AbsPose3D pred, gt;
  for (int j = 0; j < 4; ++j) {
    pred.joints.push_back({static_cast<double>(j), 0.0, 0.0});
    gt.joints.push_back({5.0, 5.0, 5.0});
  }
  CHECK_THROWS_AS(procrustes_align(pred, gt), DegenerateGt);
}

TEST_CASE("pa_mpjpe properties") {
  Rng rng(5);
  // A similarity-transformed copy aligns exactly.
  const AbsPose3D gt = random_pose(rng, 9, 4500.0);
  const AbsPose3D rigid = apply_similarity(gt, random_rotation(rng), 2.0,
                                           Eigen::Vector3d(100.0, -50.0, 30.0));
  CHECK(pa_mpjpe(rigid, gt) < 1e-9);

  // Agreement with Eigen's closed form on noisy pairs.
  for (int trial = 0; trial < 300; ++trial) {
    const AbsPose3D g = random_pose(rng, 17, 4000.0);
    const AbsPose3D p = add_noise(g, rng, rng.uniform(5.0, 60.0));
    CHECK(pa_mpjpe(p, g) == doctest::Approx(oracles::umeyama_pa_mpjpe(p, g)).epsilon(1e-9));
  }

  // The squared-error ordering is a theorem for any inputs: root alignment is
  // one member of the similarity class the alignment minimizes over.
  for (int trial = 0; trial < 300; ++trial) {
    const AbsPose3D g = random_pose(rng, 6, 4000.0);
    const AbsPose3D p = add_noise(g, rng, rng.uniform(50.0, 600.0));
    const ProcrustesResult res = procrustes_align(p, g);
    double sq_pa = 0.0, sq_root = 0.0;
    const Point3 shift{g.joints[0].x - p.joints[0].x, g.joints[0].y - p.joints[0].y,
                       g.joints[0].z - p.joints[0].z};
    for (size_t j = 0; j < g.joints.size(); ++j) {
      const Point3& a = res.aligned.joints[j];
      sq_pa += (a.x - g.joints[j].x) * (a.x - g.joints[j].x) +
               (a.y - g.joints[j].y) * (a.y - g.joints[j].y) +
               (a.z - g.joints[j].z) * (a.z - g.joints[j].z);
      const Point3 r{p.joints[j].x + shift.x, p.joints[j].y + shift.y,
                     p.joints[j].z + shift.z};
      sq_root += (r.x - g.joints[j].x) * (r.x - g.joints[j].x) +
                 (r.y - g.joints[j].y) * (r.y - g.joints[j].y) +
                 (r.z - g.joints[j].z) * (r.z - g.joints[j].z);
    }
    CHECK(sq_pa <= sq_root + 1e-9);
  }

  // Invariance under similarity transforms of the prediction.
  const AbsPose3D p0 = add_noise(gt, rng, 50.0);
  const double base = pa_mpjpe(p0, gt);
  for (int trial = 0; trial < 20; ++trial) {
    const AbsPose3D moved = apply_similarity(
        p0, random_rotation(rng), rng.uniform(0.5, 2.0),
        Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()) * 300.0);
    CHECK(std::abs(pa_mpjpe(moved, gt) - base) < 1e-9);
  }
}

TEST_CASE("pa_mpjpe matches the random-search oracle on 5-joint instances") {
  Rng rng(6);
  for (int trial = 0; trial < 3; ++trial) {
    const AbsPose3D g = random_pose(rng, 5, 3000.0);
    const AbsPose3D p = add_noise(g, rng, 120.0);
    const double pa = pa_mpjpe(p, g);
    const double oracle = oracles::procrustes_search_oracle(p, g, 24, 1000 + trial);
    CHECK(std::abs(pa - oracle) < 1e-6);
  }
}

TEST_CASE("mrpe") {
  const MrpeResult r = mrpe({{0.0, 0.0, 1000.0}}, {{0.0, 0.0, 1120.0}});
  CHECK(r.total == doctest::Approx(120.0));
  CHECK(r.axes.x == 0.0);
  CHECK(r.axes.y == 0.0);
  CHECK(r.axes.z == doctest::Approx(120.0));

  const std::vector<Point3> pts{{1.0, 2.0, 3.0}, {-4.0, 0.0, 9.0}};
  const MrpeResult zero = mrpe(pts, pts);
  CHECK(zero.total == 0.0);

  Rng rng(7);
  std::vector<Point3> preds, gts;
  for (int i = 0; i < 50; ++i) {
    preds.push_back({rng.normal(), rng.normal(), rng.normal()});
    gts.push_back({rng.normal(), rng.normal(), rng.normal()});
  }
  const MrpeResult m = mrpe(preds, gts);
  CHECK(m.axes.x <= m.total + 1e-12);
  CHECK(m.axes.y <= m.total + 1e-12);
  CHECK(m.axes.z <= m.total + 1e-12);

  CHECK_THROWS_AS(mrpe({}, {}), EmptySet);
}

TEST_CASE("match_persons greedy semantics") {
  auto person = [](double x, double z) {
    AbsPose3D pose;
    pose.joints = {{x, 0.0, z}};
    return pose;
  };

  // Single prediction on a groundtruth root.
  {
    const Matching m = match_persons({{person(0.0, 3000.0), 1.0, 0}}, {person(0.0, 3000.0)},
                                     500.0, 0);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.unmatched_gt.empty());
  }

  // Crossed distances: the globally smallest pair wins first, which is not
  // the assignment a min-cost matcher would pick.
  {
    const std::vector<double> px{0.0, 30.0};
    const std::vector<double> gx{10.0, -60.0};
    std::vector<PersonPrediction> preds{{person(px[0], 3000.0), 1.0, 0},
                                        {person(px[1], 3000.0), 1.0, 0}};
    std::vector<AbsPose3D> gts{person(gx[0], 3000.0), person(gx[1], 3000.0)};
    const Matching m = match_persons(preds, gts, 500.0, 0);
    REQUIRE(m.pairs.size() == 2);
    CHECK(m.pairs[0] == std::make_pair(0, 0));  // distance 10 first
    CHECK(m.pairs[1] == std::make_pair(1, 1));  // forced to distance 90

    const auto min_cost = oracles::min_cost_matching(
        {{px[0], 0.0, 3000.0}, {px[1], 0.0, 3000.0}},
        {{gx[0], 0.0, 3000.0}, {gx[1], 0.0, 3000.0}}, 500.0);
    double oracle_cost = 0.0;
    for (const auto& [pi, gi] : min_cost) oracle_cost += std::abs(px[pi] - gx[gi]);
    CHECK(oracle_cost < 10.0 + 90.0);  // greedy is deliberately not min-cost here
  }

  // Beyond-radius predictions stay unmatched.
  {
    const Matching m = match_persons({{person(10000.0, 3000.0), 1.0, 0}},
                                     {person(0.0, 3000.0)}, 500.0, 0);
    CHECK(m.pairs.empty());
    CHECK(m.unmatched_gt == std::vector<int>{0});
  }
}

TEST_CASE("greedy equals min-cost under wide separation") {
  Rng rng(8);
  const double radius = 500.0;
  for (int trial = 0; trial < 50; ++trial) {
    // Groundtruth roots on a coarse grid, spacing > 2 * radius.
    std::vector<AbsPose3D> gts;
    std::vector<Point3> gt_roots;
    const int n = 2 + static_cast<int>(rng.bounded(3));
    for (int i = 0; i < n; ++i) {
      const Point3 root{i * 1100.0, 0.0, 3000.0 + 1100.0 * static_cast<double>(rng.bounded(3))};
      AbsPose3D pose;
      pose.joints = {root};
      gts.push_back(pose);
      gt_roots.push_back(root);
    }
    std::vector<PersonPrediction> preds;
    std::vector<Point3> pred_roots;
    for (int i = 0; i < n; ++i) {
      Point3 root = gt_roots[i];
      root.x += rng.uniform(-600.0, 600.0);  // sometimes beyond the radius
      AbsPose3D pose;
      pose.joints = {root};
      preds.push_back({pose, 1.0, 0});
      pred_roots.push_back(root);
    }
    const Matching greedy = match_persons(preds, gts, radius, 0);
    auto oracle = oracles::min_cost_matching(pred_roots, gt_roots, radius);
    auto sorted_pairs = greedy.pairs;
    std::sort(sorted_pairs.begin(), sorted_pairs.end());
    std::sort(oracle.begin(), oracle.end());
    CHECK(sorted_pairs == oracle);
  }
}

TEST_CASE("pck counts and boundary") {
  AbsPose3D gt, pred;
  gt.joints = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  pred.joints = {{100.0, 0.0, 0.0}, {200.0, 0.0, 0.0}};
  const std::vector<std::pair<AbsPose3D, AbsPose3D>> pairs{{pred, gt}};
  CHECK(pck(pairs, 150.0, false, 0) == doctest::Approx(0.5));
  CHECK(pck({{gt, gt}}, 150.0, false, 0) == 1.0);

  AbsPose3D boundary;
  boundary.joints = {{150.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  CHECK(pck({{boundary, gt}}, 150.0, false, 0) == 1.0);  // error == threshold counts

  // Unmatched groundtruth joints count against the all-mode denominator.
  CHECK(pck_all(pairs, 150.0, false, 0, 2) == doctest::Approx(0.25));

  // Monotone in threshold.
  double prev = 0.0;
  for (double t = 10.0; t <= 300.0; t += 10.0) {
    const double v = pck(pairs, t, false, 0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("auc") {
  PckCurve ones, halves;
  for (double t = 5.0; t <= 150.0; t += 5.0) {
    ones.points.emplace_back(t, 1.0);
    halves.points.emplace_back(t, 0.5);
  }
  CHECK(auc(ones) == doctest::Approx(1.0));
  CHECK(auc(halves) == doctest::Approx(0.5));

  PckCurve dominated = halves;
  CHECK(auc(ones) >= auc(dominated));

  PckCurve tiny;
  tiny.points.emplace_back(5.0, 1.0);
  CHECK_THROWS_AS(auc(tiny), TooFewPoints);
}

TEST_CASE("ap_root hand case equals brute-force enumeration") {
  auto pose_at = [](double x, double z) {
    AbsPose3D p;
    p.joints = {{x, 0.0, z}};
    return p;
  };
  const std::vector<PersonGroundTruth> gts{{pose_at(0.0, 3000.0), 0},
                                           {pose_at(500.0, 4000.0), 0}};
  const std::vector<PersonPrediction> preds{{pose_at(0.0, 3010.0), 0.9, 0},
                                            {pose_at(2000.0, 5000.0), 0.8, 0},
                                            {pose_at(500.0, 4100.0), 0.7, 0}};
  const double ap = ap_root(preds, gts, 0, 250.0);
  CHECK(ap == oracles::ap_bruteforce(preds, gts, 0, 250.0));
  CHECK(ap == doctest::Approx(5.0 / 6.0).epsilon(1e-12));

  // Perfect detections score 1, no detections score 0.
  const std::vector<PersonPrediction> perfect{{pose_at(0.0, 3000.0), 1.0, 0},
                                              {pose_at(500.0, 4000.0), 1.0, 0}};
  CHECK(ap_root(perfect, gts, 0, 250.0) == doctest::Approx(1.0));
  CHECK(ap_root({}, gts, 0, 250.0) == 0.0);

  // The boundary is strict: an error of exactly 250 mm is not a hit.
  const std::vector<PersonPrediction> edge{{pose_at(250.0, 3000.0), 1.0, 0}};
  const std::vector<PersonGroundTruth> one{{pose_at(0.0, 3000.0), 0}};
  CHECK(ap_root(edge, one, 0, 250.0) == 0.0);
}

TEST_CASE("ap_root is order invariant for distinct scores") {
  Rng rng(9);
  auto pose_at = [](double x, double z) {
    AbsPose3D p;
    p.joints = {{x, 0.0, z}};
    return p;
  };
  std::vector<PersonPrediction> preds;
  std::vector<PersonGroundTruth> gts;
  for (int i = 0; i < 8; ++i) {
    gts.push_back({pose_at(i * 1000.0, 3000.0), i % 3});
    preds.push_back({pose_at(i * 1000.0 + rng.uniform(-400.0, 400.0), 3000.0),
                     0.1 + 0.1 * i, i % 3});
  }
  const double base = ap_root(preds, gts, 0, 250.0);
  for (int shuffle = 0; shuffle < 10; ++shuffle) {
    for (size_t i = preds.size(); i > 1; --i) {
      std::swap(preds[i - 1], preds[rng.bounded(i)]);
    }
    CHECK(ap_root(preds, gts, 0, 250.0) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("evaluate on identical predictions is perfect") {
  Rng rng(10);
  std::vector<PersonPrediction> preds;
  std::vector<PersonGroundTruth> gts;
  for (int image = 0; image < 4; ++image) {
    for (int person = 0; person < 2; ++person) {
      const AbsPose3D pose = random_pose(rng, 17, 3000.0 + 1500.0 * person);
      gts.push_back({pose, image});
      preds.push_back({pose, 1.0, image});
    }
  }
  EvalConfig cfg;
  const EvalReport rep = evaluate(preds, gts, cfg);
  CHECK(rep.matched == 8);
  CHECK(*rep.mpjpe_mm == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(*rep.pa_mpjpe_mm == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(*rep.mrpe_mm == 0.0);
  CHECK(rep.pck_rel_all == 1.0);
  CHECK(rep.pck_abs_all == 1.0);
  CHECK(rep.auc_rel_all == 1.0);
  CHECK(rep.ap_root == 1.0);
}

TEST_CASE("evaluate with no predictions") {
  Rng rng(11);
  std::vector<PersonGroundTruth> gts;
  for (int image = 0; image < 3; ++image) gts.push_back({random_pose(rng, 5, 4000.0), image});
  const EvalReport rep = evaluate({}, gts, EvalConfig{});
  CHECK(rep.matched == 0);
  CHECK_FALSE(rep.mpjpe_mm.has_value());
  CHECK_FALSE(rep.mrpe_mm.has_value());
  CHECK(rep.pck_rel_all == 0.0);
  CHECK(rep.ap_root == 0.0);
}

TEST_CASE("evaluate matches the independent reimplementation") {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<PersonPrediction> preds;
    std::vector<PersonGroundTruth> gts;
    for (int image = 0; image < 6; ++image) {
      const int persons = 1 + static_cast<int>(rng.bounded(3));
      for (int p = 0; p < persons; ++p) {
        const AbsPose3D pose = random_pose(rng, 11, 2500.0 + 2000.0 * p);
        gts.push_back({pose, image});
        if (rng.uniform() < 0.85) {
          preds.push_back({add_noise(pose, rng, rng.uniform(10.0, 200.0)),
                           rng.uniform(0.05, 1.0), image});
        }
      }
      if (rng.uniform() < 0.3) {  // a spurious detection
        preds.push_back({random_pose(rng, 11, 12000.0), rng.uniform(0.05, 1.0), image});
      }
    }
    EvalConfig cfg;
    const EvalReport rep = evaluate(preds, gts, cfg);
    const oracles::NaiveReport naive = oracles::naive_evaluate(preds, gts, cfg);
    CHECK(rep.matched == naive.matched);
    CHECK(*rep.mpjpe_mm == doctest::Approx(*naive.mpjpe).epsilon(1e-9));
    CHECK(*rep.pa_mpjpe_mm == doctest::Approx(*naive.pa_mpjpe).epsilon(1e-9));
    CHECK(*rep.mrpe_mm == doctest::Approx(*naive.mrpe).epsilon(1e-9));
    CHECK(rep.pck_rel_all == doctest::Approx(naive.pck_rel_all).epsilon(1e-12));
    CHECK(rep.pck_abs_all == doctest::Approx(naive.pck_abs_all).epsilon(1e-12));
    CHECK(rep.auc_rel_all == doctest::Approx(naive.auc_rel_all).epsilon(1e-12));
    CHECK(*rep.pck_rel_matched == doctest::Approx(*naive.pck_rel_matched).epsilon(1e-12));
    CHECK(rep.ap_root == doctest::Approx(naive.ap_root).epsilon(1e-12));
  }
}

}  // TEST_SUITE
