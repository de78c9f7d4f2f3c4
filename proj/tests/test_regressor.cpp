// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <span>

#include "abspose/camera.hpp"
#include "abspose/errors.hpp"
#include "abspose/heatmap.hpp"
#include "abspose/regressor.hpp"
#include "abspose/rng.hpp"
#include "abspose/synth.hpp"

using namespace abspose;

namespace {

RegressorParams random_params(int feature_dim, int hidden, std::uint64_t seed) {
  RegressorParams p = zero_params(feature_dim, hidden);
  Rng rng(seed);
  for (double& w : p.skip) w = 0.3 * rng.normal();
  for (double& w : p.w1) w = 0.5 * rng.normal();
  for (double& w : p.b1) w = 0.3 * rng.normal();
  for (double& w : p.w2) w = 0.5 * rng.normal();
  return p;
}

std::vector<TrainSample> scene_training_set(const SceneConfig& cfg, bool identity_targets) {
  std::vector<TrainSample> data;
  for (const SceneSample& s : generate_scenes(cfg)) {
    TrainSample t;
    t.features = featurize(s.tight_box, cfg.cam, cfg.image, &s.pose2d, cfg.a_real_mm2);
    t.k_mm = s.true_k;
    t.target_z_mm = identity_targets ? s.true_k : s.true_root.z;
    data.push_back(std::move(t));
  }
  return data;
}

}  // namespace

TEST_SUITE("regressor") {

TEST_CASE("featurize") {
  const CameraIntrinsics cam{1500.0, 1500.0, 960.0, 540.0};
  const ImageSize image{1920, 1080};
  const BBox square{100.0, 100.0, 300.0, 300.0};

  const FeatureVector f = featurize(square, cam, image);
  REQUIRE(f.size() == kFeatureDim);
  CHECK(f[1] == doctest::Approx(1.0));  // aspect of a square box
  CHECK(f[3] == 0.0);                   // no keypoints given
  CHECK(f[4] == 1.0);                   // bias

  const double k = compute_k(square_extend(square), cam);
  CHECK(std::abs(f[0] - std::log(k / 1000.0)) < 1e-12);
  CHECK(f[2] == doctest::Approx(300.0 / 1080.0));

  // Purity: identical inputs give identical output.
  const FeatureVector again = featurize(square, cam, image);
  CHECK(f == again);

  Pose2D p2d;
  p2d.joints = {{150.0, 120.0}, {160.0, 360.0}};
  const FeatureVector with_kp = featurize(square, cam, image, &p2d);
  CHECK(with_kp[3] == doctest::Approx(240.0 / 300.0));
}

TEST_CASE("predict_gamma is exp-positive") {
  const FeatureVector f{0.5, 1.0, 0.2, 0.8, 1.0};
  CHECK(predict_gamma(zero_params(5, 8), f).gamma_prime == 1.0);

  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const RegressorParams p = random_params(5, 4, i);
    FeatureVector x(5);
    for (double& v : x) v = 3.0 * rng.normal();
    CHECK(predict_gamma(p, x).gamma_prime > 0.0);
  }

  CHECK_THROWS_AS(predict_gamma(zero_params(5, 8), FeatureVector{1.0, 2.0}),
                  DimensionMismatch);
}

TEST_CASE("parameter gradients match finite differences") {
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<TrainSample> data;
    RegressorParams params = random_params(5, 3, 50 + trial);
    bool near_kink = true;
    while (near_kink) {
      data.clear();
      for (int i = 0; i < 6; ++i) {
        TrainSample s;
        s.features = {rng.normal(), rng.normal(), rng.normal(), rng.normal(), 1.0};
        s.k_mm = rng.uniform(2000.0, 8000.0);
        s.target_z_mm = rng.uniform(2000.0, 8000.0);
        data.push_back(std::move(s));
      }
      near_kink = false;
      for (const TrainSample& s : data) {
        const double r = predict_gamma(params, s.features).gamma_prime * s.k_mm - s.target_z_mm;
        if (std::abs(r) < 1e-8) near_kink = true;  // resample away from the L1 kink
      }
    }

    const auto [loss, grad] = loss_and_gradient(params, data);
    (void)loss;
    const std::vector<double> flat = flatten(params);
    auto eval = [&](std::span<const double> x) {
      return dataset_loss(unflatten(5, 3, x), data);
    };
    const std::vector<double> fd = finite_difference_gradient(eval, flat, 1e-6);
    double scale = 1e-12;
    for (size_t i = 0; i < flat.size(); ++i) {
      scale = std::max({scale, std::abs(fd[i]), std::abs(grad[i])});
    }
    for (size_t i = 0; i < flat.size(); ++i) {
      CHECK(std::abs(fd[i] - grad[i]) / scale < 1e-4);
    }
  }
}

TEST_CASE("training converges to the identity on Z = k data") {
  SceneConfig cfg;
  cfg.seed = 5;
  cfg.min_persons = cfg.max_persons = 2;
  cfg.scene_count = 120;
  const std::vector<TrainSample> data = scene_training_set(cfg, true);

  TrainConfig tc;
  tc.seed = 3;
  const TrainResult result = train(data, tc);

  double mean_dev = 0.0;
  for (const TrainSample& s : data) {
    mean_dev += std::abs(predict_gamma(result.params, s.features).gamma_prime - 1.0);
  }
  mean_dev /= static_cast<double>(data.size());
  CHECK(mean_dev < 0.02);

  // Descent sanity: final loss is no worse than the untrained loss.
  Rng rng(tc.seed);
  RegressorParams init = zero_params(5, tc.hidden_width);
  for (double& w : init.w1) w = rng.normal(0.0, 0.1);
  for (double& w : init.w2) w = rng.normal(0.0, 0.1);
  CHECK(result.epoch_loss.back() <= dataset_loss(init, data));
  CHECK(result.epoch_loss.size() == static_cast<size_t>(tc.epochs));
}

TEST_CASE("training is bit-reproducible per seed") {
  SceneConfig cfg;
  cfg.seed = 6;
  cfg.min_persons = cfg.max_persons = 1;
  cfg.scene_count = 40;
  const std::vector<TrainSample> data = scene_training_set(cfg, false);
  TrainConfig tc;
  tc.epochs = 50;
  tc.seed = 11;
  const TrainResult a = train(data, tc);
  const TrainResult b = train(data, tc);
  CHECK(flatten(a.params) == flatten(b.params));
  CHECK(a.epoch_loss == b.epoch_loss);
}

TEST_CASE("training rejects an empty dataset") {
  CHECK_THROWS_AS(train({}, TrainConfig{}), EmptyDataset);
}

TEST_CASE("trained model separates child from adult boxes") {
  SceneConfig cfg;
  cfg.seed = 7;
  cfg.min_persons = cfg.max_persons = 2;
  cfg.scene_count = 150;
  cfg.child_fraction = 0.5;
  const std::vector<TrainSample> data = scene_training_set(cfg, false);

  TrainConfig tc;
  tc.epochs = 150;
  tc.seed = 9;
  const TrainResult result = train(data, tc);

  // Features of an adult and a child whose boxes have the same area: the
  // aspect difference should drive the child's correction below the adult's.
  const CameraIntrinsics cam = cfg.cam;
  SceneConfig adult_cfg = cfg;
  adult_cfg.child_fraction = 0.0;
  adult_cfg.min_persons = adult_cfg.max_persons = 1;
  adult_cfg.scene_count = 10;
  SceneConfig child_cfg = adult_cfg;
  child_cfg.child_fraction = 1.0;

  double adult_gamma = 0.0, child_gamma = 0.0;
  int n = 0;
  const auto adult_samples = generate_scenes(adult_cfg);
  const auto child_samples = generate_scenes(child_cfg);
  for (size_t i = 0; i < std::min(adult_samples.size(), child_samples.size()); ++i) {
    const FeatureVector fa = featurize(adult_samples[i].tight_box, cam, cfg.image,
                                       &adult_samples[i].pose2d, cfg.a_real_mm2);
    const FeatureVector fc = featurize(child_samples[i].tight_box, cam, cfg.image,
                                       &child_samples[i].pose2d, cfg.a_real_mm2);
    adult_gamma += predict_gamma(result.params, fa).gamma_prime;
    child_gamma += predict_gamma(result.params, fc).gamma_prime;
    ++n;
  }
  CHECK(child_gamma / n < adult_gamma / n);
  CHECK(child_gamma / n < 1.0);
}

}  // TEST_SUITE
