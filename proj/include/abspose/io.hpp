// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "abspose/metrics.hpp"
#include "abspose/regressor.hpp"
#include "abspose/synth.hpp"
#include "abspose/types.hpp"

namespace abspose {

inline constexpr const char* kSchemaVersion = "abspose/1";

// Groundtruth document: images with intrinsics, one shared skeleton, persons
// with a detector-style box and camera-centered joints in mm.
struct GtImage {
  int id = 0;
  int width = 0;
  int height = 0;
  CameraIntrinsics intrinsics;
};
struct GtPerson {
  int image_id = 0;
  BBox bbox;
  std::vector<Point3> joints_cam;
  int root_index = 0;
};
struct GtDocument {
  std::vector<GtImage> images;
  SkeletonDef skeleton;
  std::vector<GtPerson> persons;

  const GtImage& image_by_id(int id) const;
};

// Prediction document: per person a score, the root (pixels + absolute depth)
// and the root-relative pose (pixels + relative depth).
struct PredPerson {
  int image_id = 0;
  double score = 1.0;
  RootCoord root;
  std::vector<Point3> rel_pose;
};
struct PredDocument {
  std::vector<PredPerson> persons;
};

// Input for the distance-minimization baselines: an estimated 2D pose and
// camera-axis root-relative 3D joints, plus the detection box for the k
// method.
struct FitPerson {
  int image_id = 0;
  BBox bbox;
  std::vector<Point2> joints_2d;
  std::vector<Point3> joints_rel_cam;
};
struct FitDocument {
  std::vector<FitPerson> persons;
};

GtDocument load_gt(const std::filesystem::path& path);
PredDocument load_pred(const std::filesystem::path& path);
FitDocument load_fit(const std::filesystem::path& path);
RegressorParams load_model(const std::filesystem::path& path);

void write_gt(const GtDocument& doc, const std::filesystem::path& path);
void write_pred(const PredDocument& doc, const std::filesystem::path& path);
void write_fit(const FitDocument& doc, const std::filesystem::path& path);
void write_model(const RegressorParams& params, const std::filesystem::path& path);

// Evaluation report with config echo and PCK curve rows.
void write_report(const EvalReport& report, const EvalConfig& cfg, const std::string& mode,
                  const std::filesystem::path& path);
// Curve rows as CSV; values formatted exactly as in the JSON report.
void write_pck_csv(const EvalReport& report, const std::filesystem::path& path);

// Deterministic serialization: keys in sorted order, floating-point numbers
// at 17 significant digits, arrays of scalars on one line.
std::string dump_json(const nlohmann::json& j);
std::string format_double(double x);

// Writes to a temp file in the same directory, then renames into place.
void write_text_atomic(const std::string& text, const std::filesystem::path& path);
void write_json_atomic(const nlohmann::json& j, const std::filesystem::path& path);

// Document builders for synthetic scenes. The groundtruth stays noiseless;
// predictions get pixel noise on the pose and depth noise on the root; fit
// inputs get pixel noise plus optional limb-joint outliers and box jitter.
GtDocument make_gt_document(const SceneConfig& cfg, std::span<const SceneSample> samples);
PredDocument make_pred_document(std::span<const SceneSample> samples, int root_index,
                                const NoiseConfig& noise, std::uint64_t seed);
FitDocument make_fit_document(std::span<const SceneSample> samples, const SkeletonDef& skeleton,
                              const NoiseConfig& noise, double outlier_fraction,
                              double outlier_px, std::uint64_t seed);

// Conversions used by evaluation and the CLI.
std::vector<PersonGroundTruth> gt_persons(const GtDocument& doc);
std::vector<PersonPrediction> pred_persons(const PredDocument& pred, const GtDocument& gt);

}  // namespace abspose
