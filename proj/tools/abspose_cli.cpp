// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface: synthesize scenes, evaluate predictions, fit roots
// with the distance-minimization baselines, run the k-depth correlation
// experiment, and train/apply the depth correction model.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "abspose/camera.hpp"
#include "abspose/errors.hpp"
#include "abspose/io.hpp"
#include "abspose/metrics.hpp"
#include "abspose/regressor.hpp"
#include "abspose/rng.hpp"
#include "abspose/root_fit.hpp"
#include "abspose/synth.hpp"

namespace {

constexpr const char* kVersion = "abspose 1.0.0";

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

// ---------------------------------------------------------------- synth opts

struct SceneFlags {
  std::string config_path;
  std::optional<int> scenes, persons_min, persons_max, image_width, image_height;
  std::optional<double> height_min, height_max, depth_min, depth_max;
  std::optional<double> lateral_x, lateral_y;
  std::optional<double> alpha_x, alpha_y, cx, cy;
  std::optional<std::string> body_template;
  std::optional<double> child_frac, child_height_min, child_height_max;
  std::optional<double> noise_2d, noise_box, noise_depth;
  std::optional<double> box_pad, a_real;
  std::uint64_t seed = 0;
};

void add_scene_options(CLI::App* cmd, SceneFlags& f) {
  cmd->add_option("--config", f.config_path, "scene config JSON; flags override its values");
  cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--scenes", f.scenes, "number of scenes (images)");
  cmd->add_option("--persons-min", f.persons_min, "min persons per scene");
  cmd->add_option("--persons-max", f.persons_max, "max persons per scene");
  cmd->add_option("--height-min", f.height_min, "min person height, mm");
  cmd->add_option("--height-max", f.height_max, "max person height, mm");
  cmd->add_option("--depth-min", f.depth_min, "min root depth, mm");
  cmd->add_option("--depth-max", f.depth_max, "max root depth, mm");
  cmd->add_option("--lateral-x", f.lateral_x, "half-range of root X placement, mm");
  cmd->add_option("--lateral-y", f.lateral_y, "half-range of root Y placement, mm");
  cmd->add_option("--image-width", f.image_width, "synthetic image width, px");
  cmd->add_option("--image-height", f.image_height, "synthetic image height, px");
  cmd->add_option("--alpha-x", f.alpha_x, "focal length / pixel pitch, x");
  cmd->add_option("--alpha-y", f.alpha_y, "focal length / pixel pitch, y");
  cmd->add_option("--cx", f.cx, "principal point x, px");
  cmd->add_option("--cy", f.cy, "principal point y, px");
  cmd->add_option("--template", f.body_template, "body template: adult|child|flat");
  cmd->add_option("--child-frac", f.child_frac, "fraction of child-proportioned persons");
  cmd->add_option("--child-height-min", f.child_height_min, "min child height, mm");
  cmd->add_option("--child-height-max", f.child_height_max, "max child height, mm");
  cmd->add_option("--noise-2d", f.noise_2d, "2D joint noise sigma, px");
  cmd->add_option("--noise-box", f.noise_box, "multiplicative box extent jitter fraction");
  cmd->add_option("--noise-depth", f.noise_depth, "root depth noise sigma, mm");
  cmd->add_option("--box-pad", f.box_pad, "per-side tight box padding fraction");
  cmd->add_option("--a-real", f.a_real, "assumed real person area, mm^2");
}

abspose::BodyTemplate body_by_name(const std::string& name) {
  if (name == "adult") return abspose::adult_body();
  if (name == "child") return abspose::child_body();
  if (name == "flat") return abspose::flat_body();
  throw abspose::SchemaError("unknown body template '" + name + "'");
}

abspose::SceneConfig scene_config_from_json(const json& j) {
  abspose::SceneConfig cfg;
  auto range = [&](const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    lo = j[key].at(0).get<double>();
    hi = j[key].at(1).get<double>();
  };
  if (j.contains("persons")) {
    cfg.min_persons = j["persons"].at(0).get<int>();
    cfg.max_persons = j["persons"].at(1).get<int>();
  }
  range("height_mm", cfg.height_min_mm, cfg.height_max_mm);
  range("depth_mm", cfg.depth_min_mm, cfg.depth_max_mm);
  range("child_height_mm", cfg.child_height_min_mm, cfg.child_height_max_mm);
  if (j.contains("lateral_x_mm")) cfg.lateral_x_mm = j["lateral_x_mm"].get<double>();
  if (j.contains("lateral_y_mm")) cfg.lateral_y_mm = j["lateral_y_mm"].get<double>();
  if (j.contains("image")) {
    cfg.image.width = j["image"].at("width").get<int>();
    cfg.image.height = j["image"].at("height").get<int>();
  }
  if (j.contains("intrinsics")) {
    const json& in = j["intrinsics"];
    cfg.cam = {in.at("alpha_x").get<double>(), in.at("alpha_y").get<double>(),
               in.at("cx").get<double>(), in.at("cy").get<double>()};
  }
  if (j.contains("template")) cfg.body = body_by_name(j["template"].get<std::string>());
  if (j.contains("child_fraction")) cfg.child_fraction = j["child_fraction"].get<double>();
  if (j.contains("noise")) {
    const json& n = j["noise"];
    if (n.contains("sigma2d_px")) cfg.noise.sigma2d_px = n["sigma2d_px"].get<double>();
    if (n.contains("box_jitter_frac"))
      cfg.noise.box_jitter_frac = n["box_jitter_frac"].get<double>();
    if (n.contains("sigma_depth_mm")) cfg.noise.sigma_depth_mm = n["sigma_depth_mm"].get<double>();
  }
  if (j.contains("scenes")) cfg.scene_count = j["scenes"].get<int>();
  if (j.contains("a_real_mm2")) cfg.a_real_mm2 = j["a_real_mm2"].get<double>();
  if (j.contains("box_pad_frac")) cfg.box_pad_frac = j["box_pad_frac"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  return cfg;
}

abspose::SceneConfig resolve_scene_config(const SceneFlags& f) {
  abspose::SceneConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw abspose::IoError("cannot open " + f.config_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw abspose::ParseError(f.config_path + ": " + e.what());
    }
    cfg = scene_config_from_json(j);
  }
  if (f.scenes) cfg.scene_count = *f.scenes;
  if (f.persons_min) cfg.min_persons = *f.persons_min;
  if (f.persons_max) cfg.max_persons = *f.persons_max;
  if (f.height_min) cfg.height_min_mm = *f.height_min;
  if (f.height_max) cfg.height_max_mm = *f.height_max;
  if (f.depth_min) cfg.depth_min_mm = *f.depth_min;
  if (f.depth_max) cfg.depth_max_mm = *f.depth_max;
  if (f.lateral_x) cfg.lateral_x_mm = *f.lateral_x;
  if (f.lateral_y) cfg.lateral_y_mm = *f.lateral_y;
  if (f.image_width) cfg.image.width = *f.image_width;
  if (f.image_height) cfg.image.height = *f.image_height;
  if (f.alpha_x) cfg.cam.alpha_x = *f.alpha_x;
  if (f.alpha_y) cfg.cam.alpha_y = *f.alpha_y;
  if (f.cx) cfg.cam.cx = *f.cx;
  if (f.cy) cfg.cam.cy = *f.cy;
  if (f.body_template) cfg.body = body_by_name(*f.body_template);
  if (f.child_frac) cfg.child_fraction = *f.child_frac;
  if (f.child_height_min) cfg.child_height_min_mm = *f.child_height_min;
  if (f.child_height_max) cfg.child_height_max_mm = *f.child_height_max;
  if (f.noise_2d) cfg.noise.sigma2d_px = *f.noise_2d;
  if (f.noise_box) cfg.noise.box_jitter_frac = *f.noise_box;
  if (f.noise_depth) cfg.noise.sigma_depth_mm = *f.noise_depth;
  if (f.box_pad) cfg.box_pad_frac = *f.box_pad;
  if (f.a_real) cfg.a_real_mm2 = *f.a_real;
  cfg.seed = f.seed;
  return cfg;
}

// --------------------------------------------------------------------- eval

int run_eval(const std::string& gt_path, const std::string& pred_path,
             const std::string& mode, double pck_threshold, double match_radius,
             const std::string& out_path, const std::string& csv_path) {
  const abspose::GtDocument gt = abspose::load_gt(gt_path);
  const abspose::PredDocument pred = abspose::load_pred(pred_path);

  abspose::EvalConfig cfg;
  cfg.pck_threshold_mm = pck_threshold;
  cfg.match_radius_mm = match_radius;
  cfg.root_index = gt.skeleton.root_index;

  const auto preds = abspose::pred_persons(pred, gt);
  const auto gts = abspose::gt_persons(gt);
  const abspose::EvalReport report = abspose::evaluate(preds, gts, cfg);

  abspose::write_report(report, cfg, mode, out_path);
  if (!csv_path.empty()) abspose::write_pck_csv(report, csv_path);

  std::cout << "images=" << report.images << " predictions=" << report.predictions
            << " groundtruths=" << report.groundtruths << " matched=" << report.matched
            << "\n";
  if (mode == "matched") {
    if (report.mpjpe_mm) {
      std::cout << "MPJPE=" << fmt(*report.mpjpe_mm) << "mm PA-MPJPE="
                << fmt(*report.pa_mpjpe_mm) << "mm MRPE=" << fmt(*report.mrpe_mm)
                << "mm PCK_rel=" << fmt(*report.pck_rel_matched) << " PCK_abs="
                << fmt(*report.pck_abs_matched) << " AUC_rel=" << fmt(*report.auc_rel_matched)
                << "\n";
    } else {
      std::cout << "no matched predictions\n";
    }
  } else {
    std::cout << "PCK_rel=" << fmt(report.pck_rel_all) << " PCK_abs="
              << fmt(report.pck_abs_all) << " AUC_rel=" << fmt(report.auc_rel_all) << "\n";
  }
  std::cout << "AP_root=" << fmt(report.ap_root) << "\n";
  return 0;
}

// -------------------------------------------------------------------- synth

int run_synth(const SceneFlags& flags, const std::string& out_path,
              const std::string& pred_out, const std::string& fit_out,
              double outlier_frac, double outlier_px) {
  const abspose::SceneConfig cfg = resolve_scene_config(flags);
  const std::vector<abspose::SceneSample> samples = abspose::generate_scenes(cfg);

  abspose::write_gt(abspose::make_gt_document(cfg, samples), out_path);
  if (!pred_out.empty()) {
    abspose::write_pred(abspose::make_pred_document(samples, cfg.body.skeleton.root_index,
                                                    cfg.noise,
                                                    abspose::derive_seed(cfg.seed, 0x9dULL)),
                        pred_out);
  }
  if (!fit_out.empty()) {
    abspose::write_fit(abspose::make_fit_document(samples, cfg.body.skeleton, cfg.noise,
                                                  outlier_frac, outlier_px,
                                                  abspose::derive_seed(cfg.seed, 0xf17ULL)),
                       fit_out);
  }
  std::cout << "scenes=" << cfg.scene_count << " persons=" << samples.size() << " -> "
            << out_path << "\n";
  return 0;
}

// ------------------------------------------------------------------ rootfit

int run_rootfit(const std::string& gt_path, const std::string& fit_path,
                const std::string& method, const abspose::RansacConfig& ransac_cfg,
                double a_real, const std::string& out_path) {
  const abspose::GtDocument gt = abspose::load_gt(gt_path);
  const abspose::FitDocument fit = abspose::load_fit(fit_path);

  const size_t joints = gt.skeleton.joint_names.size();
  if (fit.persons.size() != gt.persons.size()) {
    throw abspose::SchemaMismatch("rootfit: gt and pred2d person counts differ");
  }
  for (const abspose::FitPerson& p : fit.persons) {
    if (p.joints_2d.size() != joints) {
      throw abspose::SchemaMismatch("rootfit: pred2d joint count does not match the skeleton");
    }
  }

  const int root_idx = gt.skeleton.root_index;
  std::vector<abspose::Point3> estimates, gt_roots;
  double residual_sum = 0.0;
  std::int64_t residual_count = 0;
  for (size_t i = 0; i < fit.persons.size(); ++i) {
    const abspose::FitPerson& fp = fit.persons[i];
    const abspose::GtPerson& gp = gt.persons[i];
    if (fp.image_id != gp.image_id) {
      throw abspose::SchemaMismatch("rootfit: gt and pred2d persons are ordered differently");
    }
    const abspose::CameraIntrinsics& cam = gt.image_by_id(fp.image_id).intrinsics;
    abspose::Pose2D p2d;
    p2d.joints = fp.joints_2d;

    abspose::Point3 est;
    if (method == "k") {
      const abspose::RootCoord rc =
          abspose::k_localize(abspose::square_extend(fp.bbox), cam, p2d.joints[root_idx],
                              {1.0}, a_real);
      est = abspose::back_project({rc.x, rc.y}, rc.z, cam);
    } else {
      abspose::RootFitResult res;
      if (method == "lsq") {
        res = abspose::lsq_root_fit(p2d, fp.joints_rel_cam, cam,
                                    abspose::full_mask(static_cast<int>(joints)));
      } else if (method == "lsq-nolimb") {
        res = abspose::lsq_root_fit(p2d, fp.joints_rel_cam, cam,
                                    abspose::limb_exclusion_mask(gt.skeleton));
      } else {
        abspose::RansacConfig per_person = ransac_cfg;
        per_person.seed = abspose::derive_seed(ransac_cfg.seed, i);
        res = abspose::ransac_root_fit(p2d, fp.joints_rel_cam, cam, gt.skeleton, per_person);
      }
      est = res.translation;
      residual_sum += res.residual;
      ++residual_count;
    }
    estimates.push_back(est);
    gt_roots.push_back(gp.joints_cam[root_idx]);
  }

  const abspose::MrpeResult m = abspose::mrpe(estimates, gt_roots);

  json j;
  j["schema"] = abspose::kSchemaVersion;
  j["method"] = method;
  j["count"] = static_cast<std::int64_t>(estimates.size());
  j["mrpe_mm"] = m.total;
  j["mrpe_axes_mm"] = json::array({m.axes.x, m.axes.y, m.axes.z});
  j["mean_residual_px2"] =
      residual_count > 0 ? json(residual_sum / static_cast<double>(residual_count))
                         : json(nullptr);
  j["config"] = {{"a_real_mm2", a_real},
                 {"ransac_iterations", ransac_cfg.iterations},
                 {"ransac_sample_size", ransac_cfg.sample_size},
                 {"ransac_inlier_px", ransac_cfg.inlier_threshold_px},
                 {"seed", ransac_cfg.seed}};
  abspose::write_json_atomic(j, out_path);

  std::cout << "method=" << method << " persons=" << estimates.size() << " MRPE="
            << fmt(m.total) << "mm (x=" << fmt(m.axes.x) << " y=" << fmt(m.axes.y)
            << " z=" << fmt(m.axes.z) << ")\n";
  return 0;
}

// --------------------------------------------------------------------- corr

int run_corr(const SceneFlags& flags, const std::string& out_path) {
  const abspose::SceneConfig cfg = resolve_scene_config(flags);
  const abspose::CorrelationResult res = abspose::run_k_correlation(cfg);

  std::string csv = "k_mm,z_mm\n";
  for (const auto& [k, z] : res.rows) {
    csv += abspose::format_double(k) + "," + abspose::format_double(z) + "\n";
  }
  abspose::write_text_atomic(csv, out_path);
  std::cout << "samples=" << res.rows.size() << " r=" << fmt(res.r) << "\n";
  return 0;
}

// --------------------------------------------------- correction train/apply

std::vector<abspose::TrainSample> samples_from_gt(const abspose::GtDocument& gt,
                                                  double a_real) {
  std::vector<abspose::TrainSample> out;
  for (const abspose::GtPerson& p : gt.persons) {
    const abspose::GtImage& im = gt.image_by_id(p.image_id);
    abspose::Pose2D p2d;
    for (const abspose::Point3& q : p.joints_cam) {
      p2d.joints.push_back(abspose::project(q, im.intrinsics));
    }
    abspose::TrainSample s;
    s.features = abspose::featurize(p.bbox, im.intrinsics, {im.width, im.height}, &p2d, a_real);
    s.k_mm = abspose::compute_k(abspose::square_extend(p.bbox), im.intrinsics, a_real);
    s.target_z_mm = p.joints_cam[p.root_index].z;
    out.push_back(std::move(s));
  }
  return out;
}

int run_train_correction(const std::string& data_path, const std::string& out_path,
                         const abspose::TrainConfig& cfg, double a_real) {
  const abspose::GtDocument gt = abspose::load_gt(data_path);
  const auto samples = samples_from_gt(gt, a_real);
  const abspose::TrainResult result = abspose::train(samples, cfg);
  abspose::write_model(result.params, out_path);
  std::cout << "samples=" << samples.size() << " epochs=" << cfg.epochs
            << " final_loss=" << fmt(result.epoch_loss.back()) << "mm -> " << out_path << "\n";
  return 0;
}

int run_predict_correction(const std::string& model_path, const std::string& gt_path,
                           const std::string& out_path, double a_real) {
  const abspose::RegressorParams model = abspose::load_model(model_path);
  const abspose::GtDocument gt = abspose::load_gt(gt_path);

  abspose::PredDocument pred;
  for (const abspose::GtPerson& p : gt.persons) {
    const abspose::GtImage& im = gt.image_by_id(p.image_id);
    abspose::Pose2D p2d;
    for (const abspose::Point3& q : p.joints_cam) {
      p2d.joints.push_back(abspose::project(q, im.intrinsics));
    }
    const abspose::FeatureVector f =
        abspose::featurize(p.bbox, im.intrinsics, {im.width, im.height}, &p2d, a_real);
    const double k =
        abspose::compute_k(abspose::square_extend(p.bbox), im.intrinsics, a_real);
    const double gamma_prime = abspose::predict_gamma(model, f).gamma_prime;

    abspose::PredPerson pp;
    pp.image_id = p.image_id;
    pp.score = 1.0;
    const double z_root = p.joints_cam[p.root_index].z;
    for (size_t j = 0; j < p.joints_cam.size(); ++j) {
      pp.rel_pose.push_back({p2d.joints[j].u, p2d.joints[j].v, p.joints_cam[j].z - z_root});
    }
    pp.root = {p2d.joints[p.root_index].u, p2d.joints[p.root_index].v, gamma_prime * k};
    pred.persons.push_back(std::move(pp));
  }
  abspose::write_pred(pred, out_path);
  std::cout << "persons=" << pred.persons.size() << " -> " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"absolute 3D multi-person pose toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate predictions against groundtruth");
  std::string eval_gt, eval_pred, eval_out, eval_csv, eval_mode = "all";
  double eval_pck = 150.0, eval_radius = 500.0;
  eval_cmd->add_option("--gt", eval_gt, "groundtruth JSON")->required();
  eval_cmd->add_option("--pred", eval_pred, "prediction JSON")->required();
  eval_cmd->add_option("--mode", eval_mode, "summary mode: all|matched")
      ->check(CLI::IsMember({"all", "matched"}))
      ->capture_default_str();
  eval_cmd->add_option("--pck-threshold", eval_pck, "PCK threshold, mm")->capture_default_str();
  eval_cmd->add_option("--match-radius", eval_radius, "person matching radius, mm")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "report JSON path")->required();
  eval_cmd->add_option("--csv", eval_csv, "PCK curve CSV path");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic groundtruth dataset");
  SceneFlags synth_flags;
  std::string synth_out, synth_pred_out, synth_fit_out;
  double synth_outlier_frac = 0.0, synth_outlier_px = 100.0;
  add_scene_options(synth_cmd, synth_flags);
  synth_cmd->add_option("--out", synth_out, "groundtruth JSON path")->required();
  synth_cmd->add_option("--pred-out", synth_pred_out, "also write noisy predictions here");
  synth_cmd->add_option("--fit-out", synth_fit_out, "also write rootfit inputs here");
  synth_cmd->add_option("--outlier-frac", synth_outlier_frac,
                        "per-limb-joint outlier probability (fit output)")
      ->capture_default_str();
  synth_cmd->add_option("--outlier-px", synth_outlier_px, "outlier offset magnitude, px")
      ->capture_default_str();

  // rootfit
  auto* rootfit_cmd =
      app.add_subcommand("rootfit", "estimate absolute roots and report MRPE");
  std::string rf_gt, rf_fit, rf_method, rf_out;
  abspose::RansacConfig rf_ransac;
  double rf_a_real = abspose::kDefaultARealMm2;
  rootfit_cmd->add_option("--gt", rf_gt, "groundtruth JSON")->required();
  rootfit_cmd->add_option("--pred2d", rf_fit, "fit input JSON (synth --fit-out)")->required();
  rootfit_cmd->add_option("--method", rf_method, "k|lsq|lsq-nolimb|ransac")
      ->check(CLI::IsMember({"k", "lsq", "lsq-nolimb", "ransac"}))
      ->required();
  rootfit_cmd->add_option("--ransac-iters", rf_ransac.iterations)->capture_default_str();
  rootfit_cmd->add_option("--sample-size", rf_ransac.sample_size)->capture_default_str();
  rootfit_cmd->add_option("--inlier-px", rf_ransac.inlier_threshold_px)->capture_default_str();
  rootfit_cmd->add_option("--seed", rf_ransac.seed)->capture_default_str();
  rootfit_cmd->add_option("--a-real", rf_a_real, "assumed real area, mm^2")
      ->capture_default_str();
  rootfit_cmd->add_option("--out", rf_out, "report JSON path")->required();

  // corr
  auto* corr_cmd = app.add_subcommand("corr", "k vs depth correlation experiment");
  SceneFlags corr_flags;
  std::string corr_out;
  add_scene_options(corr_cmd, corr_flags);
  corr_cmd->add_option("--out", corr_out, "CSV path for (k, depth) rows")->required();

  // train-correction
  auto* train_cmd = app.add_subcommand("train-correction", "train the depth correction model");
  std::string train_data, train_out;
  abspose::TrainConfig train_cfg;
  double train_a_real = abspose::kDefaultARealMm2;
  train_cmd->add_option("--data", train_data, "groundtruth JSON")->required();
  train_cmd->add_option("--out", train_out, "model JSON path")->required();
  train_cmd->add_option("--epochs", train_cfg.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train_cfg.learning_rate)->capture_default_str();
  train_cmd->add_option("--batch", train_cfg.batch_size)->capture_default_str();
  train_cmd->add_option("--hidden", train_cfg.hidden_width)->capture_default_str();
  train_cmd->add_option("--seed", train_cfg.seed)->capture_default_str();
  train_cmd->add_option("--a-real", train_a_real)->capture_default_str();

  // predict-correction
  auto* predict_cmd =
      app.add_subcommand("predict-correction", "apply a correction model to groundtruth boxes");
  std::string pc_model, pc_gt, pc_out;
  double pc_a_real = abspose::kDefaultARealMm2;
  predict_cmd->add_option("--model", pc_model, "model JSON")->required();
  predict_cmd->add_option("--gt", pc_gt, "groundtruth JSON")->required();
  predict_cmd->add_option("--out", pc_out, "prediction JSON path")->required();
  predict_cmd->add_option("--a-real", pc_a_real)->capture_default_str();

  for (CLI::App* cmd : {eval_cmd, synth_cmd, rootfit_cmd, corr_cmd, train_cmd, predict_cmd}) {
    cmd->set_version_flag("--version", kVersion);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (*eval_cmd) {
      return run_eval(eval_gt, eval_pred, eval_mode, eval_pck, eval_radius, eval_out, eval_csv);
    }
    if (*synth_cmd) {
      return run_synth(synth_flags, synth_out, synth_pred_out, synth_fit_out,
                       synth_outlier_frac, synth_outlier_px);
    }
    if (*rootfit_cmd) {
      return run_rootfit(rf_gt, rf_fit, rf_method, rf_ransac, rf_a_real, rf_out);
    }
    if (*corr_cmd) {
      return run_corr(corr_flags, corr_out);
    }
    if (*train_cmd) {
      return run_train_correction(train_data, train_out, train_cfg, train_a_real);
    }
    if (*predict_cmd) {
      return run_predict_correction(pc_model, pc_gt, pc_out, pc_a_real);
    }
  } catch (const abspose::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const abspose::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
