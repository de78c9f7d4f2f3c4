// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#include "abspose/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "abspose/camera.hpp"
#include "abspose/errors.hpp"
#include "abspose/rng.hpp"

namespace abspose {

using nlohmann::json;

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(where + ": missing field '" + key + "'");
  }
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) {
    throw SchemaError(where + ": expected a number");
  }
  return j.get<double>();
}

double as_finite(const json& j, const std::string& where) {
  const double x = as_number(j, where);
  if (!std::isfinite(x)) {
    throw SchemaError(where + ": value must be finite");
  }
  return x;
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) {
    throw SchemaError(where + ": expected an integer");
  }
  return j.get<int>();
}

const json& as_array(const json& j, size_t len, const std::string& where) {
  if (!j.is_array() || j.size() != len) {
    throw SchemaError(where + ": expected an array of length " + std::to_string(len));
  }
  return j;
}

Point3 as_point3(const json& j, const std::string& where) {
  as_array(j, 3, where);
  return {as_finite(j[0], where), as_finite(j[1], where), as_finite(j[2], where)};
}

Point2 as_point2(const json& j, const std::string& where) {
  as_array(j, 2, where);
  return {as_finite(j[0], where), as_finite(j[1], where)};
}

BBox as_bbox(const json& j, const std::string& where) {
  as_array(j, 4, where);
  BBox b{as_finite(j[0], where), as_finite(j[1], where), as_finite(j[2], where),
         as_finite(j[3], where)};
  if (!(b.w > 0.0) || !(b.h > 0.0)) {
    throw SchemaError(where + ": bbox extent must be positive");
  }
  return b;
}

void check_schema(const json& j, const std::string& where) {
  if (require(j, "schema", where).get<std::string>() != kSchemaVersion) {
    throw SchemaError(where + ": unsupported schema version");
  }
}

json bbox_json(const BBox& b) { return json::array({b.x, b.y, b.w, b.h}); }
json point3_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

void emit(const json& j, std::string& out, int indent);

bool all_scalars(const json& arr) {
  for (const auto& v : arr) {
    if (v.is_array() || v.is_object()) return false;
  }
  return true;
}

void emit_scalar(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      out += j.dump();  // integers, strings (escaped), booleans, null
      break;
  }
}

void emit(const json& j, std::string& out, int indent) {
  const std::string pad(indent, ' ');
  const std::string pad2(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
      if (!first) out += ",\n";
      first = false;
      out += pad2 + json(it.key()).dump() + ": ";
      emit(it.value(), out, indent + 2);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (all_scalars(j)) {
      out += "[";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        emit_scalar(j[i], out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad2;
      emit(j[i], out, indent + 2);
    }
    out += "\n" + pad + "]";
  } else {
    emit_scalar(j, out);
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string dump_json(const json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

void write_text_atomic(const std::string& text, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open " + tmp.string() + " for writing");
    }
    out << text;
    if (!out) {
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot rename " + tmp.string() + " to " + path.string());
  }
}

void write_json_atomic(const json& j, const std::filesystem::path& path) {
  write_text_atomic(dump_json(j), path);
}

const GtImage& GtDocument::image_by_id(int id) const {
  for (const GtImage& im : images) {
    if (im.id == id) return im;
  }
  throw SchemaError("unknown image id " + std::to_string(id));
}

GtDocument load_gt(const std::filesystem::path& path) {
  const json j = parse_file(path);
  check_schema(j, "gt");
  GtDocument doc;

  std::set<int> ids;
  for (const json& im : require(j, "images", "gt")) {
    GtImage gi;
    gi.id = as_int(require(im, "id", "gt.images"), "gt.images.id");
    gi.width = as_int(require(im, "width", "gt.images"), "gt.images.width");
    gi.height = as_int(require(im, "height", "gt.images"), "gt.images.height");
    const json& intr = require(im, "intrinsics", "gt.images");
    gi.intrinsics.alpha_x = as_finite(require(intr, "alpha_x", "gt.images.intrinsics"),
                                      "gt.images.intrinsics.alpha_x");
    gi.intrinsics.alpha_y = as_finite(require(intr, "alpha_y", "gt.images.intrinsics"),
                                      "gt.images.intrinsics.alpha_y");
    gi.intrinsics.cx = as_finite(require(intr, "cx", "gt.images.intrinsics"),
                                 "gt.images.intrinsics.cx");
    gi.intrinsics.cy = as_finite(require(intr, "cy", "gt.images.intrinsics"),
                                 "gt.images.intrinsics.cy");
    if (!(gi.intrinsics.alpha_x > 0.0) || !(gi.intrinsics.alpha_y > 0.0)) {
      throw SchemaError("gt.images.intrinsics: focal lengths must be positive");
    }
    if (gi.width <= 0 || gi.height <= 0) {
      throw SchemaError("gt.images: image size must be positive");
    }
    if (!ids.insert(gi.id).second) {
      throw SchemaError("gt.images: duplicate image id " + std::to_string(gi.id));
    }
    doc.images.push_back(gi);
  }

  const json& sk = require(j, "skeleton", "gt");
  for (const json& name : require(sk, "joint_names", "gt.skeleton")) {
    doc.skeleton.joint_names.push_back(name.get<std::string>());
  }
  const int joints = doc.skeleton.joint_count();
  if (joints == 0) {
    throw SchemaError("gt.skeleton: joint_names is empty");
  }
  doc.skeleton.root_index = as_int(require(sk, "root_index", "gt.skeleton"),
                                   "gt.skeleton.root_index");
  if (doc.skeleton.root_index < 0 || doc.skeleton.root_index >= joints) {
    throw SchemaError("gt.skeleton: root_index out of range");
  }
  for (const json& f : require(sk, "limb_flags", "gt.skeleton")) {
    doc.skeleton.limb_flags.push_back(as_int(f, "gt.skeleton.limb_flags") ? 1 : 0);
  }
  if (doc.skeleton.limb_flags.size() != static_cast<size_t>(joints)) {
    throw SchemaError("gt.skeleton: limb_flags length must equal joint count");
  }
  for (const json& e : require(sk, "edges", "gt.skeleton")) {
    as_array(e, 2, "gt.skeleton.edges");
    const int a = as_int(e[0], "gt.skeleton.edges");
    const int b = as_int(e[1], "gt.skeleton.edges");
    if (a < 0 || a >= joints || b < 0 || b >= joints) {
      throw SchemaError("gt.skeleton: edge index out of range");
    }
    doc.skeleton.edges.push_back({a, b});
  }

  for (const json& p : require(j, "persons", "gt")) {
    GtPerson gp;
    gp.image_id = as_int(require(p, "image_id", "gt.persons"), "gt.persons.image_id");
    if (!ids.count(gp.image_id)) {
      throw SchemaError("gt.persons: image_id references a missing image");
    }
    gp.bbox = as_bbox(require(p, "bbox", "gt.persons"), "gt.persons.bbox");
    const json& jc = require(p, "joints_cam", "gt.persons");
    if (!jc.is_array() || jc.size() != static_cast<size_t>(joints)) {
      throw SchemaError("gt.persons: joints_cam length must equal joint count");
    }
    for (const json& pt : jc) gp.joints_cam.push_back(as_point3(pt, "gt.persons.joints_cam"));
    gp.root_index = as_int(require(p, "root_index", "gt.persons"), "gt.persons.root_index");
    if (gp.root_index < 0 || gp.root_index >= joints) {
      throw SchemaError("gt.persons: root_index out of range");
    }
    doc.persons.push_back(std::move(gp));
  }
  return doc;
}

PredDocument load_pred(const std::filesystem::path& path) {
  const json j = parse_file(path);
  check_schema(j, "pred");
  PredDocument doc;
  size_t joints = 0;
  for (const json& p : require(j, "persons", "pred")) {
    PredPerson pp;
    pp.image_id = as_int(require(p, "image_id", "pred.persons"), "pred.persons.image_id");
    pp.score = as_finite(require(p, "score", "pred.persons"), "pred.persons.score");
    if (pp.score < 0.0 || pp.score > 1.0) {
      throw SchemaError("pred.persons: score must be in [0, 1]");
    }
    const Point3 root = as_point3(require(p, "root", "pred.persons"), "pred.persons.root");
    if (!(root.z > 0.0)) {
      throw SchemaError("pred.persons: root depth must be positive");
    }
    pp.root = {root.x, root.y, root.z};
    for (const json& pt : require(p, "rel_pose", "pred.persons")) {
      pp.rel_pose.push_back(as_point3(pt, "pred.persons.rel_pose"));
    }
    if (joints == 0) joints = pp.rel_pose.size();
    if (pp.rel_pose.empty() || pp.rel_pose.size() != joints) {
      throw SchemaError("pred.persons: rel_pose lengths are inconsistent");
    }
    doc.persons.push_back(std::move(pp));
  }
  return doc;
}

FitDocument load_fit(const std::filesystem::path& path) {
  const json j = parse_file(path);
  check_schema(j, "fit");
  FitDocument doc;
  size_t joints = 0;
  for (const json& p : require(j, "persons", "fit")) {
    FitPerson fp;
    fp.image_id = as_int(require(p, "image_id", "fit.persons"), "fit.persons.image_id");
    fp.bbox = as_bbox(require(p, "bbox", "fit.persons"), "fit.persons.bbox");
    for (const json& pt : require(p, "joints_2d", "fit.persons")) {
      fp.joints_2d.push_back(as_point2(pt, "fit.persons.joints_2d"));
    }
    for (const json& pt : require(p, "joints_rel_cam", "fit.persons")) {
      fp.joints_rel_cam.push_back(as_point3(pt, "fit.persons.joints_rel_cam"));
    }
    if (fp.joints_2d.size() != fp.joints_rel_cam.size() || fp.joints_2d.empty()) {
      throw SchemaError("fit.persons: joints_2d and joints_rel_cam lengths must match");
    }
    if (joints == 0) joints = fp.joints_2d.size();
    if (fp.joints_2d.size() != joints) {
      throw SchemaError("fit.persons: joint counts are inconsistent");
    }
    doc.persons.push_back(std::move(fp));
  }
  return doc;
}

RegressorParams load_model(const std::filesystem::path& path) {
  const json j = parse_file(path);
  check_schema(j, "model");
  const json& m = require(j, "model", "model");
  RegressorParams p;
  p.feature_dim = as_int(require(m, "feature_dim", "model"), "model.feature_dim");
  p.hidden_width = as_int(require(m, "hidden_width", "model"), "model.hidden_width");
  if (p.feature_dim <= 0 || p.hidden_width < 0) {
    throw SchemaError("model: invalid dimensions");
  }
  auto load_vec = [&](const char* key, size_t expect) {
    std::vector<double> v;
    for (const json& x : require(m, key, "model")) {
      v.push_back(as_finite(x, std::string("model.") + key));
    }
    if (v.size() != expect) {
      throw SchemaError(std::string("model.") + key + ": wrong length");
    }
    return v;
  };
  p.skip = load_vec("skip", p.feature_dim);
  p.w1 = load_vec("w1", static_cast<size_t>(p.hidden_width) * p.feature_dim);
  p.b1 = load_vec("b1", p.hidden_width);
  p.w2 = load_vec("w2", p.hidden_width);
  return p;
}

void write_gt(const GtDocument& doc, const std::filesystem::path& path) {
  json j;
  j["schema"] = kSchemaVersion;
  json images = json::array();
  for (const GtImage& im : doc.images) {
    images.push_back({{"id", im.id},
                      {"width", im.width},
                      {"height", im.height},
                      {"intrinsics",
                       {{"alpha_x", im.intrinsics.alpha_x},
                        {"alpha_y", im.intrinsics.alpha_y},
                        {"cx", im.intrinsics.cx},
                        {"cy", im.intrinsics.cy}}}});
  }
  j["images"] = images;
  json limb = json::array();
  for (const auto f : doc.skeleton.limb_flags) limb.push_back(static_cast<int>(f));
  json edges = json::array();
  for (const auto& e : doc.skeleton.edges) edges.push_back(json::array({e[0], e[1]}));
  j["skeleton"] = {{"joint_names", doc.skeleton.joint_names},
                   {"root_index", doc.skeleton.root_index},
                   {"limb_flags", limb},
                   {"edges", edges}};
  json persons = json::array();
  for (const GtPerson& p : doc.persons) {
    json joints = json::array();
    for (const Point3& q : p.joints_cam) joints.push_back(point3_json(q));
    persons.push_back({{"image_id", p.image_id},
                       {"bbox", bbox_json(p.bbox)},
                       {"joints_cam", joints},
                       {"root_index", p.root_index}});
  }
  j["persons"] = persons;
  write_json_atomic(j, path);
}

void write_pred(const PredDocument& doc, const std::filesystem::path& path) {
  json j;
  j["schema"] = kSchemaVersion;
  json persons = json::array();
  for (const PredPerson& p : doc.persons) {
    json rel = json::array();
    for (const Point3& q : p.rel_pose) rel.push_back(point3_json(q));
    persons.push_back({{"image_id", p.image_id},
                       {"score", p.score},
                       {"root", json::array({p.root.x, p.root.y, p.root.z})},
                       {"rel_pose", rel}});
  }
  j["persons"] = persons;
  write_json_atomic(j, path);
}

void write_fit(const FitDocument& doc, const std::filesystem::path& path) {
  json j;
  j["schema"] = kSchemaVersion;
  json persons = json::array();
  for (const FitPerson& p : doc.persons) {
    json j2d = json::array();
    for (const Point2& q : p.joints_2d) j2d.push_back(json::array({q.u, q.v}));
    json jrel = json::array();
    for (const Point3& q : p.joints_rel_cam) jrel.push_back(point3_json(q));
    persons.push_back({{"image_id", p.image_id},
                       {"bbox", bbox_json(p.bbox)},
                       {"joints_2d", j2d},
                       {"joints_rel_cam", jrel}});
  }
  j["persons"] = persons;
  write_json_atomic(j, path);
}

void write_model(const RegressorParams& params, const std::filesystem::path& path) {
  json j;
  j["schema"] = kSchemaVersion;
  j["model"] = {{"feature_dim", params.feature_dim},
                {"hidden_width", params.hidden_width},
                {"skip", params.skip},
                {"w1", params.w1},
                {"b1", params.b1},
                {"w2", params.w2}};
  write_json_atomic(j, path);
}

namespace {

json curve_json(const PckCurve& curve) {
  json rows = json::array();
  for (const auto& [t, frac] : curve.points) rows.push_back(json::array({t, frac}));
  return rows;
}

json optional_json(const std::optional<double>& v) {
  return v.has_value() ? json(*v) : json(nullptr);
}

}  // namespace

void write_report(const EvalReport& report, const EvalConfig& cfg, const std::string& mode,
                  const std::filesystem::path& path) {
  json j;
  j["schema"] = kSchemaVersion;
  j["config"] = {{"match_radius_mm", cfg.match_radius_mm},
                 {"pck_threshold_mm", cfg.pck_threshold_mm},
                 {"ap_threshold_mm", cfg.ap_threshold_mm},
                 {"auc_min_mm", cfg.auc_min_mm},
                 {"auc_max_mm", cfg.auc_max_mm},
                 {"auc_step_mm", cfg.auc_step_mm},
                 {"root_index", cfg.root_index},
                 {"mode", mode}};
  j["counts"] = {{"images", report.images},
                 {"predictions", report.predictions},
                 {"groundtruths", report.groundtruths},
                 {"matched", report.matched}};
  json axes = json(nullptr);
  if (report.mrpe_axes_mm.has_value()) {
    axes = json::array({report.mrpe_axes_mm->x, report.mrpe_axes_mm->y, report.mrpe_axes_mm->z});
  }
  j["matched"] = {{"mpjpe_mm", optional_json(report.mpjpe_mm)},
                  {"pa_mpjpe_mm", optional_json(report.pa_mpjpe_mm)},
                  {"mrpe_mm", optional_json(report.mrpe_mm)},
                  {"mrpe_axes_mm", axes},
                  {"pck_rel", optional_json(report.pck_rel_matched)},
                  {"pck_abs", optional_json(report.pck_abs_matched)},
                  {"auc_rel", optional_json(report.auc_rel_matched)}};
  j["all"] = {{"pck_rel", report.pck_rel_all},
              {"pck_abs", report.pck_abs_all},
              {"auc_rel", report.auc_rel_all}};
  j["ap_root"] = report.ap_root;
  j["pck_curves"] = {{"rel_matched", curve_json(report.curve_rel_matched)},
                     {"abs_matched", curve_json(report.curve_abs_matched)},
                     {"rel_all", curve_json(report.curve_rel_all)},
                     {"abs_all", curve_json(report.curve_abs_all)}};
  write_json_atomic(j, path);
}

void write_pck_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::string out = "threshold_mm,pck_rel_matched,pck_abs_matched,pck_rel_all,pck_abs_all\n";
  const size_t n = report.curve_rel_all.points.size();
  const bool have_matched = !report.curve_rel_matched.points.empty();
  for (size_t i = 0; i < n; ++i) {
    out += format_double(report.curve_rel_all.points[i].first);
    out += ",";
    out += have_matched ? format_double(report.curve_rel_matched.points[i].second) : "";
    out += ",";
    out += have_matched ? format_double(report.curve_abs_matched.points[i].second) : "";
    out += ",";
    out += format_double(report.curve_rel_all.points[i].second);
    out += ",";
    out += format_double(report.curve_abs_all.points[i].second);
    out += "\n";
  }
  write_text_atomic(out, path);
}

GtDocument make_gt_document(const SceneConfig& cfg, std::span<const SceneSample> samples) {
  GtDocument doc;
  doc.skeleton = cfg.body.skeleton;
  std::set<int> ids;
  for (const SceneSample& s : samples) ids.insert(s.image_id);
  for (int id : ids) {
    doc.images.push_back({id, cfg.image.width, cfg.image.height, cfg.cam});
  }
  for (const SceneSample& s : samples) {
    GtPerson p;
    p.image_id = s.image_id;
    p.bbox = s.tight_box;
    p.joints_cam = s.gt_pose.joints;
    p.root_index = cfg.body.skeleton.root_index;
    doc.persons.push_back(std::move(p));
  }
  return doc;
}

PredDocument make_pred_document(std::span<const SceneSample> samples, int root_index,
                                const NoiseConfig& noise, std::uint64_t seed) {
  PredDocument doc;
  for (size_t i = 0; i < samples.size(); ++i) {
    const SceneSample obs = perturb(samples[i], noise, derive_seed(seed, 2 * i));
    Rng rng(derive_seed(seed, 2 * i + 1));
    PredPerson p;
    p.image_id = samples[i].image_id;
    p.score = 1.0;
    p.rel_pose = obs.rel_pose.joints;
    p.root = {obs.rel_pose.joints[root_index].x, obs.rel_pose.joints[root_index].y,
              samples[i].true_root.z + noise.sigma_depth_mm * rng.normal()};
    doc.persons.push_back(std::move(p));
  }
  return doc;
}

FitDocument make_fit_document(std::span<const SceneSample> samples, const SkeletonDef& skeleton,
                              const NoiseConfig& noise, double outlier_fraction,
                              double outlier_px, std::uint64_t seed) {
  FitDocument doc;
  const int root = skeleton.root_index;
  for (size_t i = 0; i < samples.size(); ++i) {
    const SceneSample obs = perturb(samples[i], noise, derive_seed(seed, 2 * i));
    FitPerson p;
    p.image_id = samples[i].image_id;
    p.bbox = obs.tight_box;
    Pose2D p2d = obs.pose2d;
    if (outlier_fraction > 0.0) {
      p2d = with_limb_outliers(p2d, skeleton, outlier_fraction, outlier_px,
                               derive_seed(seed, 2 * i + 1));
    }
    p.joints_2d.reserve(p2d.joints.size());
    for (const Point2& q : p2d.joints) p.joints_2d.push_back(q);
    const Point3& r = samples[i].gt_pose.joints[root];
    for (const Point3& q : samples[i].gt_pose.joints) {
      p.joints_rel_cam.push_back({q.x - r.x, q.y - r.y, q.z - r.z});
    }
    doc.persons.push_back(std::move(p));
  }
  return doc;
}

std::vector<PersonGroundTruth> gt_persons(const GtDocument& doc) {
  std::vector<PersonGroundTruth> out;
  out.reserve(doc.persons.size());
  for (const GtPerson& p : doc.persons) {
    out.push_back({AbsPose3D{p.joints_cam}, p.image_id});
  }
  return out;
}

std::vector<PersonPrediction> pred_persons(const PredDocument& pred, const GtDocument& gt) {
  std::vector<PersonPrediction> out;
  out.reserve(pred.persons.size());
  for (const PredPerson& p : pred.persons) {
    if (p.rel_pose.size() != gt.skeleton.joint_names.size()) {
      throw SchemaMismatch("prediction joint count does not match the groundtruth skeleton");
    }
    const GtImage& im = gt.image_by_id(p.image_id);
    RelPose3D rel{p.rel_pose};
    out.push_back({compose_absolute_pose(rel, p.root, im.intrinsics), p.score, p.image_id});
  }
  return out;
}

}  // namespace abspose
