#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "pob/errors.hpp"
#include "pob/schema.hpp"

namespace pob {

using json = nlohmann::json;

// Annotation visibility flag: 0 = unlabeled (x,y meaningless),
// 1 = labeled but not visible, 2 = labeled and visible.
struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  int v = 0;

  bool labeled() const { return v > 0; }
  bool operator==(const Keypoint&) const = default;
};

struct ImageRecord {
  std::int64_t id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;

  bool operator==(const ImageRecord&) const = default;
};

struct PersonInstance {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::vector<Keypoint> keypoints;
  std::array<double, 4> bbox{};  // x, y, w, h
  double area = 0.0;
  std::optional<std::array<double, 4>> head_box;  // x0, y0, x1, y1 (mpii)
  int iscrowd = 0;

  int labeled_count() const {
    int n = 0;
    for (const auto& k : keypoints) n += k.labeled() ? 1 : 0;
    return n;
  }
  bool operator==(const PersonInstance&) const = default;
};

struct PoseDataset {
  SkeletonSchema schema;
  std::vector<ImageRecord> images;
  std::vector<PersonInstance> instances;

  const ImageRecord& image_for(std::int64_t image_id) const {
    for (const auto& im : images)
      if (im.id == image_id) return im;
    throw lookup_error("no image record with id " + std::to_string(image_id));
  }

  void validate() const;

  bool operator==(const PoseDataset& o) const {
    return schema.name == o.schema.name && images == o.images && instances == o.instances;
  }
};

// One externally produced pose prediction: per-joint (x, y, confidence)
// plus an overall instance score.
struct PredictionRecord {
  std::int64_t image_id = 0;
  std::vector<double> keypoints;  // 3 * num_joints: x, y, confidence
  double score = 0.0;

  double x(int j) const { return keypoints[3 * j]; }
  double y(int j) const { return keypoints[3 * j + 1]; }
  double confidence(int j) const { return keypoints[3 * j + 2]; }
  bool operator==(const PredictionRecord&) const = default;
};

struct PredictionSet {
  int num_joints = 0;
  std::vector<PredictionRecord> records;  // stably sorted by image_id

  bool operator==(const PredictionSet&) const = default;
};

namespace detail {

inline const json& require_field(const json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw validation_error(ctx + ": missing field '" + key + "'");
  return *it;
}

inline double require_number(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require_field(obj, key, ctx);
  if (!v.is_number())
    throw validation_error(ctx + ": field '" + key + "' is not a number");
  return v.get<double>();
}

inline std::int64_t require_int(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require_field(obj, key, ctx);
  if (!v.is_number_integer())
    throw validation_error(ctx + ": field '" + key + "' is not an integer");
  return v.get<std::int64_t>();
}

inline std::array<double, 4> require_box(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require_field(obj, key, ctx);
  if (!v.is_array() || v.size() != 4)
    throw validation_error(ctx + ": field '" + key + "' must be an array of 4 numbers");
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    if (!v[i].is_number())
      throw validation_error(ctx + ": field '" + key + "' must contain numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

inline json parse_json_bytes(const std::string& bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw parse_error("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline std::vector<ImageRecord> parse_images(const json& doc) {
  const json& arr = require_field(doc, "images", "document");
  if (!arr.is_array()) throw validation_error("'images' must be an array");
  std::vector<ImageRecord> out;
  out.reserve(arr.size());
  for (const auto& im : arr) {
    ImageRecord rec;
    rec.id = require_int(im, "id", "image");
    const std::string ctx = "image " + std::to_string(rec.id);
    const json& fn = require_field(im, "file_name", ctx);
    if (!fn.is_string()) throw validation_error(ctx + ": 'file_name' is not a string");
    rec.file_name = fn.get<std::string>();
    rec.width = static_cast<int>(require_int(im, "width", ctx));
    rec.height = static_cast<int>(require_int(im, "height", ctx));
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::vector<Keypoint> parse_keypoint_triples(const json& arr, int num_joints, const std::string& ctx) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != 3 * num_joints)
    throw validation_error(ctx + ": keypoints array must have " + std::to_string(3 * num_joints) +
                           " values, got " + std::to_string(arr.size()));
  std::vector<Keypoint> kps(num_joints);
  for (int j = 0; j < num_joints; ++j) {
    for (int c = 0; c < 3; ++c)
      if (!arr[3 * j + c].is_number())
        throw validation_error(ctx + ": keypoints array must contain numbers");
    kps[j].x = arr[3 * j].get<double>();
    kps[j].y = arr[3 * j + 1].get<double>();
    kps[j].v = arr[3 * j + 2].get<int>();
    if (kps[j].v < 0 || kps[j].v > 2)
      throw validation_error(ctx + ": visibility flag must be 0, 1 or 2");
  }
  return kps;
}

}  // namespace detail

inline void PoseDataset::validate() const {
  schema.validate();

  std::unordered_map<std::int64_t, const ImageRecord*> by_id;
  for (const auto& im : images) {
    if (im.width < 1 || im.height < 1)
      throw validation_error("image " + std::to_string(im.id) + ": non-positive dimensions");
    if (!by_id.emplace(im.id, &im).second)
      throw validation_error("duplicate image id " + std::to_string(im.id));
  }

  std::unordered_map<std::int64_t, int> inst_ids;
  for (const auto& inst : instances) {
    const std::string ctx = "annotation " + std::to_string(inst.id);
    if (++inst_ids[inst.id] > 1) throw validation_error("duplicate " + ctx);
    auto it = by_id.find(inst.image_id);
    if (it == by_id.end())
      throw validation_error(ctx + " references missing image " + std::to_string(inst.image_id));
    if (static_cast<int>(inst.keypoints.size()) != schema.num_joints())
      throw validation_error(ctx + ": expected " + std::to_string(schema.num_joints()) + " keypoints, got " +
                             std::to_string(inst.keypoints.size()));
    if (!(inst.bbox[2] > 0.0) || !(inst.bbox[3] > 0.0))
      throw validation_error(ctx + ": bbox width and height must be positive");
    if (!(inst.area > 0.0)) throw validation_error(ctx + ": area must be positive");
    if (schema.name == "mpii" && !inst.head_box)
      throw validation_error(ctx + ": missing head_box (required for mpii)");

    // Annotations may overflow the image slightly; bound the overflow at 10%.
    const ImageRecord& im = *it->second;
    const double mx = 0.1 * im.width, my = 0.1 * im.height;
    for (int j = 0; j < schema.num_joints(); ++j) {
      const Keypoint& k = inst.keypoints[j];
      if (!k.labeled()) continue;
      if (k.x < -mx || k.x > im.width + mx || k.y < -my || k.y > im.height + my)
        throw validation_error(ctx + ": keypoint " + schema.joint_names[j] + " at (" + std::to_string(k.x) +
                               "," + std::to_string(k.y) + ") too far outside image " +
                               std::to_string(im.id));
    }
  }
}

inline PoseDataset parse_coco(const std::string& bytes) {
  const json doc = detail::parse_json_bytes(bytes);
  PoseDataset ds;
  ds.schema = coco_schema();
  ds.images = detail::parse_images(doc);

  const json& anns = detail::require_field(doc, "annotations", "document");
  if (!anns.is_array()) throw validation_error("'annotations' must be an array");
  for (const auto& a : anns) {
    PersonInstance inst;
    inst.id = detail::require_int(a, "id", "annotation");
    const std::string ctx = "annotation " + std::to_string(inst.id);
    inst.image_id = detail::require_int(a, "image_id", ctx);
    inst.keypoints = detail::parse_keypoint_triples(detail::require_field(a, "keypoints", ctx), 17, ctx);
    inst.bbox = detail::require_box(a, "bbox", ctx);
    inst.area = detail::require_number(a, "area", ctx);
    inst.iscrowd = a.contains("iscrowd") ? static_cast<int>(detail::require_int(a, "iscrowd", ctx)) : 0;
    ds.instances.push_back(std::move(inst));
  }

  ds.validate();
  return ds;
}

inline PoseDataset parse_mpii(const std::string& bytes) {
  const json doc = detail::parse_json_bytes(bytes);
  PoseDataset ds;
  ds.schema = mpii_schema();
  ds.images = detail::parse_images(doc);

  const json& anns = detail::require_field(doc, "annotations", "document");
  if (!anns.is_array()) throw validation_error("'annotations' must be an array");
  for (const auto& a : anns) {
    PersonInstance inst;
    inst.id = detail::require_int(a, "id", "annotation");
    const std::string ctx = "annotation " + std::to_string(inst.id);
    inst.image_id = detail::require_int(a, "image_id", ctx);
    inst.keypoints = detail::parse_keypoint_triples(detail::require_field(a, "keypoints", ctx), 16, ctx);
    inst.bbox = detail::require_box(a, "bbox", ctx);
    inst.head_box = detail::require_box(a, "head_box", ctx);
    inst.area = a.contains("area") ? detail::require_number(a, "area", ctx)
                                   : inst.bbox[2] * inst.bbox[3];
    ds.instances.push_back(std::move(inst));
  }

  ds.validate();
  return ds;
}

inline PredictionSet parse_predictions(const std::string& bytes, const SkeletonSchema& schema) {
  const json doc = detail::parse_json_bytes(bytes);
  if (!doc.is_array()) throw validation_error("predictions document must be a JSON array");

  PredictionSet out;
  out.num_joints = schema.num_joints();
  out.records.reserve(doc.size());
  for (size_t i = 0; i < doc.size(); ++i) {
    const json& r = doc[i];
    const std::string ctx = "prediction " + std::to_string(i);
    PredictionRecord rec;
    rec.image_id = detail::require_int(r, "image_id", ctx);
    const json& kps = detail::require_field(r, "keypoints", ctx);
    if (!kps.is_array() || static_cast<int>(kps.size()) != 3 * out.num_joints)
      throw validation_error(ctx + ": keypoints array must have " + std::to_string(3 * out.num_joints) +
                             " values, got " + std::to_string(kps.size()));
    rec.keypoints.resize(kps.size());
    for (size_t k = 0; k < kps.size(); ++k) {
      if (!kps[k].is_number()) throw validation_error(ctx + ": keypoints array must contain numbers");
      rec.keypoints[k] = kps[k].get<double>();
      if (!std::isfinite(rec.keypoints[k]))
        throw validation_error(ctx + ": non-finite keypoint value");
    }
    rec.score = detail::require_number(r, "score", ctx);
    if (!std::isfinite(rec.score)) throw validation_error(ctx + ": non-finite score");
    out.records.push_back(std::move(rec));
  }

  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const PredictionRecord& a, const PredictionRecord& b) { return a.image_id < b.image_id; });
  return out;
}

namespace detail {

inline json images_to_json(const std::vector<ImageRecord>& images) {
  json arr = json::array();
  for (const auto& im : images)
    arr.push_back({{"id", im.id}, {"file_name", im.file_name}, {"width", im.width}, {"height", im.height}});
  return arr;
}

inline json keypoints_to_json(const std::vector<Keypoint>& kps) {
  json arr = json::array();
  for (const auto& k : kps) {
    arr.push_back(k.x);
    arr.push_back(k.y);
    arr.push_back(k.v);
  }
  return arr;
}

}  // namespace detail

// Serialization is canonical: keys sorted, floats printed as the shortest
// decimal that round-trips, two-space indent and a trailing newline. Writing
// the same value twice yields identical bytes.
inline std::string dump_canonical(const json& doc) { return doc.dump(2) + "\n"; }

inline std::string write_dataset(const PoseDataset& ds) {
  json anns = json::array();
  for (const auto& inst : ds.instances) {
    json a = {{"id", inst.id},
              {"image_id", inst.image_id},
              {"keypoints", detail::keypoints_to_json(inst.keypoints)},
              {"bbox", {inst.bbox[0], inst.bbox[1], inst.bbox[2], inst.bbox[3]}},
              {"area", inst.area}};
    if (ds.schema.name == "mpii") {
      const auto& hb = *inst.head_box;
      a["head_box"] = {hb[0], hb[1], hb[2], hb[3]};
    } else {
      a["iscrowd"] = inst.iscrowd;
    }
    anns.push_back(std::move(a));
  }
  return dump_canonical(json{{"images", detail::images_to_json(ds.images)}, {"annotations", anns}});
}

inline std::string write_coco(const PoseDataset& ds) { return write_dataset(ds); }
inline std::string write_mpii(const PoseDataset& ds) { return write_dataset(ds); }

inline std::string write_predictions(const PredictionSet& preds) {
  json arr = json::array();
  for (const auto& r : preds.records)
    arr.push_back({{"image_id", r.image_id}, {"keypoints", r.keypoints}, {"score", r.score}});
  return dump_canonical(arr);
}

// Content identity of a dataset: FNV-1a 64 over the canonical serialization.
// Evaluation results carry it so reports can refuse to mix ground truths.
inline std::string dataset_id(const PoseDataset& ds) {
  const std::string bytes = write_dataset(ds);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace pob
