#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pob/errors.hpp"

namespace pob {

// One named body part: an ordered set of joint indices.
struct Part {
  std::string name;
  std::vector<int> joints;
};

// Small parts (head, arms, legs, corpus) and large parts (upper/lower body,
// left/right side). Order is fixed and meaningful: uniform part sampling in
// the augmentation engine draws by index.
struct PartMap {
  std::vector<Part> small_parts;
  std::vector<Part> large_parts;

  const Part* find(const std::string& name) const {
    for (const auto& p : small_parts)
      if (p.name == name) return &p;
    for (const auto& p : large_parts)
      if (p.name == name) return &p;
    return nullptr;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& p : small_parts) out.push_back(p.name);
    for (const auto& p : large_parts) out.push_back(p.name);
    return out;
  }
};

struct SkeletonSchema {
  std::string name;  // "coco" or "mpii"
  std::vector<std::string> joint_names;
  std::vector<std::pair<int, int>> flip_pairs;  // (left index, right index)
  PartMap part_map;
  // Joints allowed to sit on the body mid-line (may appear in neither or both
  // of left_side/right_side).
  std::vector<int> center_joints;

  int num_joints() const { return static_cast<int>(joint_names.size()); }

  int joint_index(const std::string& joint_name) const {
    for (int i = 0; i < num_joints(); ++i)
      if (joint_names[i] == joint_name) return i;
    throw lookup_error("unknown joint name: " + joint_name);
  }

  void validate() const;
};

namespace detail {

inline std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

}  // namespace detail

inline void SkeletonSchema::validate() const {
  const int n = num_joints();
  if (name == "coco" && n != 17)
    throw validation_error("coco schema must have 17 joints, got " + std::to_string(n));
  if (name == "mpii" && n != 16)
    throw validation_error("mpii schema must have 16 joints, got " + std::to_string(n));

  {
    std::set<std::string> seen;
    for (const auto& jn : joint_names)
      if (!seen.insert(jn).second)
        throw validation_error("duplicate joint name: " + jn);
  }

  std::vector<int> pair_uses(n, 0);
  for (auto [l, r] : flip_pairs) {
    if (l < 0 || l >= n || r < 0 || r >= n || l == r)
      throw validation_error("flip pair (" + std::to_string(l) + "," + std::to_string(r) + ") out of range");
    if (++pair_uses[l] > 1 || ++pair_uses[r] > 1)
      throw validation_error("joint appears in more than one flip pair");
  }

  auto check_part = [n](const Part& p) {
    for (int j : p.joints)
      if (j < 0 || j >= n)
        throw validation_error("part '" + p.name + "' references joint " + std::to_string(j) + " out of range");
  };
  for (const auto& p : part_map.small_parts) check_part(p);
  for (const auto& p : part_map.large_parts) check_part(p);

  // upper body and lower body must cover every joint.
  const Part* upper = part_map.find("upper_body");
  const Part* lower = part_map.find("lower_body");
  if (upper && lower) {
    std::set<int> covered(upper->joints.begin(), upper->joints.end());
    covered.insert(lower->joints.begin(), lower->joints.end());
    if (static_cast<int>(covered.size()) != n)
      throw validation_error("upper_body and lower_body do not cover all joints");
  }

  // left side and right side may only share mid-line joints.
  const Part* left = part_map.find("left_side");
  const Part* right = part_map.find("right_side");
  if (left && right) {
    std::set<int> ls(left->joints.begin(), left->joints.end());
    std::set<int> cs(center_joints.begin(), center_joints.end());
    for (int j : right->joints)
      if (ls.count(j) && !cs.count(j))
        throw validation_error("joint " + std::to_string(j) + " is in both left_side and right_side");
  }
}

// Canonical joint set of one part, by name. Spaces in the name are accepted
// as aliases for underscores ("left arm" == "left_arm").
inline const std::vector<int>& part_joints(const std::string& part_name, const SkeletonSchema& schema) {
  std::string key = part_name;
  std::replace(key.begin(), key.end(), ' ', '_');
  if (const Part* p = schema.part_map.find(key)) return p->joints;
  throw lookup_error("unknown part '" + part_name + "'; valid parts: " +
                     detail::join_names(schema.part_map.names()));
}

// COCO skeleton: 17 keypoints in the standard annotation order.
inline SkeletonSchema coco_schema() {
  SkeletonSchema s;
  s.name = "coco";
  s.joint_names = {
      "nose",       "left_eye",      "right_eye",      "left_ear",    "right_ear",
      "left_shoulder", "right_shoulder", "left_elbow",  "right_elbow",
      "left_wrist", "right_wrist",   "left_hip",       "right_hip",
      "left_knee",  "right_knee",    "left_ankle",     "right_ankle"};
  s.flip_pairs = {{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}, {11, 12}, {13, 14}, {15, 16}};
  s.part_map.small_parts = {
      {"head", {0, 1, 2, 3, 4}},
      {"left_arm", {5, 7, 9}},
      {"right_arm", {6, 8, 10}},
      {"left_leg", {11, 13, 15}},
      {"right_leg", {12, 14, 16}},
      {"corpus", {5, 6, 11, 12}},
  };
  s.part_map.large_parts = {
      {"upper_body", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
      {"lower_body", {11, 12, 13, 14, 15, 16}},
      {"left_side", {1, 3, 5, 7, 9, 11, 13, 15}},
      {"right_side", {2, 4, 6, 8, 10, 12, 14, 16}},
  };
  s.center_joints = {0};
  s.validate();
  return s;
}

// MPII skeleton: 16 joints in the standard annotation order.
inline SkeletonSchema mpii_schema() {
  SkeletonSchema s;
  s.name = "mpii";
  s.joint_names = {
      "right_ankle", "right_knee",  "right_hip",      "left_hip",
      "left_knee",   "left_ankle",  "pelvis",         "thorax",
      "upper_neck",  "head_top",    "right_wrist",    "right_elbow",
      "right_shoulder", "left_shoulder", "left_elbow", "left_wrist"};
  s.flip_pairs = {{5, 0}, {4, 1}, {3, 2}, {15, 10}, {14, 11}, {13, 12}};
  s.part_map.small_parts = {
      {"head", {8, 9}},
      {"left_arm", {13, 14, 15}},
      {"right_arm", {10, 11, 12}},
      {"left_leg", {3, 4, 5}},
      {"right_leg", {0, 1, 2}},
      {"corpus", {2, 3, 6, 7, 12, 13}},
  };
  s.part_map.large_parts = {
      {"upper_body", {7, 8, 9, 10, 11, 12, 13, 14, 15}},
      {"lower_body", {0, 1, 2, 3, 4, 5, 6}},
      {"left_side", {3, 4, 5, 13, 14, 15}},
      {"right_side", {0, 1, 2, 10, 11, 12}},
  };
  s.center_joints = {6, 7, 8, 9};
  s.validate();
  return s;
}

}  // namespace pob
