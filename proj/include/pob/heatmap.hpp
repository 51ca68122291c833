#pragma once

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "pob/dataset.hpp"
#include "pob/errors.hpp"

namespace pob {

struct HeatmapParams {
  int stride = 4;     // input-to-heatmap downscale (256x192 -> 64x48)
  int window = 13;    // Gaussian stamp size, odd
  double sigma = 2.0;
};

// Per-joint training targets: one H x W map per joint plus a {0,1} weight.
// Weight-0 joints have all-zero maps.
struct HeatmapStack {
  int num_joints = 0;
  int width = 0;
  int height = 0;
  int stride = 4;
  std::vector<float> data;     // num_joints * height * width, row-major
  std::vector<float> weights;  // per joint, 0 or 1

  float at(int j, int x, int y) const {
    return data[(static_cast<size_t>(j) * height + y) * width + x];
  }
  float& at(int j, int x, int y) {
    return data[(static_cast<size_t>(j) * height + y) * width + x];
  }
};

// Stamp a truncated Gaussian (peak exactly 1.0) at each labeled joint's
// stride-scaled cell. Joints with v=0 or an explicit weight of 0 (removed by
// an augmentation) produce a zero map and weight 0, as does a stamp window
// that falls entirely off the map.
inline HeatmapStack encode_heatmaps(const std::vector<Keypoint>& keypoints, int input_w, int input_h,
                                    const HeatmapParams& p = {},
                                    const std::vector<double>* target_weights = nullptr) {
  if (p.stride < 1 || p.window < 1 || p.window % 2 == 0 || !(p.sigma > 0.0))
    throw parameter_error("invalid heatmap params");
  if (target_weights && target_weights->size() != keypoints.size())
    throw parameter_error("target weight count does not match joint count");

  HeatmapStack hm;
  hm.num_joints = static_cast<int>(keypoints.size());
  hm.width = input_w / p.stride;
  hm.height = input_h / p.stride;
  hm.stride = p.stride;
  hm.data.assign(static_cast<size_t>(hm.num_joints) * hm.width * hm.height, 0.0f);
  hm.weights.assign(hm.num_joints, 0.0f);

  const int r = p.window / 2;
  for (int j = 0; j < hm.num_joints; ++j) {
    const Keypoint& k = keypoints[j];
    if (!k.labeled()) continue;
    if (target_weights && (*target_weights)[j] <= 0.0) continue;

    const int mx = static_cast<int>(std::floor(k.x / p.stride + 0.5));
    const int my = static_cast<int>(std::floor(k.y / p.stride + 0.5));
    if (mx - r >= hm.width || my - r >= hm.height || mx + r < 0 || my + r < 0) continue;

    hm.weights[j] = 1.0f;
    for (int dy = -r; dy <= r; ++dy) {
      const int y = my + dy;
      if (y < 0 || y >= hm.height) continue;
      for (int dx = -r; dx <= r; ++dx) {
        const int x = mx + dx;
        if (x < 0 || x >= hm.width) continue;
        hm.at(j, x, y) = static_cast<float>(
            std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) /
                     (2.0 * p.sigma * p.sigma)));
      }
    }
  }
  return hm;
}

struct DecodedJoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;
  int v = 0;
};

// Argmax decode with optional quarter-cell offset toward the larger neighbor.
// Ties resolve to the first maximum in row-major scan order; an all-zero map
// decodes to confidence 0 and v=0.
inline std::vector<DecodedJoint> decode_heatmaps(const HeatmapStack& hm, bool quarter_offset = true) {
  std::vector<DecodedJoint> out(hm.num_joints);
  for (int j = 0; j < hm.num_joints; ++j) {
    int bx = 0, by = 0;
    float best = hm.at(j, 0, 0);
    for (int y = 0; y < hm.height; ++y)
      for (int x = 0; x < hm.width; ++x)
        if (hm.at(j, x, y) > best) {
          best = hm.at(j, x, y);
          bx = x;
          by = y;
        }
    if (!(best > 0.0f)) continue;  // leaves the zero-confidence default

    double px = bx, py = by;
    if (quarter_offset) {
      if (bx > 0 && bx < hm.width - 1) {
        const float d = hm.at(j, bx + 1, by) - hm.at(j, bx - 1, by);
        px += d > 0 ? 0.25 : (d < 0 ? -0.25 : 0.0);
      }
      if (by > 0 && by < hm.height - 1) {
        const float d = hm.at(j, bx, by + 1) - hm.at(j, bx, by - 1);
        py += d > 0 ? 0.25 : (d < 0 ? -0.25 : 0.0);
      }
    }
    out[j] = {px * hm.stride, py * hm.stride, static_cast<double>(best), 2};
  }
  return out;
}

// Inspection dump: three little-endian u32 (J, H, W) followed by J*H*W
// little-endian float32 samples in map-major, row-major order.
inline std::string write_heatmap_dump(const HeatmapStack& hm) {
  std::string out;
  out.reserve(12 + hm.data.size() * 4);
  auto put_u32 = [&out](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  put_u32(static_cast<std::uint32_t>(hm.num_joints));
  put_u32(static_cast<std::uint32_t>(hm.height));
  put_u32(static_cast<std::uint32_t>(hm.width));
  for (float f : hm.data) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(bits);
  }
  return out;
}

inline HeatmapStack read_heatmap_dump(const std::string& bytes, int stride = 4) {
  auto get_u32 = [&bytes](size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + i])) << (8 * i);
    return v;
  };
  if (bytes.size() < 12) throw parse_error("heatmap dump truncated");
  HeatmapStack hm;
  hm.num_joints = static_cast<int>(get_u32(0));
  hm.height = static_cast<int>(get_u32(4));
  hm.width = static_cast<int>(get_u32(8));
  hm.stride = stride;
  const size_t n = static_cast<size_t>(hm.num_joints) * hm.height * hm.width;
  if (bytes.size() != 12 + n * 4) throw parse_error("heatmap dump has wrong length");
  hm.data.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const std::uint32_t bits = get_u32(12 + i * 4);
    std::memcpy(&hm.data[i], &bits, 4);
  }
  hm.weights.assign(hm.num_joints, 1.0f);
  return hm;
}

}  // namespace pob
