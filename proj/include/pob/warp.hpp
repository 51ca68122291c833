#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "pob/raster.hpp"

namespace pob {

// 2x3 affine map from source pixel coordinates to destination pixel
// coordinates. Pixel centers sit at integer coordinates (the usual warp
// convention), so keypoints and image resampling share one geometry.
struct AffineMap {
  // dest_x = m[0]*x + m[1]*y + m[2]; dest_y = m[3]*x + m[4]*y + m[5]
  std::array<double, 6> m{1, 0, 0, 0, 1, 0};

  double det() const { return m[0] * m[4] - m[1] * m[3]; }

  std::pair<double, double> apply(double x, double y) const {
    return {m[0] * x + m[1] * y + m[2], m[3] * x + m[4] * y + m[5]};
  }

  AffineMap inverse() const {
    const double d = det();
    if (d == 0.0) throw parameter_error("affine map is singular");
    AffineMap inv;
    inv.m[0] = m[4] / d;
    inv.m[1] = -m[1] / d;
    inv.m[3] = -m[3] / d;
    inv.m[4] = m[0] / d;
    inv.m[2] = -(inv.m[0] * m[2] + inv.m[1] * m[5]);
    inv.m[5] = -(inv.m[3] * m[2] + inv.m[4] * m[5]);
    return inv;
  }

  // Composition: (other ∘ this), i.e. `this` is applied first.
  AffineMap then(const AffineMap& o) const {
    AffineMap r;
    r.m[0] = o.m[0] * m[0] + o.m[1] * m[3];
    r.m[1] = o.m[0] * m[1] + o.m[1] * m[4];
    r.m[2] = o.m[0] * m[2] + o.m[1] * m[5] + o.m[2];
    r.m[3] = o.m[3] * m[0] + o.m[4] * m[3];
    r.m[4] = o.m[3] * m[1] + o.m[4] * m[4];
    r.m[5] = o.m[3] * m[2] + o.m[4] * m[5] + o.m[5];
    return r;
  }

  static AffineMap identity() { return {}; }

  static AffineMap translation(double tx, double ty) { return {{1, 0, tx, 0, 1, ty}}; }

  // Rotation (degrees, counterclockwise in image coordinates) and uniform
  // scale about a fixed center point.
  static AffineMap rotation_scale_about(double cx, double cy, double degrees, double scale) {
    const double rad = degrees * M_PI / 180.0;
    const double ca = std::cos(rad) * scale, sa = std::sin(rad) * scale;
    AffineMap r;
    r.m = {ca, -sa, cx - ca * cx + sa * cy, sa, ca, cy - sa * cx - ca * cy};
    return r;
  }
};

struct Extent {
  int width = 0;
  int height = 0;
};

// Map all labeled keypoints through `map`. Visibility is preserved except
// that, when an output extent is given, keypoints landing outside it are
// dropped (v -> 0) so they stop contributing to training targets.
inline std::vector<Keypoint> transform_keypoints(const AffineMap& map, const std::vector<Keypoint>& kps,
                                                 std::optional<Extent> extent = std::nullopt) {
  if (map.det() == 0.0) throw parameter_error("affine map is singular");
  std::vector<Keypoint> out = kps;
  for (auto& k : out) {
    if (!k.labeled()) continue;
    auto [x, y] = map.apply(k.x, k.y);
    if (extent && (x < 0.0 || x >= extent->width || y < 0.0 || y >= extent->height)) {
      k = Keypoint{};  // dropped
    } else {
      k.x = x;
      k.y = y;
    }
  }
  return out;
}

namespace detail {

// Bilinear sample at real index coordinates; taps outside the image read as
// the constant border value 0.
inline double sample_bilinear_border0(const Raster& img, double u, double v, int ch) {
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const double fx = u - x0, fy = v - y0;
  const double w[4] = {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy};
  const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
  const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
  double acc = 0.0;
  for (int t = 0; t < 4; ++t) {
    if (w[t] == 0.0) continue;
    if (xs[t] < 0 || xs[t] >= img.width || ys[t] < 0 || ys[t] >= img.height) continue;
    acc += w[t] * img.at(xs[t], ys[t], ch);
  }
  return acc;
}

}  // namespace detail

// Resample the image under `map` into an out_w x out_h raster: each output
// pixel reads the bilinear sample at the inverse-mapped position, with a
// constant black border.
inline Raster warp_affine(const Raster& img, const AffineMap& map, int out_w, int out_h) {
  const AffineMap inv = map.inverse();
  Raster out(out_w, out_h, img.channels);
  for (int y = 0; y < out_h; ++y)
    for (int x = 0; x < out_w; ++x) {
      auto [u, v] = inv.apply(x, y);
      for (int c = 0; c < img.channels; ++c)
        out.at(x, y, c) = round_u8(detail::sample_bilinear_border0(img, u, v, c));
    }
  return out;
}

struct CropResult {
  Raster image;
  AffineMap map;  // source image coordinates -> crop coordinates
};

// Extend the box symmetrically about its center along the short dimension
// until it matches the output aspect ratio, then resample it to
// out_w x out_h. The returned map sends extended-box corners to (0,0) and
// (out_w,out_h).
inline CropResult crop_affine(const Raster& img, const std::array<double, 4>& bbox, int out_w = 192,
                              int out_h = 256) {
  const double w = bbox[2], h = bbox[3];
  if (!(w > 0.0) || !(h > 0.0)) throw parameter_error("crop_affine: bbox width/height must be positive");
  const double target = static_cast<double>(out_w) / out_h;
  double ew = w, eh = h;
  if (w / h > target)
    eh = w / target;
  else
    ew = h * target;
  const double cx = bbox[0] + w / 2.0, cy = bbox[1] + h / 2.0;
  const double x0 = cx - ew / 2.0, y0 = cy - eh / 2.0;

  AffineMap map;
  map.m = {out_w / ew, 0, -x0 * out_w / ew, 0, out_h / eh, -y0 * out_h / eh};
  return {warp_affine(img, map, out_w, out_h), map};
}

// Mirror the image about its vertical axis, reflect keypoint x coordinates,
// and swap left/right joint slots per the schema's flip pairs.
inline std::pair<Raster, std::vector<Keypoint>> flip_horizontal(
    const Raster& img, const std::vector<Keypoint>& kps,
    const std::vector<std::pair<int, int>>& flip_pairs) {
  Raster out(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = img.at(img.width - 1 - x, y, c);

  std::vector<Keypoint> flipped = kps;
  for (auto& k : flipped)
    if (k.labeled()) k.x = img.width - 1 - k.x;
  for (auto [l, r] : flip_pairs) std::swap(flipped[l], flipped[r]);
  return {std::move(out), std::move(flipped)};
}

}  // namespace pob
