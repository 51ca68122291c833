#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "pob/dataset.hpp"
#include "pob/errors.hpp"

namespace pob {

// Decoded image buffer: row-major, interleaved samples, RGB channel order for
// color images. All region transforms produce a new Raster; inputs are never
// mutated.
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 or 3
  std::vector<std::uint8_t> data;

  Raster() = default;
  Raster(int w, int h, int c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c), data(static_cast<size_t>(w) * h * c, fill) {
    if (w < 1 || h < 1 || (c != 1 && c != 3))
      throw parameter_error("raster dimensions must be positive with 1 or 3 channels");
  }

  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t& at(int x, int y, int c) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }

  bool operator==(const Raster&) const = default;
};

// Occlusion region. A pixel belongs to a circle iff its integer coordinates
// satisfy (x-cx)^2 + (y-cy)^2 <= r^2 (centers are real-valued, straight from
// the annotations). A pixel belongs to a rect iff x0 <= x <= x1 and
// y0 <= y <= y1 (closed real bounds, point sampling). Regions may extend past
// the image; membership is always intersected with the image extent.
struct Circle {
  double cx = 0.0, cy = 0.0, radius = 0.0;
};
struct RectF {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};
using Region = std::variant<Circle, RectF>;

// Half-open integer pixel window [x0,x1) x [y0,y1).
struct IntRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  IntRect clamped(int w, int h) const {
    return {std::max(x0, 0), std::max(y0, 0), std::min(x1, w), std::min(y1, h)};
  }
  bool operator==(const IntRect&) const = default;
};

struct BlurParams {
  int kernel_size = 3;  // odd, >= 3
  double sigma = 1.0;   // > 0
};

inline void validate_blur_params(const BlurParams& p) {
  if (p.kernel_size < 3 || p.kernel_size % 2 == 0)
    throw parameter_error("blur kernel size must be odd and >= 3, got " + std::to_string(p.kernel_size));
  if (!(p.sigma > 0.0)) throw parameter_error("blur sigma must be positive");
}

// Rounding happens exactly once per output sample, at u8 conversion:
// round half up, then clamp to [0,255].
inline std::uint8_t round_u8(double v) {
  double r = std::floor(v + 0.5);
  if (r < 0.0) return 0;
  if (r > 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

namespace detail {

// Pixel membership test plus the candidate iteration window.
inline bool region_contains(const Region& region, int x, int y) {
  if (const Circle* c = std::get_if<Circle>(&region)) {
    const double dx = x - c->cx, dy = y - c->cy;
    return dx * dx + dy * dy <= c->radius * c->radius;
  }
  const RectF& r = std::get<RectF>(region);
  return x >= r.x0 && x <= r.x1 && y >= r.y0 && y <= r.y1;
}

inline IntRect region_window(const Region& region, int w, int h) {
  double x0, y0, x1, y1;
  if (const Circle* c = std::get_if<Circle>(&region)) {
    if (c->radius < 0.0) return {0, 0, 0, 0};
    x0 = c->cx - c->radius;
    x1 = c->cx + c->radius;
    y0 = c->cy - c->radius;
    y1 = c->cy + c->radius;
  } else {
    const RectF& r = std::get<RectF>(region);
    x0 = r.x0;
    x1 = r.x1;
    y0 = r.y0;
    y1 = r.y1;
  }
  if (x1 < x0 || y1 < y0) return {0, 0, 0, 0};
  IntRect win{static_cast<int>(std::ceil(x0)), static_cast<int>(std::ceil(y0)),
              static_cast<int>(std::floor(x1)) + 1, static_cast<int>(std::floor(y1)) + 1};
  return win.clamped(w, h);
}

template <typename Fn>
void for_each_region_pixel(const Region& region, int w, int h, Fn&& fn) {
  const IntRect win = region_window(region, w, h);
  for (int y = win.y0; y < win.y1; ++y)
    for (int x = win.x0; x < win.x1; ++x)
      if (region_contains(region, x, y)) fn(x, y);
}

// Reflect an out-of-range index back into [0, n) without repeating the edge
// sample (mirror around 0 and n-1).
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

}  // namespace detail

// Number of integer pixels of an image of size w x h inside the region.
inline std::int64_t region_pixel_count(const Region& region, int w, int h) {
  std::int64_t n = 0;
  detail::for_each_region_pixel(region, w, h, [&](int, int) { ++n; });
  return n;
}

// Full 2D kernel with entries exp(-(di^2+dj^2)/(2 sigma^2)), normalized so the
// sum over all entries is 1. Entry (i,j) is at row-major index i*size+j; the
// normalizing sum is accumulated in row-major order in double precision.
inline std::vector<double> gaussian_kernel(const BlurParams& p) {
  validate_blur_params(p);
  const int k = p.kernel_size;
  const int c = (k - 1) / 2;
  std::vector<double> kernel(static_cast<size_t>(k) * k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double di = i - c, dj = j - c;
      const double v = std::exp(-(di * di + dj * dj) / (2.0 * p.sigma * p.sigma));
      kernel[static_cast<size_t>(i) * k + j] = v;
      sum += v;
    }
  }
  for (double& v : kernel) v /= sum;
  return kernel;
}

// Gaussian blur applied only inside the region. The blurred value of a pixel
// is the dense 2D convolution sum over kernel rows then columns, in double
// precision, sampling the *input* image with reflected borders; pixels outside
// the region are copied byte for byte.
inline Raster blur_region(const Raster& img, const Region& region, const BlurParams& p) {
  const std::vector<double> kernel = gaussian_kernel(p);
  const int k = p.kernel_size;
  const int c = (k - 1) / 2;
  Raster out = img;
  detail::for_each_region_pixel(region, img.width, img.height, [&](int x, int y) {
    for (int ch = 0; ch < img.channels; ++ch) {
      double acc = 0.0;
      for (int ky = 0; ky < k; ++ky) {
        const int sy = detail::reflect_index(y + ky - c, img.height);
        for (int kx = 0; kx < k; ++kx) {
          const int sx = detail::reflect_index(x + kx - c, img.width);
          acc += kernel[static_cast<size_t>(ky) * k + kx] * img.at(sx, sy, ch);
        }
      }
      out.at(x, y, ch) = round_u8(acc);
    }
  });
  return out;
}

struct FillBlack {};
struct FillMean {
  std::array<double, 3> means{};  // per channel; only the first `channels` used
};
using FillMode = std::variant<FillBlack, FillMean>;

// Per-channel arithmetic mean over all pixels. Sums are exact (64-bit integer
// accumulation of u8 samples).
inline std::array<double, 3> image_mean(const Raster& img) {
  std::array<std::uint64_t, 3> sums{};
  const size_t n = static_cast<size_t>(img.width) * img.height;
  for (size_t i = 0; i < n; ++i)
    for (int c = 0; c < img.channels; ++c) sums[c] += img.data[i * img.channels + c];
  std::array<double, 3> means{};
  for (int c = 0; c < img.channels; ++c) means[c] = static_cast<double>(sums[c]) / static_cast<double>(n);
  return means;
}

// Fill the region with zeros (blackout) or the rounded per-channel means
// (meanout). Meanout means must come from the original, un-occluded image.
inline Raster fill_region(const Raster& img, const Region& region, const FillMode& mode) {
  std::array<std::uint8_t, 3> value{};
  if (const FillMean* m = std::get_if<FillMean>(&mode))
    for (int c = 0; c < img.channels; ++c) value[c] = round_u8(m->means[c]);
  Raster out = img;
  detail::for_each_region_pixel(region, img.width, img.height, [&](int x, int y) {
    for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = value[c];
  });
  return out;
}

// Smallest axis-aligned rectangle containing every labeled keypoint, expanded
// by `pad` on each side. Unclamped; region ops clamp at rasterization.
inline RectF min_rect(const std::vector<Keypoint>& keypoints, double pad = 0.0) {
  bool any = false;
  RectF r;
  for (const auto& k : keypoints) {
    if (!k.labeled()) continue;
    if (!any) {
      r = {k.x, k.y, k.x, k.y};
      any = true;
    } else {
      r.x0 = std::min(r.x0, k.x);
      r.y0 = std::min(r.y0, k.y);
      r.x1 = std::max(r.x1, k.x);
      r.y1 = std::max(r.y1, k.y);
    }
  }
  if (!any) throw validation_error("min_rect: no labeled keypoints");
  return {r.x0 - pad, r.y0 - pad, r.x1 + pad, r.y1 + pad};
}

namespace detail {

// Bilinear tap helper clamping sample coordinates to a window.
inline double sample_bilinear_window(const Raster& img, const IntRect& win, double u, double v, int ch) {
  const auto clamp_tap = [](int i, int lo, int hi) { return std::clamp(i, lo, hi); };
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const double fx = u - x0, fy = v - y0;
  const int xa = clamp_tap(x0, win.x0, win.x1 - 1), xb = clamp_tap(x0 + 1, win.x0, win.x1 - 1);
  const int ya = clamp_tap(y0, win.y0, win.y1 - 1), yb = clamp_tap(y0 + 1, win.y0, win.y1 - 1);
  const double top = (1.0 - fx) * img.at(xa, ya, ch) + fx * img.at(xb, ya, ch);
  const double bot = (1.0 - fx) * img.at(xa, yb, ch) + fx * img.at(xb, yb, ch);
  return (1.0 - fy) * top + fy * bot;
}

}  // namespace detail

// Replace dst_rect with a bilinear resample of src_rect. Sample positions use
// the pixel-center convention: destination pixel i maps to source offset
// (i + 0.5) * src_size / dst_size - 0.5 inside the source window, with taps
// clamped to the window. Equal-sized windows degenerate to a byte copy.
inline Raster paste_resized(const Raster& dst, const Raster& src, IntRect src_rect, IntRect dst_rect) {
  if (src.channels != dst.channels)
    throw parameter_error("paste_resized: source and destination channel counts differ");
  src_rect = src_rect.clamped(src.width, src.height);
  dst_rect = dst_rect.clamped(dst.width, dst.height);
  if (src_rect.empty() || dst_rect.empty())
    throw parameter_error("paste_resized: degenerate rect after clamping");

  const double sx = static_cast<double>(src_rect.width()) / dst_rect.width();
  const double sy = static_cast<double>(src_rect.height()) / dst_rect.height();
  Raster out = dst;
  for (int y = dst_rect.y0; y < dst_rect.y1; ++y) {
    const double v = src_rect.y0 + (y - dst_rect.y0 + 0.5) * sy - 0.5;
    for (int x = dst_rect.x0; x < dst_rect.x1; ++x) {
      const double u = src_rect.x0 + (x - dst_rect.x0 + 0.5) * sx - 0.5;
      for (int c = 0; c < dst.channels; ++c)
        out.at(x, y, c) = round_u8(detail::sample_bilinear_window(src, src_rect, u, v, c));
    }
  }
  return out;
}

}  // namespace pob
