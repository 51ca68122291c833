#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <opencv2/imgcodecs.hpp>

#include "pob/raster.hpp"

namespace pob {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open file: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw io_error("read failed: " + path.string());
  return bytes;
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open file for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw io_error("write failed: " + path.string());
}

// Image files are decoded with OpenCV (PNG/JPEG) and normalized to 3-channel
// RGB rasters; all raster math in this library runs on the decoded buffer.
inline Raster decode_image(const std::string& bytes, const std::string& name = "<memory>") {
  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                    const_cast<char*>(bytes.data()));
  cv::Mat bgr = cv::imdecode(raw, cv::IMREAD_COLOR);
  if (bgr.empty()) throw io_error("cannot decode image: " + name);
  Raster out(bgr.cols, bgr.rows, 3);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      out.at(x, y, 0) = row[x][2];
      out.at(x, y, 1) = row[x][1];
      out.at(x, y, 2) = row[x][0];
    }
  }
  return out;
}

inline Raster load_image(const std::filesystem::path& path) {
  return decode_image(read_file(path), path.string());
}

// Outputs are always re-encoded as PNG (lossless, deterministic bytes for a
// given raster).
inline std::string encode_png(const Raster& img) {
  cv::Mat mat(img.height, img.width, img.channels == 1 ? CV_8UC1 : CV_8UC3);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      if (img.channels == 1) {
        mat.at<std::uint8_t>(y, x) = img.at(x, y, 0);
      } else {
        mat.at<cv::Vec3b>(y, x) = cv::Vec3b(img.at(x, y, 2), img.at(x, y, 1), img.at(x, y, 0));
      }
    }
  std::vector<std::uint8_t> buf;
  if (!cv::imencode(".png", mat, buf)) throw io_error("PNG encoding failed");
  return std::string(buf.begin(), buf.end());
}

inline void save_png(const std::filesystem::path& path, const Raster& img) {
  write_file(path, encode_png(img));
}

}  // namespace pob
