// SPDX-License-Identifier: Apache-2.0
#include "exprkit/image.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace exprkit {

ImageU8 read_jpeg(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw IOError("cannot read image: " + path.string());
  ImageU8 img(bgr.rows, bgr.cols);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      img.at(y, x, 0) = row[x][2];
      img.at(y, x, 1) = row[x][1];
      img.at(y, x, 2) = row[x][0];
    }
  }
  return img;
}

void write_jpeg(const std::filesystem::path& path, const ImageU8& img, int quality) {
  cv::Mat bgr(img.h, img.w, CV_8UC3);
  for (int y = 0; y < img.h; ++y) {
    cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.w; ++x) {
      row[x][2] = img.at(y, x, 0);
      row[x][1] = img.at(y, x, 1);
      row[x][0] = img.at(y, x, 2);
    }
  }
  if (!cv::imwrite(path.string(), bgr, {cv::IMWRITE_JPEG_QUALITY, quality}))
    throw IOError("cannot write image: " + path.string());
}

ImageF to_float01(const ImageU8& img) {
  ImageF out(img.h, img.w);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    out.data[i] = static_cast<float>(img.data[i]) / 255.f;
  return out;
}

ImageU8 to_u8(const ImageF& img) {
  ImageU8 out(img.h, img.w);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    const float v = std::clamp(img.data[i], 0.f, 1.f);
    out.data[i] = static_cast<std::uint8_t>(std::lround(v * 255.f));
  }
  return out;
}

ImageF resize_bilinear(const ImageF& img, int out_h, int out_w) {
  if (out_h <= 0 || out_w <= 0) throw ConfigError("resize target must be positive");
  if (out_h == img.h && out_w == img.w) return img;
  ImageF out(out_h, out_w);
  const double sy = static_cast<double>(img.h) / out_h;
  const double sx = static_cast<double>(img.w) / out_w;
  for (int y = 0; y < out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(img.h - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.h - 1);
    const float wy = static_cast<float>(fy - y0);
    for (int x = 0; x < out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(img.w - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.w - 1);
      const float wx = static_cast<float>(fx - x0);
      for (int c = 0; c < 3; ++c) {
        const float top = img.at(y0, x0, c) * (1.f - wx) + img.at(y0, x1, c) * wx;
        const float bot = img.at(y1, x0, c) * (1.f - wx) + img.at(y1, x1, c) * wx;
        out.at(y, x, c) = top * (1.f - wy) + bot * wy;
      }
    }
  }
  return out;
}

ImageF center_crop(const ImageF& img, int size) {
  if (img.h < size || img.w < size) throw ShapeError("center_crop: image smaller than crop");
  const int oy = (img.h - size) / 2;
  const int ox = (img.w - size) / 2;
  ImageF out(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(oy + y, ox + x, c);
  return out;
}

ImageF eval_preprocess(const ImageU8& img, int size) {
  ImageF f = to_float01(img);
  const int shorter = std::min(f.h, f.w);
  if (shorter != size) {
    const double scale = static_cast<double>(size) / shorter;
    const int nh = std::max(size, static_cast<int>(std::lround(f.h * scale)));
    const int nw = std::max(size, static_cast<int>(std::lround(f.w * scale)));
    f = resize_bilinear(f, nh, nw);
  }
  return center_crop(f, size);
}

} // namespace exprkit
