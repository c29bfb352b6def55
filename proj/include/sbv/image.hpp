#pragma once

#include <string>
#include <vector>

namespace sbv {

// Row-major RGB image with double channels in [0,1].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // 3 * width * height

  Image() = default;
  Image(int w, int h) : width(w), height(h), data(3u * w * h, 0.0) {}

  double& at(int x, int y, int c) { return data[3u * (static_cast<std::size_t>(y) * width + x) + c]; }
  double at(int x, int y, int c) const {
    return data[3u * (static_cast<std::size_t>(y) * width + x) + c];
  }
};

// Binary PPM (P6, maxval 255). Channels are clamped to [0,1] and quantized
// with round-half-up so the byte for a given double never varies.
void write_ppm(const std::string& path, const Image& img);
Image read_ppm(const std::string& path);

}  // namespace sbv
