#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sbv/errors.hpp"

namespace sbv {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
  Vec3 operator/(double k) const { return {x / k, y / k, z / k}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const { return *this / norm(); }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double k, const Vec3& v) { return v * k; }
inline Vec3 cmin(const Vec3& a, const Vec3& b) {
  return {std::fmin(a.x, b.x), std::fmin(a.y, b.y), std::fmin(a.z, b.z)};
}
inline Vec3 cmax(const Vec3& a, const Vec3& b) {
  return {std::fmax(a.x, b.x), std::fmax(a.y, b.y), std::fmax(a.z, b.z)};
}

struct Aabb {
  Vec3 min{-1.0, -1.0, -1.0};
  Vec3 max{1.0, 1.0, 1.0};

  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
  }
  Vec3 extent() const { return max - min; }
  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 clamp(const Vec3& p) const { return cmin(cmax(p, min), max); }

  // Slab clip. Returns false on a miss; on a hit [t0, t1] is the parameter
  // range of the intersection (t0 may be negative for origins inside).
  bool clip(const Vec3& o, const Vec3& d, double& t0, double& t1) const;
};

// All scenes are authored inside the unit cube.
inline Aabb scene_aabb() { return Aabb{{-1, -1, -1}, {1, 1, 1}}; }

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit
  double t_near = 0.0;
  double t_far = 0.0;

  Vec3 at(double t) const { return origin + direction * t; }
};

// Pinhole camera, no distortion. Camera axes (OpenCV convention): x right,
// y down, z forward; `right/down/forward` are those axes in world coordinates,
// i.e. the columns of the camera-to-world rotation.
struct CameraPose {
  Vec3 position;
  Vec3 right{1, 0, 0};
  Vec3 down{0, -1, 0};
  Vec3 forward{0, 0, -1};
  double focal = 44.8;  // pixels
  double cx = 32.0, cy = 32.0;
  int width = 64, height = 64;

  static CameraPose look_at(const Vec3& eye, const Vec3& target, int width,
                            int height, double focal_px);

  Vec3 to_world(const Vec3& cam) const {
    return right * cam.x + down * cam.y + forward * cam.z;
  }
  Vec3 to_camera(const Vec3& world) const {
    const Vec3 p = world - position;
    return {right.dot(p), down.dot(p), forward.dot(p)};
  }
  // Inverse of pixel_ray's direction map; used by the re-projection tests.
  void project(const Vec3& world, double& px, double& py) const;
};

// Ray through pixel center (px+0.5, py+0.5), clipped to the scene box.
Ray pixel_ray(const CameraPose& camera, double px, double py,
              const Aabb& box = scene_aabb());

double camera_distance(const CameraPose& a, const CameraPose& b);

enum class ViewBand { Common, High, Low };

const char* band_name(ViewBand b);
ViewBand band_from_name(const std::string& name);

struct Rig {
  std::vector<CameraPose> poses;
  std::vector<ViewBand> bands;  // one label per pose
};

// n poses at the given radius looking at the origin, elevations evenly spread
// over the range, azimuths on a Fibonacci lattice with a seeded phase.
std::vector<CameraPose> hemisphere_rig(int n, double radius, double elev_lo_deg,
                                       double elev_hi_deg, std::uint64_t seed,
                                       int width = 64, int height = 64);

// Three elevation bands emitted in block order: common [10°,35°],
// high-angle [55°,80°], low-angle [−10°,5°].
Rig imbalanced_rig(int n_common, int n_high, int n_low, double radius,
                   std::uint64_t seed, int width = 64, int height = 64);

void save_rig(const std::string& path, const Rig& rig);
Rig load_rig(const std::string& path);

}  // namespace sbv
