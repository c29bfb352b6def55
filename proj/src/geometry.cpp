#include "sbv/geometry.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "sbv/rng.hpp"

namespace sbv {

bool Aabb::clip(const Vec3& o, const Vec3& d, double& t0, double& t1) const {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double oa = o[axis], da = d[axis];
    const double mn = min[axis], mx = max[axis];
    if (da == 0.0) {
      if (oa < mn || oa > mx) return false;
      continue;
    }
    double ta = (mn - oa) / da;
    double tb = (mx - oa) / da;
    if (ta > tb) std::swap(ta, tb);
    lo = std::max(lo, ta);
    hi = std::min(hi, tb);
  }
  if (lo > hi) return false;
  t0 = lo;
  t1 = hi;
  return true;
}

CameraPose CameraPose::look_at(const Vec3& eye, const Vec3& target, int width,
                               int height, double focal_px) {
  CameraPose pose;
  pose.position = eye;
  pose.forward = (target - eye).normalized();
  const Vec3 world_up{0, 1, 0};
  Vec3 right = pose.forward.cross(world_up);
  if (right.norm() < 1e-9) right = pose.forward.cross(Vec3{0, 0, 1});
  pose.right = right.normalized();
  pose.down = pose.forward.cross(pose.right);
  pose.focal = focal_px;
  pose.width = width;
  pose.height = height;
  pose.cx = 0.5 * width;
  pose.cy = 0.5 * height;
  return pose;
}

void CameraPose::project(const Vec3& world, double& px, double& py) const {
  const Vec3 c = to_camera(world);
  px = focal * c.x / c.z + cx - 0.5;
  py = focal * c.y / c.z + cy - 0.5;
}

Ray pixel_ray(const CameraPose& camera, double px, double py, const Aabb& box) {
  const Vec3 dir_cam{(px + 0.5 - camera.cx) / camera.focal,
                     (py + 0.5 - camera.cy) / camera.focal, 1.0};
  Ray ray;
  ray.origin = camera.position;
  ray.direction = camera.to_world(dir_cam).normalized();
  double t0, t1;
  if (!box.clip(ray.origin, ray.direction, t0, t1)) {
    throw RayMissesScene("pixel ray misses scene bounds");
  }
  t0 = std::max(t0, 0.0);
  if (t1 <= t0) throw RayMissesScene("scene bounds behind camera");
  ray.t_near = t0;
  ray.t_far = t1;
  return ray;
}

double camera_distance(const CameraPose& a, const CameraPose& b) {
  return (a.position - b.position).norm();
}

const char* band_name(ViewBand b) {
  switch (b) {
    case ViewBand::Common:
      return "common";
    case ViewBand::High:
      return "high";
    case ViewBand::Low:
      return "low";
  }
  return "common";
}

ViewBand band_from_name(const std::string& name) {
  if (name == "high") return ViewBand::High;
  if (name == "low") return ViewBand::Low;
  return ViewBand::Common;
}

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGoldenAngle = kPi * (3.0 - 2.23606797749978969641);  // π(3−√5)

CameraPose pose_on_sphere(double radius, double elev_deg, double azim_rad,
                          int width, int height) {
  const double elev = elev_deg * kPi / 180.0;
  const Vec3 eye{radius * std::cos(elev) * std::cos(azim_rad),
                 radius * std::sin(elev),
                 radius * std::cos(elev) * std::sin(azim_rad)};
  return CameraPose::look_at(eye, Vec3{0, 0, 0}, width, height, 0.7 * width);
}

void append_band(std::vector<CameraPose>& poses, int n, double radius,
                 double lo_deg, double hi_deg, std::uint64_t seed,
                 std::uint64_t band_tag, int width, int height) {
  Rng rng = stream(seed, 0x726967 /* "rig" */, band_tag);
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  for (int i = 0; i < n; ++i) {
    const double elev = lo_deg + (hi_deg - lo_deg) * (i + 0.5) / n;
    const double azim = phase + kGoldenAngle * i;
    poses.push_back(pose_on_sphere(radius, elev, azim, width, height));
  }
}

}  // namespace

std::vector<CameraPose> hemisphere_rig(int n, double radius, double elev_lo_deg,
                                       double elev_hi_deg, std::uint64_t seed,
                                       int width, int height) {
  std::vector<CameraPose> poses;
  poses.reserve(static_cast<std::size_t>(n));
  append_band(poses, n, radius, elev_lo_deg, elev_hi_deg, seed, 0, width, height);
  return poses;
}

Rig imbalanced_rig(int n_common, int n_high, int n_low, double radius,
                   std::uint64_t seed, int width, int height) {
  Rig rig;
  append_band(rig.poses, n_common, radius, 10.0, 35.0, seed, 1, width, height);
  append_band(rig.poses, n_high, radius, 55.0, 80.0, seed, 2, width, height);
  append_band(rig.poses, n_low, radius, -10.0, 5.0, seed, 3, width, height);
  rig.bands.assign(static_cast<std::size_t>(n_common), ViewBand::Common);
  rig.bands.insert(rig.bands.end(), static_cast<std::size_t>(n_high), ViewBand::High);
  rig.bands.insert(rig.bands.end(), static_cast<std::size_t>(n_low), ViewBand::Low);
  return rig;
}

void save_rig(const std::string& path, const Rig& rig) {
  nlohmann::json doc = nlohmann::json::array();
  for (std::size_t i = 0; i < rig.poses.size(); ++i) {
    const CameraPose& p = rig.poses[i];
    nlohmann::json cam;
    cam["position"] = {p.position.x, p.position.y, p.position.z};
    // Camera-to-world rotation, row-major; columns are right/down/forward.
    cam["rotation"] = {p.right.x, p.down.x, p.forward.x,  //
                       p.right.y, p.down.y, p.forward.y,  //
                       p.right.z, p.down.z, p.forward.z};
    cam["focal"] = p.focal;
    cam["cx"] = p.cx;
    cam["cy"] = p.cy;
    cam["width"] = p.width;
    cam["height"] = p.height;
    cam["band"] = band_name(i < rig.bands.size() ? rig.bands[i] : ViewBand::Common);
    doc.push_back(cam);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write rig file: " + path);
  out << doc.dump(2) << "\n";
}

Rig load_rig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read rig file: " + path);
  nlohmann::json doc;
  in >> doc;
  Rig rig;
  for (const auto& cam : doc) {
    CameraPose p;
    p.position = {cam["position"][0], cam["position"][1], cam["position"][2]};
    const auto& r = cam["rotation"];
    p.right = {r[0], r[3], r[6]};
    p.down = {r[1], r[4], r[7]};
    p.forward = {r[2], r[5], r[8]};
    p.focal = cam["focal"];
    p.cx = cam["cx"];
    p.cy = cam["cy"];
    p.width = cam["width"];
    p.height = cam["height"];
    rig.poses.push_back(p);
    rig.bands.push_back(band_from_name(cam.value("band", "common")));
  }
  return rig;
}

}  // namespace sbv
