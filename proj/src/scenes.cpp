#include "sbv/scenes.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sbv/parallel.hpp"
#include "sbv/rng.hpp"

namespace sbv {

SceneSdf SceneSdf::sphere(const Vec3& center, double radius, const Vec3& albedo) {
  SceneSdf s;
  s.nodes_.push_back({Kind::Sphere, center, {radius, 0, 0}, albedo, -1, -1});
  s.root_ = 0;
  return s;
}

SceneSdf SceneSdf::box(const Vec3& center, const Vec3& half, const Vec3& albedo) {
  SceneSdf s;
  s.nodes_.push_back({Kind::Box, center, half, albedo, -1, -1});
  s.root_ = 0;
  return s;
}

SceneSdf SceneSdf::torus(const Vec3& center, double major, double minor,
                         const Vec3& albedo) {
  SceneSdf s;
  s.nodes_.push_back({Kind::Torus, center, {major, minor, 0}, albedo, -1, -1});
  s.root_ = 0;
  return s;
}

SceneSdf SceneSdf::cylinder(const Vec3& center, double radius, double half_height,
                            const Vec3& albedo) {
  SceneSdf s;
  s.nodes_.push_back(
      {Kind::Cylinder, center, {radius, half_height, 0}, albedo, -1, -1});
  s.root_ = 0;
  return s;
}

SceneSdf SceneSdf::combine(Kind op, SceneSdf a, SceneSdf b) {
  if (a.empty() && op == Kind::Union) return b;
  if (a.empty() || b.empty()) {
    throw std::runtime_error("CSG combine with an empty operand");
  }
  SceneSdf out = std::move(a);
  const int offset = static_cast<int>(out.nodes_.size());
  for (Node n : b.nodes_) {
    if (n.left >= 0) n.left += offset;
    if (n.right >= 0) n.right += offset;
    out.nodes_.push_back(n);
  }
  Node top;
  top.kind = op;
  top.left = out.root_;
  top.right = b.root_ + offset;
  out.nodes_.push_back(top);
  out.root_ = static_cast<int>(out.nodes_.size()) - 1;
  return out;
}

SceneSdf SceneSdf::join(SceneSdf a, SceneSdf b) {
  return combine(Kind::Union, std::move(a), std::move(b));
}
SceneSdf SceneSdf::intersect(SceneSdf a, SceneSdf b) {
  return combine(Kind::Intersection, std::move(a), std::move(b));
}
SceneSdf SceneSdf::subtract(SceneSdf a, SceneSdf b) {
  return combine(Kind::Difference, std::move(a), std::move(b));
}

SdfHit SceneSdf::eval_node(int idx, const Vec3& x) const {
  const Node& n = nodes_[idx];
  switch (n.kind) {
    case Kind::Sphere: {
      return {(x - n.center).norm() - n.params.x, n.albedo};
    }
    case Kind::Box: {
      const Vec3 p = x - n.center;
      const Vec3 q{std::fabs(p.x) - n.params.x, std::fabs(p.y) - n.params.y,
                   std::fabs(p.z) - n.params.z};
      const Vec3 outside = cmax(q, Vec3{0, 0, 0});
      const double inside = std::fmin(std::fmax(q.x, std::fmax(q.y, q.z)), 0.0);
      return {outside.norm() + inside, n.albedo};
    }
    case Kind::Torus: {
      const Vec3 p = x - n.center;
      const double ring = std::hypot(p.x, p.z) - n.params.x;
      return {std::hypot(ring, p.y) - n.params.y, n.albedo};
    }
    case Kind::Cylinder: {
      const Vec3 p = x - n.center;
      const double dr = std::hypot(p.x, p.z) - n.params.x;
      const double dy = std::fabs(p.y) - n.params.y;
      const double inside = std::fmin(std::fmax(dr, dy), 0.0);
      const double ox = std::fmax(dr, 0.0), oy = std::fmax(dy, 0.0);
      return {inside + std::hypot(ox, oy), n.albedo};
    }
    case Kind::Union: {
      const SdfHit a = eval_node(n.left, x);
      const SdfHit b = eval_node(n.right, x);
      return a.d <= b.d ? a : b;
    }
    case Kind::Intersection: {
      const SdfHit a = eval_node(n.left, x);
      const SdfHit b = eval_node(n.right, x);
      return a.d >= b.d ? a : b;
    }
    case Kind::Difference: {
      const SdfHit a = eval_node(n.left, x);
      SdfHit b = eval_node(n.right, x);
      b.d = -b.d;
      return a.d >= b.d ? a : b;
    }
  }
  return {1e30, {1, 1, 1}};
}

SdfHit SceneSdf::eval(const Vec3& x) const {
  if (empty()) return {1e30, {1, 1, 1}};
  return eval_node(root_, x);
}

std::optional<SurfaceHit> sphere_trace(const SceneSdf& scene, const Ray& ray) {
  if (scene.empty()) return std::nullopt;
  double t = ray.t_near;
  for (int step = 0; step < 256; ++step) {
    if (t > ray.t_far) return std::nullopt;
    const Vec3 p = ray.at(t);
    const SdfHit h = scene.eval(p);
    if (h.d < 1e-4) return SurfaceHit{t, p, h.albedo};
    t += h.d;
  }
  return std::nullopt;
}

const std::vector<Light>& default_lights() {
  static const std::vector<Light> lights = {
      {Vec3{0.5, 1.0, 0.3}.normalized(), 0.6},
      {Vec3{-0.6, 0.4, -0.7}.normalized(), 0.35},
  };
  return lights;
}

namespace {

Vec3 sdf_normal(const SceneSdf& scene, const Vec3& p, const Vec3& fallback) {
  const double h = 1e-4;
  const Vec3 g{scene.eval({p.x + h, p.y, p.z}).d - scene.eval({p.x - h, p.y, p.z}).d,
               scene.eval({p.x, p.y + h, p.z}).d - scene.eval({p.x, p.y - h, p.z}).d,
               scene.eval({p.x, p.y, p.z + h}).d - scene.eval({p.x, p.y, p.z - h}).d};
  const double n = g.norm();
  return n < 1e-12 ? fallback : g / n;
}

}  // namespace

Image render_gt(const SceneSdf& scene, const CameraPose& camera,
                const std::vector<Light>& lights) {
  Image img(camera.width, camera.height);
  std::fill(img.data.begin(), img.data.end(), 1.0);  // white background
  parallel_for(camera.height, 1, [&](std::size_t y0, std::size_t y1) {
    for (std::size_t py = y0; py < y1; ++py) {
      for (int px = 0; px < camera.width; ++px) {
        Ray ray;
        try {
          ray = pixel_ray(camera, px, static_cast<double>(py));
        } catch (const RayMissesScene&) {
          continue;
        }
        const auto hit = sphere_trace(scene, ray);
        if (!hit) continue;
        const Vec3 n = sdf_normal(scene, hit->point, -ray.direction);
        double shade = 0.25;
        for (const Light& l : lights) {
          shade += std::fmax(0.0, n.dot(l.dir)) * l.intensity;
        }
        for (int c = 0; c < 3; ++c) {
          img.at(px, static_cast<int>(py), c) =
              std::fmin(1.0, std::fmax(0.0, hit->albedo[c] * shade));
        }
      }
    }
  });
  return img;
}

std::vector<Vec3> gt_surface_points(const SceneSdf& scene, int n,
                                    std::uint64_t seed) {
  const Aabb box = scene_aabb();
  Rng rng = stream(seed, 0x677470 /* "gtp" */);
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  long attempts = 0;
  const long max_attempts = 1000L * n + 1000;
  while (static_cast<int>(pts.size()) < n && attempts++ < max_attempts) {
    Vec3 p{rng.uniform(box.min.x, box.max.x), rng.uniform(box.min.y, box.max.y),
           rng.uniform(box.min.z, box.max.z)};
    bool ok = false;
    for (int it = 0; it < 64; ++it) {
      const double d = scene.eval(p).d;
      if (std::fabs(d) < 1e-5) {
        ok = true;
        break;
      }
      const Vec3 g = sdf_normal(scene, p, {0, 0, 0});
      if (g.norm() < 0.5) break;  // degenerate gradient, reject
      p = p - g * d;
    }
    if (ok && box.contains(p)) pts.push_back(p);
  }
  if (static_cast<int>(pts.size()) < n) {
    throw std::runtime_error("surface point sampling failed to converge");
  }
  return pts;
}

SceneSdf sphere_scene() {
  return SceneSdf::sphere({0, 0, 0}, 0.5, {0.8, 0.35, 0.3});
}

SceneSdf csg_scene() {
  SceneSdf carved = SceneSdf::subtract(
      SceneSdf::box({-0.4, -0.1, 0.3}, {0.25, 0.25, 0.25}, {0.2, 0.4, 0.85}),
      SceneSdf::sphere({-0.4, 0.1, 0.45}, 0.24, {0.9, 0.9, 0.3}));
  SceneSdf rounded = SceneSdf::intersect(
      SceneSdf::sphere({0.4, 0.0, -0.3}, 0.3, {0.9, 0.55, 0.15}),
      SceneSdf::box({0.4, 0.0, -0.3}, {0.24, 0.24, 0.24}, {0.9, 0.55, 0.15}));
  SceneSdf ring = SceneSdf::torus({0.0, -0.35, 0.55}, 0.18, 0.07, {0.4, 0.8, 0.4});
  SceneSdf post = SceneSdf::cylinder({0.45, -0.2, 0.45}, 0.1, 0.25, {0.7, 0.3, 0.7});
  return SceneSdf::join(SceneSdf::join(carved, rounded), SceneSdf::join(ring, post));
}

SceneSdf shelf_scene() {
  const Vec3 gray{0.55, 0.55, 0.55};
  SceneSdf shelf = SceneSdf::box({0, -0.45, 0}, {0.55, 0.05, 0.55}, gray);
  shelf = SceneSdf::join(shelf, SceneSdf::box({-0.5, 0.05, 0}, {0.05, 0.55, 0.55}, gray));
  shelf = SceneSdf::join(shelf, SceneSdf::box({0.5, 0.05, 0}, {0.05, 0.55, 0.55}, gray));
  shelf = SceneSdf::join(shelf, SceneSdf::box({0, 0.05, -0.5}, {0.45, 0.55, 0.05}, gray));
  shelf = SceneSdf::join(shelf, SceneSdf::box({0, 0.05, 0.5}, {0.45, 0.55, 0.05}, gray));
  // Overhanging top slab covering the back half of the opening: together with
  // the front wall it hides the cylinder's top face below ~41° elevation.
  shelf = SceneSdf::join(shelf, SceneSdf::box({0, 0.55, -0.25}, {0.45, 0.05, 0.20}, gray));
  shelf = SceneSdf::join(
      shelf, SceneSdf::cylinder({0, -0.175, 0.2}, 0.2, 0.225, {0.15, 0.25, 0.85}));
  shelf = SceneSdf::join(
      shelf, SceneSdf::sphere({-0.78, -0.3, 0.62}, 0.18, {0.85, 0.2, 0.2}));
  shelf = SceneSdf::join(
      shelf, SceneSdf::box({0.74, -0.35, -0.5}, {0.16, 0.16, 0.16}, {0.2, 0.75, 0.25}));
  shelf = SceneSdf::join(
      shelf, SceneSdf::torus({-0.1, -0.35, -0.78}, 0.14, 0.06, {0.9, 0.8, 0.2}));
  return shelf;
}

SceneSdf scene_by_name(const std::string& name) {
  if (name == "sphere") return sphere_scene();
  if (name == "csg") return csg_scene();
  if (name == "shelf") return shelf_scene();
  throw std::runtime_error("unknown scene: " + name);
}

namespace {

const char* kind_name(int k) {
  static const char* names[] = {"sphere",       "box",   "torus", "cylinder",
                                "union", "intersection", "difference"};
  return names[k];
}

int kind_from_name(const std::string& s) {
  static const char* names[] = {"sphere",       "box",   "torus", "cylinder",
                                "union", "intersection", "difference"};
  for (int i = 0; i < 7; ++i) {
    if (s == names[i]) return i;
  }
  throw std::runtime_error("unknown CSG node kind: " + s);
}

}  // namespace

std::string SceneSdf::to_json() const {
  nlohmann::json doc;
  doc["root"] = root_;
  nlohmann::json arr = nlohmann::json::array();
  for (const Node& n : nodes_) {
    nlohmann::json j;
    j["kind"] = kind_name(static_cast<int>(n.kind));
    j["center"] = {n.center.x, n.center.y, n.center.z};
    j["params"] = {n.params.x, n.params.y, n.params.z};
    j["albedo"] = {n.albedo.x, n.albedo.y, n.albedo.z};
    j["left"] = n.left;
    j["right"] = n.right;
    arr.push_back(j);
  }
  doc["nodes"] = arr;
  return doc.dump(2);
}

SceneSdf SceneSdf::from_json_text(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  SceneSdf s;
  s.root_ = doc.at("root");
  for (const auto& j : doc.at("nodes")) {
    Node n;
    n.kind = static_cast<Kind>(kind_from_name(j.at("kind")));
    n.center = {j["center"][0], j["center"][1], j["center"][2]};
    n.params = {j["params"][0], j["params"][1], j["params"][2]};
    n.albedo = {j["albedo"][0], j["albedo"][1], j["albedo"][2]};
    n.left = j["left"];
    n.right = j["right"];
    s.nodes_.push_back(n);
  }
  if (s.root_ < -1 || s.root_ >= static_cast<int>(s.nodes_.size())) {
    throw std::runtime_error("scene json: root out of range");
  }
  return s;
}

void save_scene(const std::string& path, const SceneSdf& scene) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scene file: " + path);
  out << scene.to_json() << "\n";
}

SceneSdf load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scene file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return SceneSdf::from_json_text(ss.str());
}

}  // namespace sbv
