#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbv/geometry.hpp"
#include "sbv/image.hpp"

namespace sbv {

struct SdfHit {
  double d = 0.0;
  Vec3 albedo;
};

// Analytic CSG signed-distance scene. Stored as a flat node array so the tree
// has value semantics and serializes directly.
class SceneSdf {
 public:
  static SceneSdf sphere(const Vec3& center, double radius, const Vec3& albedo);
  static SceneSdf box(const Vec3& center, const Vec3& half, const Vec3& albedo);
  static SceneSdf torus(const Vec3& center, double major, double minor,
                        const Vec3& albedo);
  // Capped cylinder, axis along y.
  static SceneSdf cylinder(const Vec3& center, double radius, double half_height,
                           const Vec3& albedo);
  static SceneSdf join(SceneSdf a, SceneSdf b);       // union: min
  static SceneSdf intersect(SceneSdf a, SceneSdf b);  // max
  static SceneSdf subtract(SceneSdf a, SceneSdf b);   // max(a, −b)

  bool empty() const { return nodes_.empty(); }

  // Distance plus the albedo of the primitive attaining the CSG extremum.
  SdfHit eval(const Vec3& x) const;

  std::string to_json() const;
  static SceneSdf from_json_text(const std::string& text);

 private:
  enum class Kind : int {
    Sphere = 0,
    Box,
    Torus,
    Cylinder,
    Union,
    Intersection,
    Difference
  };
  struct Node {
    Kind kind;
    Vec3 center;
    Vec3 params;  // primitive-specific: half extents / radii
    Vec3 albedo;
    int left = -1;
    int right = -1;
  };

  SdfHit eval_node(int idx, const Vec3& x) const;
  static SceneSdf combine(Kind op, SceneSdf a, SceneSdf b);

  std::vector<Node> nodes_;
  int root_ = -1;
};

struct SurfaceHit {
  double t;
  Vec3 point;
  Vec3 albedo;
};

// Standard sphere tracing: hit when d < 1e-4, at most 256 steps, miss past
// ray.t_far.
std::optional<SurfaceHit> sphere_trace(const SceneSdf& scene, const Ray& ray);

struct Light {
  Vec3 dir;  // unit, surface-to-light
  double intensity;
};

// Two fixed directional lights plus 0.25 ambient; chosen so every surface
// orientation receives some light and color stays view-independent.
const std::vector<Light>& default_lights();

// Lambertian ground-truth render: albedo · (0.25 + Σ max(0, n̂·l̂)·intensity),
// clamped, white background, normals from central-difference SDF gradients.
Image render_gt(const SceneSdf& scene, const CameraPose& camera,
                const std::vector<Light>& lights = default_lights());

// n points on the zero level set: random interior starts projected along the
// SDF gradient until |d| < 1e-5.
std::vector<Vec3> gt_surface_points(const SceneSdf& scene, int n,
                                    std::uint64_t seed);

// Built-in scenes.
SceneSdf sphere_scene();  // single matte sphere, radius 0.5
SceneSdf csg_scene();     // union/difference/intersection showcase
// Open-top shelf with an overhanging slab; the blue cylinder's top face is
// visible only from elevations above ~41°.
SceneSdf shelf_scene();
SceneSdf scene_by_name(const std::string& name);

void save_scene(const std::string& path, const SceneSdf& scene);
SceneSdf load_scene(const std::string& path);

}  // namespace sbv
