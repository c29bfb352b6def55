#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbv/geometry.hpp"

namespace sbv {

// Floors from the architecture table: β ≥ 0.001, i.e. β² ≥ 1e-6.
constexpr double kBeta2Floor = 1e-6;

struct FieldSample {
  double g = 0.0;       // signed distance
  Vec3 grad_g;          // spatial gradient of the interpolated g
  Vec3 c_mean;          // logistic-squashed color in [0,1]
  double beta2 = 1.0;   // color variance, floored
};

// The 8-vertex interpolation stencil at a point: linear vertex ids, trilinear
// weights, and each weight's spatial gradient. The training backward pass
// reuses it to push ray gradients onto vertex parameters.
struct InterpStencil {
  std::size_t vertex[8];
  double w[8];
  Vec3 dw[8];
};

// Learnable dense voxel-vertex field: per vertex [sdf, r, g, b, log_beta2]
// (stride 5), plus one trailing scalar inv_std_param with s = exp(·).
// Color is stored pre-logistic and variance as a log so both stay
// unconstrained under gradient steps.
class FieldGrid {
 public:
  static constexpr int kStride = 5;

  explicit FieldGrid(int resolution, const Aabb& bbox = scene_aabb());

  int resolution() const { return r_; }
  const Aabb& bbox() const { return bbox_; }
  double cell_size() const { return cell_; }

  std::size_t vertex_count() const { return nv_; }
  std::size_t param_count() const { return params_.size(); }  // 5·(R+1)³ + 1
  double* params() { return params_.data(); }
  const double* params() const { return params_.data(); }

  std::size_t vertex_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * (r_ + 1) + iy) * (r_ + 1) + iz;
  }
  Vec3 vertex_position(int ix, int iy, int iz) const;

  double s_value() const;
  std::size_t s_param_index() const { return params_.size() - 1; }

  InterpStencil stencil(const Vec3& x) const;  // throws OutOfBounds
  FieldSample query(const Vec3& x) const;      // throws OutOfBounds

  // Raw (pre-squash) interpolants at a stencil; used by the backward pass.
  double interp_sdf(const InterpStencil& st) const;
  void interp_raw_rgb(const InterpStencil& st, double out[3]) const;
  double interp_log_beta2(const InterpStencil& st) const;

  // Geometric init: exact sphere SDF at vertices, constant color/variance.
  void init_sphere(double radius, const Vec3& center, const Vec3& base_color,
                   double beta2_init = 1.0, double s_init = 20.0);

 private:
  int r_;
  Aabb bbox_;
  double cell_;
  std::size_t nv_;
  std::vector<double> params_;
};

// Checkpoint: little-endian "SBVF", version u32, R u32, raw f64 parameters.
// Round trips are bit-exact.
void save_field(const std::string& path, const FieldGrid& field);
FieldGrid load_field(const std::string& path);  // throws MissingCheckpoint

}  // namespace sbv
