#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbv/field.hpp"
#include "sbv/geometry.hpp"
#include "sbv/renderer.hpp"
#include "sbv/rng.hpp"

namespace sbv {

// Gaussian color entropy: ½·ln(2πβ²) + ½. Throws NonPositiveVariance.
double color_entropy(double beta2);

// Binary occupancy entropy: −p·ln p − (1−p)·ln(1−p), with 0·ln 0 := 0.
double occupancy_entropy(double p);

// Per-voxel rendering uncertainty, surface confidence, and α-substituted
// occupancy probability. Voxels align with the field's bounding box.
class SbvGrid {
 public:
  explicit SbvGrid(int resolution, const Aabb& bbox = scene_aabb());

  int resolution() const { return r_; }
  std::size_t voxel_count() const { return u_.size(); }
  double cell_size() const { return cell_; }
  const Aabb& bbox() const { return bbox_; }

  double uncertainty(std::size_t v) const { return u_[v]; }
  double surface_conf(std::size_t v) const { return conf_[v]; }
  double occ_alpha(std::size_t v) const { return p_[v]; }
  bool is_surface_voxel(std::size_t v) const { return conf_[v] > 0.8; }

  std::size_t voxel_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * r_ + iy) * r_ + iz;
  }
  Vec3 voxel_center(std::size_t v) const;

  // conf ← max(conf·0.95, detection)
  void update_surface_conf(std::size_t v, int detection);
  // u ← min(u·1.05, predicted β²), clamped to u_max = 1
  void update_uncertainty(std::size_t v, double predicted_beta2);

  // Three-point probe: center b = voxel center + per-axis jitter of
  // ±0.4·cell, endpoints a,c = b ∓ (h/2)·dir with h = max(1/s, cell), all
  // clamped to the bounding box. Detects a surface iff g(a)·g(c) < 0.
  int detect_surface(std::size_t v, const FieldGrid& field, const Vec3& probe_dir,
                     Rng& rng) const;

  // One sweep over occupied voxels plus a 5% random refresh set. Per voxel:
  // probe direction from a uniformly drawn train camera toward the voxel,
  // surface detection → confidence update, β² at the jittered probe center →
  // uncertainty update, and a fresh α-estimate → occupancy probability.
  // Bit-identical at any thread count (per-voxel rng streams).
  void sweep_update(const FieldGrid& field,
                    const std::vector<CameraPose>& train_cameras,
                    const OccupancyGrid& occ, std::uint64_t seed);

  std::uint64_t sweep_count() const { return sweep_counter_; }

  // Direct state access for tests and tooling.
  void set_state(std::size_t v, double u, double conf, double p);
  const std::vector<double>& u_values() const { return u_; }
  const std::vector<double>& conf_values() const { return conf_; }
  const std::vector<double>& p_values() const { return p_; }

 private:
  int probe(std::size_t v, const FieldGrid& field, const Vec3& probe_dir,
            Rng& rng, Vec3* b_out) const;

  int r_;
  Aabb bbox_;
  double cell_;
  std::vector<double> u_;     // init 1.0
  std::vector<double> conf_;  // init 0.0
  std::vector<double> p_;     // init 0.5
  std::uint64_t sweep_counter_ = 0;
};

// Snapshot: little-endian "SBVG", R u32, then u/conf/p arrays as f32.
void save_sbv(const std::string& path, const SbvGrid& grid);
SbvGrid load_sbv(const std::string& path);  // throws MissingCheckpoint

}  // namespace sbv
