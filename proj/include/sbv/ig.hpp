#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbv/field.hpp"
#include "sbv/geometry.hpp"
#include "sbv/image.hpp"
#include "sbv/renderer.hpp"
#include "sbv/sbv_grid.hpp"

namespace sbv {

struct TraversalResult {
  std::vector<std::size_t> cells;  // face-adjacent, by ascending entry t
  std::vector<double> t_entry;
  std::vector<double> t_exit;
};

// Exact voxel walk (Amanatides–Woo) over the ray's [t_near, t_far] segment.
// Only voxels with a positive-length interior intersection are emitted.
// Tie rules, frozen for determinism: a start point exactly on a cell plane
// belongs to the lower cell; equal boundary distances step x before y before z.
TraversalResult traverse(const Ray& ray, int resolution,
                         const Aabb& bbox = scene_aabb());

struct IgReport {
  int view_id = -1;
  std::string strategy;
  double ig = 0.0;
  int width = 0, height = 0;
  // Per-pixel mean contribution for sampled pixels (0 elsewhere) and a mask
  // of rays that crossed at least one surface voxel.
  std::vector<double> pixel_map;
  std::vector<std::uint8_t> surface_mask;
};

// Surface-gated IG: per ray, restrict to traversed surface voxels when any
// exist (else use all traversed voxels); score = Σ color_entropy(u) over the
// kept voxels of all rays, divided by the total kept-voxel count.
// gated=false integrates over all traversed voxels (the no-surface ablation);
// first_surface_only truncates each gated ray at its first surface voxel.
IgReport ig_sbv(int view_id, const CameraPose& camera, const SbvGrid& grid,
                int pixel_stride, bool gated = true,
                bool first_surface_only = false);

// Occupancy-entropy IG over all traversed voxels.
IgReport ig_entropy(int view_id, const CameraPose& camera, const SbvGrid& grid,
                    int pixel_stride);

// Mean rendered ray variance B² over the sampled pixels.
IgReport ig_variance(int view_id, const CameraPose& camera, const FieldGrid& field,
                     const OccupancyGrid& occ, int pixel_stride, int n_samples,
                     bool square_weight_variance = true);

// (v−min)/(max−min) over this report's sampled pixels; all zeros when
// max == min.
Image ig_heatmap_intra(const IgReport& report);
// Fixed-bounds normalization, clamped to [0,1]; all zeros when gmax == gmin.
Image ig_heatmap_global(const IgReport& report, double gmin, double gmax);

}  // namespace sbv
