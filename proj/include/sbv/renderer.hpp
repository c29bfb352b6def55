#pragma once

#include <cstdint>
#include <vector>

#include "sbv/field.hpp"
#include "sbv/geometry.hpp"
#include "sbv/image.hpp"
#include "sbv/rng.hpp"

namespace sbv {

enum class SampleMode { Warmup, Grid };

// Binary empty-space mask over the field's bounding box. Each cell caches an
// opacity estimate: the NeuS alpha a virtual segment of one cell diagonal
// would pick up at the cell's (jittered) center.
class OccupancyGrid {
 public:
  explicit OccupancyGrid(int resolution, const Aabb& bbox = scene_aabb());

  int resolution() const { return r_; }
  std::size_t cell_count() const { return flags_.size(); }
  double cell_size() const { return cell_; }
  const Aabb& bbox() const { return bbox_; }

  bool occupied(std::size_t cell) const { return flags_[cell] != 0; }
  bool occupied_at(const Vec3& p) const;
  double cached_alpha(std::size_t cell) const { return alpha_[cell]; }
  std::size_t cell_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * r_ + iy) * r_ + iz;
  }
  Vec3 cell_center(std::size_t cell) const;

  void set_all(bool occupied);

  // Re-evaluates every cell (sample-warmup behavior).
  void refresh_full(const FieldGrid& field, double tau_occ, std::uint64_t seed);
  // Re-evaluates n_occupied currently-occupied cells (drawn with replacement)
  // plus n_random uniform cells.
  void refresh_partial(const FieldGrid& field, double tau_occ, std::uint64_t seed,
                       int n_occupied, int n_random);

  // Opacity estimate for one cell of `field` at point p: alpha of a virtual
  // cell-diagonal segment centered there. Shared with the SBV grid's
  // occupancy-probability update.
  static double alpha_estimate(const FieldGrid& field, const Vec3& p,
                               double diagonal);

 private:
  void refresh_cell(const FieldGrid& field, std::size_t cell, double tau_occ,
                    std::uint64_t seed);

  int r_;
  Aabb bbox_;
  double cell_;
  std::vector<std::uint8_t> flags_;
  std::vector<double> alpha_;
  std::uint64_t update_counter_ = 0;
};

struct RayTs {
  std::vector<double> ts;  // ascending, in [t_near, t_far]
  std::vector<Vec3> points;
};

struct RaySamples {
  std::vector<double> ts;          // strictly ascending, in [t_near, t_far]
  std::vector<Vec3> points;
  std::vector<FieldSample> samples;
};

// Sample positions only (no field queries); the Grid path consults just the
// occupancy mask, so gradient code can reuse these ts while the field moves.
RayTs sample_ray_ts(const Ray& ray, const OccupancyGrid& occ, SampleMode mode,
                    int n_warmup, Rng& rng, const Aabb& bbox = scene_aabb());

// Warmup: n stratified-uniform jittered samples over [t_near, t_far].
// Grid: midpoints of the n fixed strata, skipping unoccupied cells
// (deterministic — no rng draws). Throws EmptyRay if everything is skipped.
RaySamples sample_ray(const Ray& ray, const FieldGrid& field,
                      const OccupancyGrid& occ, SampleMode mode, int n_warmup,
                      Rng& rng);

// Discrete opacity per consecutive sample pair:
// α_j = max((Φ_s(g_j) − Φ_s(g_{j+1})) / Φ_s(g_j), 0), Φ_s(x) = 1/(1+e^{−sx}).
std::vector<double> alphas(const std::vector<double>& g_values, double s);

struct WeightsResult {
  std::vector<double> w;  // ω_i = α_i Π_{j<i} (1−α_j)
  double transmittance;   // T = Π (1−α_j); Σω + T = 1
};
WeightsResult weights(const std::vector<double>& alpha);

struct RenderResult {
  Vec3 c_hat{1, 1, 1};   // Σ ω c̄ + T·white
  double b2_hat = 0.0;   // Σ ω² β² by default (config: ω weighting)
  std::vector<double> w;
  double transmittance = 1.0;
};

// Interval i takes sample i's color/variance (front endpoint). Rays where
// sampling throws EmptyRay come back as pure background with B² = 0.
RenderResult render_ray(const Ray& ray, const FieldGrid& field,
                        const OccupancyGrid& occ, SampleMode mode, int n_warmup,
                        Rng& rng, bool square_weight_variance = true);

struct RenderedImage {
  Image color;
  std::vector<double> variance;  // per pixel B²
};

// Per-pixel render_ray in grid mode (deterministic). Pixels whose rays miss
// the scene box render as background.
RenderedImage render_image(const CameraPose& camera, const FieldGrid& field,
                           const OccupancyGrid& occ, int n_warmup,
                           bool square_weight_variance = true);

}  // namespace sbv
