#pragma once

#include <cstdint>
#include <vector>

#include "sbv/dataset.hpp"
#include "sbv/field.hpp"
#include "sbv/geometry.hpp"
#include "sbv/renderer.hpp"
#include "sbv/rng.hpp"

namespace sbv {

struct TrainConfig {
  double learning_rate = 5e-4;
  double eikonal_weight = 0.1;           // λ in L_s
  double uncertainty_rgb_weight = 0.001;  // on the residual²/(2B²) term
  double uncertainty_beta_weight = 0.01;  // on the log(B²)/2 term
  double beta_min = 0.001;                // variance floor is beta_min²
  int batch_size = 512;                   // rays per step
  int n_samples = 128;                    // strata per ray
  int lr_warmup_iters = 100;
  int sample_warmup_iters = 100;  // stratified-uniform window after selection
  int occ_update_period = 16;
  int n_occupied_refresh = 2048;  // occupied cells per partial update
  int n_random_refresh = 2048;    // random cells per partial update
  double tau_occ = 0.01;
  bool square_weight_variance = true;  // B² = Σω²β² (else Σωβ²)
  int total_iters = 4000;
  int sweep_period = 50;  // SBV grid sweep cadence
  std::vector<int> selection_schedule{200, 400, 600,
                                      800};  // selection iterations
};

struct LossRow {
  int iteration = 0;
  double l_s = 0, l_u = 0, lr = 0, s = 0, wall_ms = 0;
};

struct TrainState {
  std::uint64_t seed = 0;
  int iteration = 0;       // completed steps (1-based once running)
  int warmup_anchor = 0;   // iteration of the most recent selection
  std::vector<double> m, v;  // Adam moments, one per field parameter
  std::vector<LossRow> history;
};

TrainState make_train_state(const FieldGrid& field, std::uint64_t seed);

// A training batch. Rays with t_far <= t_near mark pixels whose rays miss
// the scene box entirely; they render as pure background (no gradients) but
// still count toward the ray average.
struct RayBatch {
  std::vector<Ray> rays;
  std::vector<Vec3> gt;
  SampleMode mode = SampleMode::Warmup;
  int n_samples = 128;
  std::uint64_t sample_seed = 0;  // seeds the per-ray jitter streams
};

struct LossGrad {
  double loss = 0.0;
  double color_term = 0.0;    // (1/M) Σ ‖C̄−C‖₁
  double eikonal_term = 0.0;  // (1/N) Σ (‖∇g‖−1)², pre-λ
  double u_rgb_term = 0.0;    // (1/M) Σ res²/(2B²)
  double u_beta_term = 0.0;   // (1/M) Σ log(B²)/2
  std::size_t total_samples = 0;  // N
  std::vector<double> grad;       // per field parameter, s last
};

// L_s: mean L1 color error plus eikonal_weight × mean squared (‖∇g‖−1).
// Gradients for every field parameter (including the s parameter) come from
// the hand-derived chain rule through interpolation, alphas, and weights.
LossGrad color_eikonal_loss(const RayBatch& batch, const FieldGrid& field,
                            const OccupancyGrid& occ,
                            double eikonal_weight = 0.1);

// L_u: Gaussian negative log-likelihood of the rendered color, split into a
// residual term and a log-variance term with separate weights ((1,1) is the
// plain NLL). B² below the beta_min² floor is clamped with zero gradient;
// negative or non-finite B² throws DegenerateVariance (that is a bug, not a
// reachable input state).
LossGrad uncertainty_loss(const RayBatch& batch, const FieldGrid& field,
                          const OccupancyGrid& occ, double rgb_weight = 1.0,
                          double beta_weight = 1.0,
                          bool square_weight_variance = true,
                          double beta_min = 0.001);

// M random (image, pixel) draws over the train split.
RayBatch sample_batch(const Dataset& dataset, const Aabb& bbox,
                      const TrainConfig& config, SampleMode mode,
                      std::uint64_t seed, int iteration);

// One optimization step: batch → combined loss L_s + w₁·U₁ + w₂·U₂ → Adam
// (β₁=0.9, β₂=0.999, ε=1e-8, bias-corrected) with linear lr warm-up.
// Deterministic at any thread count. Throws NonFiniteLoss.
void train_step(TrainState& state, const TrainConfig& config,
                const Dataset& dataset, FieldGrid& field,
                const OccupancyGrid& occ);

// Occupancy maintenance for the iteration about to run (iteration+1): every
// occ_update_period steps, a full refresh inside the sample-warmup window and
// an (n_o occupied + n_r random)-cell partial refresh after it.
void occupancy_update(OccupancyGrid& occ, const FieldGrid& field,
                      const TrainState& state, const TrainConfig& config);

}  // namespace sbv
