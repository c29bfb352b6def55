#include "sbv/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "sbv/errors.hpp"
#include "sbv/parallel.hpp"

namespace sbv {

namespace {

constexpr std::uint64_t kBatchTag = 0x62617463;   // per-iteration pixel draws
constexpr std::uint64_t kSampleTag = 0x736d706c;  // per-ray jitter streams

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

struct TermWeights {
  double color = 0.0;    // L1 color mean
  double eikonal = 0.0;  // λ on the (1/N)-scaled eikonal mean
  double rgb = 0.0;      // residual²/(2B²) mean
  double beta = 0.0;     // log(B²)/2 mean
};

// One ray's contribution: loss pieces plus two sparse gradient lists. The
// main list is fully scaled (the 1/M factors are folded in); the eikonal
// list stays raw because its 1/N scale is only known after every ray has
// been sampled.
struct RayGrad {
  double color_l1 = 0.0;
  double eik_sum = 0.0;
  double u_rgb = 0.0;
  double u_beta = 0.0;
  std::size_t n_samples = 0;
  std::vector<std::pair<std::uint32_t, double>> main, eik;
};

// Forward + hand-derived backward for a single ray. A miss / empty / short
// (<2 samples) ray renders as pure background: it still contributes loss
// values, but no gradient and no eikonal samples, mirroring the renderer.
RayGrad ray_loss(const Ray& ray, const Vec3& gt, const FieldGrid& field,
                 const OccupancyGrid& occ, const RayBatch& batch,
                 std::size_t ray_index, const TermWeights& tw,
                 bool square_variance, double beta2_floor, double inv_m) {
  RayGrad out;
  const double s = field.s_value();

  std::vector<double> ts;
  std::vector<Vec3> points;
  if (ray.t_far > ray.t_near) {
    Rng rng = stream(batch.sample_seed, kSampleTag, ray_index);
    try {
      RayTs rt = sample_ray_ts(ray, occ, batch.mode, batch.n_samples, rng,
                               field.bbox());
      ts = std::move(rt.ts);
      points = std::move(rt.points);
    } catch (const EmptyRay&) {
    }
  }

  const std::size_t n = ts.size();
  if (n < 2) {
    // Background: C̄ = white, B² floored with zero gradient.
    const Vec3 diff = Vec3{1, 1, 1} - gt;
    out.color_l1 = std::fabs(diff.x) + std::fabs(diff.y) + std::fabs(diff.z);
    const double res2 = diff.dot(diff);
    out.u_rgb = res2 / (2.0 * beta2_floor);
    out.u_beta = 0.5 * std::log(beta2_floor);
    return out;
  }
  out.n_samples = n;

  // --- forward --------------------------------------------------------
  std::vector<InterpStencil> st(n);
  std::vector<double> g(n), lb(n), beta2(n);
  std::vector<std::uint8_t> beta2_clamped(n);
  std::vector<Vec3> color(n), grad_g(n);
  std::vector<double> raw_rgb(3 * n);
  for (std::size_t j = 0; j < n; ++j) {
    st[j] = field.stencil(points[j]);
    g[j] = field.interp_sdf(st[j]);
    field.interp_raw_rgb(st[j], &raw_rgb[3 * j]);
    color[j] = {logistic(raw_rgb[3 * j]), logistic(raw_rgb[3 * j + 1]),
                logistic(raw_rgb[3 * j + 2])};
    lb[j] = field.interp_log_beta2(st[j]);
    const double b2 = std::exp(lb[j]);
    beta2_clamped[j] = b2 < kBeta2Floor;
    beta2[j] = std::fmax(b2, kBeta2Floor);
    Vec3 gg{0, 0, 0};
    for (int v = 0; v < 8; ++v) {
      const double sdf_v = field.params()[st[j].vertex[v] * FieldGrid::kStride];
      gg += st[j].dw[v] * sdf_v;
    }
    grad_g[j] = gg;
    const double nrm = gg.norm();
    out.eik_sum += (nrm - 1.0) * (nrm - 1.0);
  }

  const std::size_t na = n - 1;
  std::vector<double> phi(n), alpha(na), t_prefix(n), w(na);
  std::vector<std::uint8_t> alpha_pass(na);
  for (std::size_t j = 0; j < n; ++j) phi[j] = logistic(s * g[j]);
  t_prefix[0] = 1.0;
  for (std::size_t j = 0; j < na; ++j) {
    double a = 0.0;
    bool pass = false;
    if (phi[j] >= 1e-300) {
      const double raw = (phi[j] - phi[j + 1]) / phi[j];
      a = std::fmax(raw, 0.0);
      pass = raw > 0.0;
    }
    alpha[j] = a;
    alpha_pass[j] = pass;
    w[j] = a * t_prefix[j];
    t_prefix[j + 1] = t_prefix[j] * (1.0 - a);
  }
  const double transmittance = t_prefix[n - 1];

  Vec3 c_hat{transmittance, transmittance, transmittance};  // white background
  double b2_hat = 0.0;
  for (std::size_t j = 0; j < na; ++j) {
    c_hat += color[j] * w[j];
    b2_hat += (square_variance ? w[j] * w[j] : w[j]) * beta2[j];
  }
  if (!(b2_hat >= 0.0) || !std::isfinite(b2_hat))
    throw DegenerateVariance("rendered variance " + std::to_string(b2_hat) +
                             " is negative or non-finite");
  const bool b2_clamped = b2_hat < beta2_floor;
  const double b2_eff = std::fmax(b2_hat, beta2_floor);

  const Vec3 diff = c_hat - gt;
  out.color_l1 = std::fabs(diff.x) + std::fabs(diff.y) + std::fabs(diff.z);
  const double res2 = diff.dot(diff);
  out.u_rgb = res2 / (2.0 * b2_eff);
  out.u_beta = 0.5 * std::log(b2_eff);

  // --- backward -------------------------------------------------------
  // d loss / d C̄ and d loss / d B², with the 1/M ray averages folded in.
  Vec3 d_chat{0, 0, 0};
  for (int ch = 0; ch < 3; ++ch)
    d_chat[ch] = inv_m * (tw.color * sign(diff[ch]) + tw.rgb * diff[ch] / b2_eff);
  double d_b2 = 0.0;
  if (!b2_clamped)
    d_b2 = inv_m * (-tw.rgb * res2 / (2.0 * b2_eff * b2_eff) +
                    tw.beta * 0.5 / b2_eff);

  out.main.reserve(40 * n);
  out.eik.reserve(8 * n);

  std::vector<double> d_w(na), d_phi(n, 0.0);
  for (std::size_t j = 0; j < na; ++j) {
    d_w[j] = d_chat.dot(color[j]) +
             d_b2 * (square_variance ? 2.0 * w[j] * beta2[j] : beta2[j]);

    // color: d/d raw = c(1−c) · w_j · dC̄, spread over the stencil
    for (int ch = 0; ch < 3; ++ch) {
      const double d_raw =
          d_chat[ch] * w[j] * color[j][ch] * (1.0 - color[j][ch]);
      if (d_raw != 0.0)
        for (int v = 0; v < 8; ++v)
          out.main.emplace_back(
              static_cast<std::uint32_t>(st[j].vertex[v] * FieldGrid::kStride +
                                         1 + ch),
              d_raw * st[j].w[v]);
    }
    // variance: d/d log β² = β² unless the per-sample floor clamped it
    const double d_beta2 = d_b2 * (square_variance ? w[j] * w[j] : w[j]);
    if (d_beta2 != 0.0 && !beta2_clamped[j])
      for (int v = 0; v < 8; ++v)
        out.main.emplace_back(
            static_cast<std::uint32_t>(st[j].vertex[v] * FieldGrid::kStride + 4),
            d_beta2 * beta2[j] * st[j].w[v]);
  }

  // weights → alphas via suffix sums: ∂ℓ/∂α_j = ∂ℓ/∂ω_j·T_j − S_j/(1−α_j)
  // with S_j = Σ_{i>j} ∂ℓ/∂ω_i·ω_i + ∂ℓ/∂T·T.
  const double d_t = d_chat.x + d_chat.y + d_chat.z;  // white background
  double suffix = d_t * transmittance;
  for (std::size_t jj = na; jj-- > 0;) {
    const double d_alpha =
        d_w[jj] * t_prefix[jj] - suffix / std::fmax(1.0 - alpha[jj], 1e-12);
    suffix += d_w[jj] * w[jj];
    if (alpha_pass[jj]) {
      d_phi[jj] += d_alpha * phi[jj + 1] / (phi[jj] * phi[jj]);
      d_phi[jj + 1] -= d_alpha / phi[jj];
    }
  }

  // Φ = σ(s·g): d/dg = s·Φ(1−Φ); s = exp(θ) makes d/dθ = g·Φ(1−Φ)·s.
  double d_theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (d_phi[j] != 0.0) {
      const double sig = phi[j] * (1.0 - phi[j]);
      const double d_g = d_phi[j] * s * sig;
      d_theta += d_phi[j] * g[j] * sig * s;
      for (int v = 0; v < 8; ++v)
        out.main.emplace_back(
            static_cast<std::uint32_t>(st[j].vertex[v] * FieldGrid::kStride),
            d_g * st[j].w[v]);
    }
    // eikonal: d(‖∇g‖−1)²/d sdf_v = 2(‖∇g‖−1)/‖∇g‖ · (∇g · ∇w_v), raw scale
    const double nrm = grad_g[j].norm();
    if (nrm > 1e-12) {
      const double coef = 2.0 * (nrm - 1.0) / nrm;
      for (int v = 0; v < 8; ++v)
        out.eik.emplace_back(
            static_cast<std::uint32_t>(st[j].vertex[v] * FieldGrid::kStride),
            coef * grad_g[j].dot(st[j].dw[v]));
    }
  }
  if (d_theta != 0.0)
    out.main.emplace_back(static_cast<std::uint32_t>(field.s_param_index()),
                          d_theta);
  return out;
}

LossGrad batch_loss(const RayBatch& batch, const FieldGrid& field,
                    const OccupancyGrid& occ, const TermWeights& tw,
                    bool square_variance, double beta_min) {
  if (batch.rays.empty())
    throw std::invalid_argument("loss needs at least one ray");
  if (batch.rays.size() != batch.gt.size())
    throw std::invalid_argument("ray/gt count mismatch");

  const std::size_t m = batch.rays.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  const double beta2_floor = beta_min * beta_min;

  std::vector<RayGrad> per_ray(m);
  parallel_for(m, 1, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r)
      per_ray[r] = ray_loss(batch.rays[r], batch.gt[r], field, occ, batch, r,
                            tw, square_variance, beta2_floor, inv_m);
  });

  LossGrad out;
  out.grad.assign(field.param_count(), 0.0);
  for (const RayGrad& rg : per_ray) {
    out.color_term += rg.color_l1;
    out.u_rgb_term += rg.u_rgb;
    out.u_beta_term += rg.u_beta;
    out.eikonal_term += rg.eik_sum;
    out.total_samples += rg.n_samples;
    for (const auto& [idx, v] : rg.main) out.grad[idx] += v;
  }
  out.color_term *= inv_m;
  out.u_rgb_term *= inv_m;
  out.u_beta_term *= inv_m;
  out.eikonal_term =
      out.total_samples > 0 ? out.eikonal_term / out.total_samples : 0.0;
  if (out.total_samples > 0) {
    const double eik_scale = tw.eikonal / static_cast<double>(out.total_samples);
    for (const RayGrad& rg : per_ray)
      for (const auto& [idx, v] : rg.eik) out.grad[idx] += eik_scale * v;
  }
  out.loss = tw.color * out.color_term + tw.eikonal * out.eikonal_term +
             tw.rgb * out.u_rgb_term + tw.beta * out.u_beta_term;
  return out;
}

}  // namespace

LossGrad color_eikonal_loss(const RayBatch& batch, const FieldGrid& field,
                            const OccupancyGrid& occ, double eikonal_weight) {
  TermWeights tw;
  tw.color = 1.0;
  tw.eikonal = eikonal_weight;
  return batch_loss(batch, field, occ, tw, true, 0.001);
}

LossGrad uncertainty_loss(const RayBatch& batch, const FieldGrid& field,
                          const OccupancyGrid& occ, double rgb_weight,
                          double beta_weight, bool square_weight_variance,
                          double beta_min) {
  TermWeights tw;
  tw.rgb = rgb_weight;
  tw.beta = beta_weight;
  return batch_loss(batch, field, occ, tw, square_weight_variance, beta_min);
}

TrainState make_train_state(const FieldGrid& field, std::uint64_t seed) {
  TrainState st;
  st.seed = seed;
  st.m.assign(field.param_count(), 0.0);
  st.v.assign(field.param_count(), 0.0);
  return st;
}

RayBatch sample_batch(const Dataset& dataset, const Aabb& bbox,
                      const TrainConfig& config, SampleMode mode,
                      std::uint64_t seed, int iteration) {
  const std::vector<int>& train = dataset.train_ids();
  if (train.empty())
    throw std::invalid_argument("train split is empty");

  RayBatch batch;
  batch.mode = mode;
  batch.n_samples = config.n_samples;
  batch.sample_seed =
      mix64(seed ^ (kSampleTag * 0x9e3779b97f4a7c15ull) ^
            static_cast<std::uint64_t>(iteration));
  Rng rng = stream(seed, kBatchTag, static_cast<std::uint64_t>(iteration));
  batch.rays.reserve(config.batch_size);
  batch.gt.reserve(config.batch_size);
  for (int k = 0; k < config.batch_size; ++k) {
    const int id = train[rng.below(train.size())];
    const CameraPose& pose = dataset.pose(id);
    const int px = static_cast<int>(rng.below(pose.width));
    const int py = static_cast<int>(rng.below(pose.height));
    const Image& img = dataset.gt_image(id);
    batch.gt.push_back({img.at(px, py, 0), img.at(px, py, 1), img.at(px, py, 2)});
    Ray ray;
    try {
      ray = pixel_ray(pose, px, py, bbox);
    } catch (const RayMissesScene&) {
      ray.t_near = ray.t_far = 0.0;  // background marker
    }
    batch.rays.push_back(ray);
  }
  return batch;
}

void train_step(TrainState& state, const TrainConfig& config,
                const Dataset& dataset, FieldGrid& field,
                const OccupancyGrid& occ) {
  const auto t_start = std::chrono::steady_clock::now();
  const int t = state.iteration + 1;
  const bool warmup =
      (t - state.warmup_anchor) <= config.sample_warmup_iters;

  const RayBatch batch =
      sample_batch(dataset, field.bbox(), config,
                   warmup ? SampleMode::Warmup : SampleMode::Grid, state.seed, t);

  TermWeights tw;
  tw.color = 1.0;
  tw.eikonal = config.eikonal_weight;
  tw.rgb = config.uncertainty_rgb_weight;
  tw.beta = config.uncertainty_beta_weight;
  const LossGrad lg = batch_loss(batch, field, occ, tw,
                                 config.square_weight_variance, config.beta_min);
  if (!std::isfinite(lg.loss))
    throw NonFiniteLoss("loss diverged at iteration " + std::to_string(t) +
                        ": " + std::to_string(lg.loss));

  const double lr =
      config.learning_rate *
      std::min(1.0, static_cast<double>(t) /
                        std::max(1, config.lr_warmup_iters));
  const double bc1 = 1.0 - std::pow(0.9, t);
  const double bc2 = 1.0 - std::pow(0.999, t);
  double* params = field.params();
  double* m = state.m.data();
  double* v = state.v.data();
  const double* grad = lg.grad.data();
  parallel_for(field.param_count(), 4096, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const double gi = grad[i];
      m[i] = 0.9 * m[i] + 0.1 * gi;
      v[i] = 0.999 * v[i] + 0.001 * gi * gi;
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      params[i] -= lr * m_hat / (std::sqrt(v_hat) + 1e-8);
    }
  });

  state.iteration = t;
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t_start)
          .count();
  const double l_s = lg.color_term + config.eikonal_weight * lg.eikonal_term;
  const double l_u = config.uncertainty_rgb_weight * lg.u_rgb_term +
                     config.uncertainty_beta_weight * lg.u_beta_term;
  state.history.push_back(
      {t, l_s, l_u, lr, field.s_value(), wall_ms});
}

void occupancy_update(OccupancyGrid& occ, const FieldGrid& field,
                      const TrainState& state, const TrainConfig& config) {
  const int t = state.iteration + 1;  // the step about to run
  if (config.occ_update_period <= 0 || t % config.occ_update_period != 0)
    return;
  const bool warmup =
      (t - state.warmup_anchor) <= config.sample_warmup_iters;
  if (warmup)
    occ.refresh_full(field, config.tau_occ, state.seed);
  else
    occ.refresh_partial(field, config.tau_occ, state.seed,
                        config.n_occupied_refresh, config.n_random_refresh);
}

}  // namespace sbv
