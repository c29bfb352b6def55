#include "sbv/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sbv/errors.hpp"
#include "sbv/parallel.hpp"

namespace sbv {

namespace {

constexpr std::uint64_t kOccCellTag = 0x6f636375;  // per-cell jitter streams
constexpr std::uint64_t kOccPickTag = 0x6f636b70;  // partial-update cell picks

double logistic_s(double x, double s) { return 1.0 / (1.0 + std::exp(-s * x)); }

}  // namespace

OccupancyGrid::OccupancyGrid(int resolution, const Aabb& bbox)
    : r_(resolution),
      bbox_(bbox),
      cell_((bbox.max.x - bbox.min.x) / resolution),
      flags_(static_cast<std::size_t>(resolution) * resolution * resolution, 1),
      alpha_(flags_.size(), 1.0) {}

Vec3 OccupancyGrid::cell_center(std::size_t cell) const {
  const std::size_t r = static_cast<std::size_t>(r_);
  const int iz = static_cast<int>(cell % r);
  const int iy = static_cast<int>((cell / r) % r);
  const int ix = static_cast<int>(cell / (r * r));
  return {bbox_.min.x + cell_ * (ix + 0.5), bbox_.min.y + cell_ * (iy + 0.5),
          bbox_.min.z + cell_ * (iz + 0.5)};
}

bool OccupancyGrid::occupied_at(const Vec3& p) const {
  if (!bbox_.contains(p)) return false;
  int i[3];
  for (int a = 0; a < 3; ++a) {
    int ia = static_cast<int>(std::floor((p[a] - bbox_.min[a]) / cell_));
    if (ia > r_ - 1) ia = r_ - 1;
    if (ia < 0) ia = 0;
    i[a] = ia;
  }
  return occupied(cell_index(i[0], i[1], i[2]));
}

void OccupancyGrid::set_all(bool occupied) {
  std::fill(flags_.begin(), flags_.end(), occupied ? 1 : 0);
  std::fill(alpha_.begin(), alpha_.end(), occupied ? 1.0 : 0.0);
}

double OccupancyGrid::alpha_estimate(const FieldGrid& field, const Vec3& p,
                                     double diagonal) {
  const double g = field.query(field.bbox().clamp(p)).g;
  const double s = field.s_value();
  const double front = logistic_s(g + 0.5 * diagonal, s);
  if (front < 1e-300) return 0.0;
  const double back = logistic_s(g - 0.5 * diagonal, s);
  return std::fmax((front - back) / front, 0.0);
}

void OccupancyGrid::refresh_cell(const FieldGrid& field, std::size_t cell,
                                 double tau_occ, std::uint64_t seed) {
  Rng rng = stream(seed, kOccCellTag, update_counter_, cell);
  const Vec3 center = cell_center(cell);
  const Vec3 p{center.x + cell_ * rng.uniform(-0.5, 0.5),
               center.y + cell_ * rng.uniform(-0.5, 0.5),
               center.z + cell_ * rng.uniform(-0.5, 0.5)};
  const double a = alpha_estimate(field, p, cell_ * std::sqrt(3.0));
  alpha_[cell] = a;
  flags_[cell] = a >= tau_occ ? 1 : 0;
}

void OccupancyGrid::refresh_full(const FieldGrid& field, double tau_occ,
                                 std::uint64_t seed) {
  ++update_counter_;
  parallel_for(flags_.size(), 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t cell = b; cell < e; ++cell) {
      refresh_cell(field, cell, tau_occ, seed);
    }
  });
}

void OccupancyGrid::refresh_partial(const FieldGrid& field, double tau_occ,
                                    std::uint64_t seed, int n_occupied,
                                    int n_random) {
  ++update_counter_;
  std::vector<std::size_t> occupied_cells;
  occupied_cells.reserve(flags_.size() / 8);
  for (std::size_t c = 0; c < flags_.size(); ++c) {
    if (flags_[c]) occupied_cells.push_back(c);
  }
  Rng pick = stream(seed, kOccPickTag, update_counter_);
  std::vector<std::size_t> targets;
  targets.reserve(static_cast<std::size_t>(n_occupied + n_random));
  if (!occupied_cells.empty()) {
    for (int i = 0; i < n_occupied; ++i) {
      targets.push_back(occupied_cells[pick.below(occupied_cells.size())]);
    }
  }
  for (int i = 0; i < n_random; ++i) targets.push_back(pick.below(flags_.size()));
  // Duplicates are harmless: a cell's refresh is idempotent per update round.
  for (const std::size_t cell : targets) {
    refresh_cell(field, cell, tau_occ, seed);
  }
}

RayTs sample_ray_ts(const Ray& ray, const OccupancyGrid& occ, SampleMode mode,
                    int n_warmup, Rng& rng, const Aabb& bbox) {
  RayTs out;
  const double dt = (ray.t_far - ray.t_near) / n_warmup;
  out.ts.reserve(static_cast<std::size_t>(n_warmup));
  if (mode == SampleMode::Warmup) {
    for (int k = 0; k < n_warmup; ++k) {
      out.ts.push_back(ray.t_near + (k + rng.uniform()) * dt);
    }
  } else {
    for (int k = 0; k < n_warmup; ++k) {
      const double t = ray.t_near + (k + 0.5) * dt;
      if (occ.occupied_at(ray.at(t))) out.ts.push_back(t);
    }
    if (out.ts.empty()) throw EmptyRay("all sample cells unoccupied");
  }
  out.points.reserve(out.ts.size());
  for (const double t : out.ts) out.points.push_back(bbox.clamp(ray.at(t)));
  return out;
}

RaySamples sample_ray(const Ray& ray, const FieldGrid& field,
                      const OccupancyGrid& occ, SampleMode mode, int n_warmup,
                      Rng& rng) {
  RayTs ts = sample_ray_ts(ray, occ, mode, n_warmup, rng, field.bbox());
  RaySamples out;
  out.ts = std::move(ts.ts);
  out.points = std::move(ts.points);
  out.samples.reserve(out.points.size());
  for (const Vec3& p : out.points) out.samples.push_back(field.query(p));
  return out;
}

std::vector<double> alphas(const std::vector<double>& g_values, double s) {
  std::vector<double> a;
  if (g_values.size() < 2) return a;
  a.reserve(g_values.size() - 1);
  double phi_front = logistic_s(g_values[0], s);
  for (std::size_t j = 1; j < g_values.size(); ++j) {
    const double phi_back = logistic_s(g_values[j], s);
    a.push_back(phi_front < 1e-300
                    ? 0.0
                    : std::fmax((phi_front - phi_back) / phi_front, 0.0));
    phi_front = phi_back;
  }
  return a;
}

WeightsResult weights(const std::vector<double>& alpha) {
  WeightsResult out;
  out.w.reserve(alpha.size());
  double t = 1.0;
  for (const double a : alpha) {
    out.w.push_back(a * t);
    t *= 1.0 - a;
  }
  out.transmittance = t;
  return out;
}

RenderResult render_ray(const Ray& ray, const FieldGrid& field,
                        const OccupancyGrid& occ, SampleMode mode, int n_warmup,
                        Rng& rng, bool square_weight_variance) {
  RenderResult out;
  RaySamples samples;
  try {
    samples = sample_ray(ray, field, occ, mode, n_warmup, rng);
  } catch (const EmptyRay&) {
    return out;  // pure background
  }
  if (samples.ts.size() < 2) return out;

  std::vector<double> g(samples.ts.size());
  for (std::size_t i = 0; i < samples.ts.size(); ++i) g[i] = samples.samples[i].g;
  const WeightsResult wr = weights(alphas(g, field.s_value()));

  Vec3 c{0, 0, 0};
  double b2 = 0.0;
  for (std::size_t i = 0; i < wr.w.size(); ++i) {
    const FieldSample& fs = samples.samples[i];
    c += fs.c_mean * wr.w[i];
    b2 += (square_weight_variance ? wr.w[i] * wr.w[i] : wr.w[i]) * fs.beta2;
  }
  out.c_hat = c + Vec3{1, 1, 1} * wr.transmittance;
  out.b2_hat = b2;
  out.w = wr.w;
  out.transmittance = wr.transmittance;
  return out;
}

RenderedImage render_image(const CameraPose& camera, const FieldGrid& field,
                           const OccupancyGrid& occ, int n_warmup,
                           bool square_weight_variance) {
  RenderedImage out;
  out.color = Image(camera.width, camera.height);
  std::fill(out.color.data.begin(), out.color.data.end(), 1.0);
  out.variance.assign(static_cast<std::size_t>(camera.width) * camera.height, 0.0);
  parallel_for(camera.height, 1, [&](std::size_t y0, std::size_t y1) {
    for (std::size_t py = y0; py < y1; ++py) {
      for (int px = 0; px < camera.width; ++px) {
        Ray ray;
        try {
          ray = pixel_ray(camera, px, static_cast<double>(py));
        } catch (const RayMissesScene&) {
          continue;
        }
        Rng unused(0);  // grid mode draws nothing
        const RenderResult r = render_ray(ray, field, occ, SampleMode::Grid,
                                          n_warmup, unused, square_weight_variance);
        for (int ch = 0; ch < 3; ++ch) {
          out.color.at(px, static_cast<int>(py), ch) = r.c_hat[ch];
        }
        out.variance[py * camera.width + px] = r.b2_hat;
      }
    }
  });
  return out;
}

}  // namespace sbv
