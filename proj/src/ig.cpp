#include "sbv/ig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbv/errors.hpp"
#include "sbv/parallel.hpp"

namespace sbv {

TraversalResult traverse(const Ray& ray, int resolution, const Aabb& bbox) {
  TraversalResult out;
  const int r = resolution;

  // Clip the ray's own [t_near, t_far] segment against the grid box.
  double t0 = ray.t_near, t1 = ray.t_far;
  if (!bbox.clip(ray.origin, ray.direction, t0, t1)) return out;
  t0 = std::max(t0, ray.t_near);
  t1 = std::min(t1, ray.t_far);
  if (!(t1 > t0)) return out;

  const Vec3 ext = bbox.extent();
  const double cell[3] = {ext.x / r, ext.y / r, ext.z / r};
  const Vec3 p = ray.at(t0);

  int idx[3];
  int step[3];
  double t_max[3], t_delta[3];
  const double inf = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double u = (p[a] - bbox.min[a]) / cell[a];
    int i = static_cast<int>(std::floor(u));
    // A start point exactly on an interior cell plane belongs to the lower
    // cell, so a ray leaving that plane backwards still begins inside it.
    if (u == std::floor(u) && i > 0) i -= 1;
    idx[a] = std::clamp(i, 0, r - 1);

    const double d = ray.direction[a];
    if (d > 0) {
      step[a] = 1;
      t_max[a] = (bbox.min[a] + (idx[a] + 1) * cell[a] - ray.origin[a]) / d;
      t_delta[a] = cell[a] / d;
    } else if (d < 0) {
      step[a] = -1;
      t_max[a] = (bbox.min[a] + idx[a] * cell[a] - ray.origin[a]) / d;
      t_delta[a] = -cell[a] / d;
    } else {
      step[a] = 0;
      t_max[a] = inf;
      t_delta[a] = inf;
    }
  }

  double t = t0;
  while (t < t1) {
    // Equal boundary distances step x before y before z.
    int axis = 0;
    if (t_max[1] < t_max[0]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    const double t_next = std::min(t_max[axis], t1);

    if (t_next > t) {  // corner passes yield zero-length stops; drop them
      out.cells.push_back(
          (static_cast<std::size_t>(idx[0]) * r + idx[1]) * r + idx[2]);
      out.t_entry.push_back(t);
      out.t_exit.push_back(t_next);
    }
    if (t_max[axis] >= t1) break;

    t = t_max[axis];
    t_max[axis] += t_delta[axis];
    idx[axis] += step[axis];
    if (idx[axis] < 0 || idx[axis] >= r) break;
  }
  return out;
}

namespace {

// Shared scaffolding for the grid-integrating gain functions: walk every
// stride-th pixel's ray through the voxel grid and reduce the per-voxel
// values into a global mean, a per-pixel mean map, and a surface-hit mask.
struct RayScore {
  double sum = 0.0;
  std::size_t count = 0;
  bool hit_surface = false;
};

template <typename ScoreFn>
IgReport integrate_grid(int view_id, const CameraPose& camera,
                        const SbvGrid& grid, int pixel_stride,
                        ScoreFn&& score_ray) {
  IgReport report;
  report.view_id = view_id;
  report.width = camera.width;
  report.height = camera.height;
  report.pixel_map.assign(static_cast<std::size_t>(camera.width) * camera.height,
                          0.0);
  report.surface_mask.assign(report.pixel_map.size(), 0);

  std::vector<double> sums(report.pixel_map.size(), 0.0);
  std::vector<std::size_t> counts(report.pixel_map.size(), 0);

  parallel_for(static_cast<std::size_t>(camera.height), 1,
               [&](std::size_t row0, std::size_t row1) {
                 for (std::size_t py = row0; py < row1; ++py) {
                   if (py % pixel_stride != 0) continue;
                   for (int px = 0; px < camera.width; px += pixel_stride) {
                     const std::size_t pix = py * camera.width + px;
                     Ray ray;
                     try {
                       ray = pixel_ray(camera, px, static_cast<int>(py),
                                       grid.bbox());
                     } catch (const RayMissesScene&) {
                       continue;
                     }
                     const TraversalResult tr =
                         traverse(ray, grid.resolution(), grid.bbox());
                     const RayScore rs = score_ray(tr);
                     sums[pix] = rs.sum;
                     counts[pix] = rs.count;
                     if (rs.count > 0)
                       report.pixel_map[pix] = rs.sum / rs.count;
                     report.surface_mask[pix] = rs.hit_surface ? 1 : 0;
                   }
                 }
               });

  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    total += sums[i];
    n += counts[i];
  }
  report.ig = n > 0 ? total / n : 0.0;
  return report;
}

}  // namespace

IgReport ig_sbv(int view_id, const CameraPose& camera, const SbvGrid& grid,
                int pixel_stride, bool gated, bool first_surface_only) {
  IgReport report = integrate_grid(
      view_id, camera, grid, pixel_stride,
      [&](const TraversalResult& tr) {
        RayScore rs;
        for (std::size_t c : tr.cells)
          if (grid.is_surface_voxel(c)) {
            rs.hit_surface = true;
            break;
          }
        const bool keep_surface_only = gated && rs.hit_surface;
        for (std::size_t c : tr.cells) {
          const bool on_surface = grid.is_surface_voxel(c);
          if (keep_surface_only && !on_surface) continue;
          rs.sum += color_entropy(grid.uncertainty(c));
          rs.count += 1;
          if (keep_surface_only && first_surface_only) break;
        }
        return rs;
      });
  report.strategy = "sbv";
  return report;
}

IgReport ig_entropy(int view_id, const CameraPose& camera, const SbvGrid& grid,
                    int pixel_stride) {
  IgReport report = integrate_grid(view_id, camera, grid, pixel_stride,
                                   [&](const TraversalResult& tr) {
                                     RayScore rs;
                                     for (std::size_t c : tr.cells) {
                                       rs.sum +=
                                           occupancy_entropy(grid.occ_alpha(c));
                                       rs.count += 1;
                                       if (grid.is_surface_voxel(c))
                                         rs.hit_surface = true;
                                     }
                                     return rs;
                                   });
  report.strategy = "entropy";
  return report;
}

IgReport ig_variance(int view_id, const CameraPose& camera,
                     const FieldGrid& field, const OccupancyGrid& occ,
                     int pixel_stride, int n_samples,
                     bool square_weight_variance) {
  IgReport report;
  report.view_id = view_id;
  report.strategy = "variance";
  report.width = camera.width;
  report.height = camera.height;
  report.pixel_map.assign(static_cast<std::size_t>(camera.width) * camera.height,
                          0.0);
  report.surface_mask.assign(report.pixel_map.size(), 0);

  std::vector<std::uint8_t> sampled(report.pixel_map.size(), 0);
  parallel_for(static_cast<std::size_t>(camera.height), 1,
               [&](std::size_t row0, std::size_t row1) {
                 Rng unused(0);
                 for (std::size_t py = row0; py < row1; ++py) {
                   if (py % pixel_stride != 0) continue;
                   for (int px = 0; px < camera.width; px += pixel_stride) {
                     const std::size_t pix = py * camera.width + px;
                     sampled[pix] = 1;
                     double b2 = 0.0;
                     try {
                       const Ray ray = pixel_ray(camera, px,
                                                 static_cast<int>(py),
                                                 field.bbox());
                       b2 = render_ray(ray, field, occ, SampleMode::Grid,
                                       n_samples, unused,
                                       square_weight_variance)
                                .b2_hat;
                     } catch (const RayMissesScene&) {
                       b2 = 0.0;  // background pixel: no variance
                     }
                     report.pixel_map[pix] = b2;
                   }
                 }
               });

  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < sampled.size(); ++i)
    if (sampled[i]) {
      total += report.pixel_map[i];
      ++n;
    }
  report.ig = n > 0 ? total / n : 0.0;
  return report;
}

namespace {

Image normalized_map(const IgReport& report, double lo, double hi) {
  Image img(report.width, report.height);
  const double span = hi - lo;
  for (int y = 0; y < report.height; ++y)
    for (int x = 0; x < report.width; ++x) {
      const double v = report.pixel_map[static_cast<std::size_t>(y) *
                                            report.width +
                                        x];
      double n = span > 0 ? (v - lo) / span : 0.0;
      n = std::clamp(n, 0.0, 1.0);
      img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = n;
    }
  return img;
}

}  // namespace

Image ig_heatmap_intra(const IgReport& report) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : report.pixel_map) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) return Image(report.width, report.height);
  return normalized_map(report, lo, hi);
}

Image ig_heatmap_global(const IgReport& report, double gmin, double gmax) {
  return normalized_map(report, gmin, gmax);
}

}  // namespace sbv
