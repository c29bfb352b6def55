#include "sbv/sbv_grid.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "sbv/errors.hpp"
#include "sbv/parallel.hpp"

namespace sbv {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kUMax = 1.0;
constexpr double kRandomSweepFraction = 0.05;
constexpr std::uint64_t kSweepTag = 0x73777065;  // per-voxel sweep streams

}  // namespace

double color_entropy(double beta2) {
  if (!(beta2 > 0.0)) {
    throw NonPositiveVariance("color entropy needs variance > 0");
  }
  return 0.5 * std::log(2.0 * kPi * beta2) + 0.5;
}

double occupancy_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

SbvGrid::SbvGrid(int resolution, const Aabb& bbox)
    : r_(resolution),
      bbox_(bbox),
      cell_((bbox.max.x - bbox.min.x) / resolution),
      u_(static_cast<std::size_t>(resolution) * resolution * resolution, 1.0),
      conf_(u_.size(), 0.0),
      p_(u_.size(), 0.5) {}

Vec3 SbvGrid::voxel_center(std::size_t v) const {
  const std::size_t r = static_cast<std::size_t>(r_);
  const int iz = static_cast<int>(v % r);
  const int iy = static_cast<int>((v / r) % r);
  const int ix = static_cast<int>(v / (r * r));
  return {bbox_.min.x + cell_ * (ix + 0.5), bbox_.min.y + cell_ * (iy + 0.5),
          bbox_.min.z + cell_ * (iz + 0.5)};
}

void SbvGrid::update_surface_conf(std::size_t v, int detection) {
  conf_[v] = std::fmax(conf_[v] * 0.95, static_cast<double>(detection));
}

void SbvGrid::update_uncertainty(std::size_t v, double predicted_beta2) {
  u_[v] = std::fmin(std::fmin(u_[v] * 1.05, predicted_beta2), kUMax);
}

int SbvGrid::probe(std::size_t v, const FieldGrid& field, const Vec3& probe_dir,
                   Rng& rng, Vec3* b_out) const {
  const Vec3 center = voxel_center(v);
  const Vec3 b = bbox_.clamp({center.x + cell_ * rng.uniform(-0.4, 0.4),
                              center.y + cell_ * rng.uniform(-0.4, 0.4),
                              center.z + cell_ * rng.uniform(-0.4, 0.4)});
  if (b_out != nullptr) *b_out = b;
  const double h = std::fmax(1.0 / field.s_value(), cell_);
  const Vec3 a = bbox_.clamp(b - probe_dir * (0.5 * h));
  const Vec3 c = bbox_.clamp(b + probe_dir * (0.5 * h));
  const double ga = field.query(a).g;
  const double gc = field.query(c).g;
  return ga * gc < 0.0 ? 1 : 0;
}

int SbvGrid::detect_surface(std::size_t v, const FieldGrid& field,
                            const Vec3& probe_dir, Rng& rng) const {
  return probe(v, field, probe_dir, rng, nullptr);
}

void SbvGrid::sweep_update(const FieldGrid& field,
                           const std::vector<CameraPose>& train_cameras,
                           const OccupancyGrid& occ, std::uint64_t seed) {
  if (train_cameras.empty()) {
    throw std::invalid_argument("sweep_update requires at least one train camera");
  }
  ++sweep_counter_;
  parallel_for(u_.size(), 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) {
      Rng rng = stream(seed, kSweepTag, sweep_counter_, v);
      const double refresh_draw = rng.uniform();
      if (!occ.occupied(v) && refresh_draw >= kRandomSweepFraction) continue;
      const CameraPose& cam = train_cameras[rng.below(train_cameras.size())];
      const Vec3 center = voxel_center(v);
      Vec3 dir = center - cam.position;
      const double len = dir.norm();
      dir = len > 1e-12 ? dir / len : Vec3{0, 0, 1};
      Vec3 probe_center;
      const int detection = probe(v, field, dir, rng, &probe_center);
      update_surface_conf(v, detection);
      update_uncertainty(v, field.query(probe_center).beta2);
      p_[v] = std::fmin(
          OccupancyGrid::alpha_estimate(field, probe_center, cell_ * std::sqrt(3.0)),
          1.0);
    }
  });
}

void SbvGrid::set_state(std::size_t v, double u, double conf, double p) {
  u_[v] = u;
  conf_[v] = conf;
  p_[v] = p;
}

void save_sbv(const std::string& path, const SbvGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write sbv snapshot: " + path);
  out.write("SBVG", 4);
  const std::uint32_t r = static_cast<std::uint32_t>(grid.resolution());
  out.write(reinterpret_cast<const char*>(&r), 4);
  auto write_f32 = [&](const std::vector<double>& vals) {
    std::vector<float> f(vals.begin(), vals.end());
    out.write(reinterpret_cast<const char*>(f.data()),
              static_cast<std::streamsize>(f.size() * sizeof(float)));
  };
  write_f32(grid.u_values());
  write_f32(grid.conf_values());
  write_f32(grid.p_values());
}

SbvGrid load_sbv(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingCheckpoint("sbv snapshot not found: " + path);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingCheckpoint("cannot open sbv snapshot: " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, "SBVG", 4) != 0) {
    throw std::runtime_error("bad sbv snapshot magic: " + path);
  }
  std::uint32_t r = 0;
  in.read(reinterpret_cast<char*>(&r), 4);
  SbvGrid grid(static_cast<int>(r));
  const std::size_t n = grid.voxel_count();
  std::vector<float> f(n);
  auto read_arr = [&](int which) {
    in.read(reinterpret_cast<char*>(f.data()),
            static_cast<std::streamsize>(n * sizeof(float)));
    for (std::size_t v = 0; v < n; ++v) {
      const double u = which == 0 ? f[v] : grid.uncertainty(v);
      const double c = which == 1 ? f[v] : grid.surface_conf(v);
      const double p = which == 2 ? f[v] : grid.occ_alpha(v);
      grid.set_state(v, u, c, p);
    }
  };
  read_arr(0);
  read_arr(1);
  read_arr(2);
  if (!in) throw std::runtime_error("truncated sbv snapshot: " + path);
  return grid;
}

}  // namespace sbv
