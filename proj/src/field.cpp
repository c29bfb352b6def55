#include "sbv/field.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "sbv/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace sbv {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) {
  // Keep init colors strictly inside (0,1) so the stored value stays finite.
  const double eps = 1e-6;
  p = std::fmin(std::fmax(p, eps), 1.0 - eps);
  return std::log(p / (1.0 - p));
}

}  // namespace

FieldGrid::FieldGrid(int resolution, const Aabb& bbox)
    : r_(resolution),
      bbox_(bbox),
      cell_((bbox.max.x - bbox.min.x) / resolution),
      nv_(static_cast<std::size_t>(resolution + 1) * (resolution + 1) *
          (resolution + 1)),
      params_(kStride * nv_ + 1, 0.0) {}

Vec3 FieldGrid::vertex_position(int ix, int iy, int iz) const {
  return {bbox_.min.x + cell_ * ix, bbox_.min.y + cell_ * iy,
          bbox_.min.z + cell_ * iz};
}

double FieldGrid::s_value() const { return std::exp(params_.back()); }

InterpStencil FieldGrid::stencil(const Vec3& x) const {
  if (!bbox_.contains(x)) throw OutOfBounds("field query outside bounding box");
  double f[3];
  int i[3];
  for (int a = 0; a < 3; ++a) {
    const double u = (x[a] - bbox_.min[a]) / cell_;
    int ia = static_cast<int>(std::floor(u));
    if (ia > r_ - 1) ia = r_ - 1;  // x exactly on the max face
    if (ia < 0) ia = 0;
    i[a] = ia;
    f[a] = u - ia;
  }
  InterpStencil st;
  const double inv_cell = 1.0 / cell_;
  int n = 0;
  for (int dx = 0; dx < 2; ++dx) {
    const double wx = dx ? f[0] : 1.0 - f[0];
    const double gx = dx ? inv_cell : -inv_cell;
    for (int dy = 0; dy < 2; ++dy) {
      const double wy = dy ? f[1] : 1.0 - f[1];
      const double gy = dy ? inv_cell : -inv_cell;
      for (int dz = 0; dz < 2; ++dz) {
        const double wz = dz ? f[2] : 1.0 - f[2];
        const double gz = dz ? inv_cell : -inv_cell;
        st.vertex[n] = vertex_index(i[0] + dx, i[1] + dy, i[2] + dz);
        st.w[n] = wx * wy * wz;
        st.dw[n] = {gx * wy * wz, wx * gy * wz, wx * wy * gz};
        ++n;
      }
    }
  }
  return st;
}

double FieldGrid::interp_sdf(const InterpStencil& st) const {
  double g = 0.0;
  for (int k = 0; k < 8; ++k) g += st.w[k] * params_[st.vertex[k] * kStride];
  return g;
}

void FieldGrid::interp_raw_rgb(const InterpStencil& st, double out[3]) const {
  out[0] = out[1] = out[2] = 0.0;
  for (int k = 0; k < 8; ++k) {
    const double* v = &params_[st.vertex[k] * kStride];
    out[0] += st.w[k] * v[1];
    out[1] += st.w[k] * v[2];
    out[2] += st.w[k] * v[3];
  }
}

double FieldGrid::interp_log_beta2(const InterpStencil& st) const {
  double lb = 0.0;
  for (int k = 0; k < 8; ++k) {
    lb += st.w[k] * params_[st.vertex[k] * kStride + 4];
  }
  return lb;
}

FieldSample FieldGrid::query(const Vec3& x) const {
  const InterpStencil st = stencil(x);
  FieldSample out;
  out.g = 0.0;
  out.grad_g = {0, 0, 0};
  double raw[3];
  interp_raw_rgb(st, raw);
  for (int k = 0; k < 8; ++k) {
    const double sdf = params_[st.vertex[k] * kStride];
    out.g += st.w[k] * sdf;
    out.grad_g += st.dw[k] * sdf;
  }
  out.c_mean = {logistic(raw[0]), logistic(raw[1]), logistic(raw[2])};
  out.beta2 = std::fmax(std::exp(interp_log_beta2(st)), kBeta2Floor);
  return out;
}

void FieldGrid::init_sphere(double radius, const Vec3& center,
                            const Vec3& base_color, double beta2_init,
                            double s_init) {
  const double raw_r = logit(base_color.x);
  const double raw_g = logit(base_color.y);
  const double raw_b = logit(base_color.z);
  const double lb = std::log(beta2_init);
  for (int ix = 0; ix <= r_; ++ix) {
    for (int iy = 0; iy <= r_; ++iy) {
      for (int iz = 0; iz <= r_; ++iz) {
        double* v = &params_[vertex_index(ix, iy, iz) * kStride];
        v[0] = (vertex_position(ix, iy, iz) - center).norm() - radius;
        v[1] = raw_r;
        v[2] = raw_g;
        v[3] = raw_b;
        v[4] = lb;
      }
    }
  }
  params_.back() = std::log(s_init);
}

void save_field(const std::string& path, const FieldGrid& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write("SBVF", 4);
  const std::uint32_t version = 1;
  const std::uint32_t r = static_cast<std::uint32_t>(field.resolution());
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&r), 4);
  out.write(reinterpret_cast<const char*>(field.params()),
            static_cast<std::streamsize>(field.param_count() * sizeof(double)));
}

FieldGrid load_field(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingCheckpoint("checkpoint not found: " + path);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingCheckpoint("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, "SBVF", 4) != 0) {
    throw std::runtime_error("bad checkpoint magic: " + path);
  }
  std::uint32_t version = 0, r = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&r), 4);
  if (version != 1) throw std::runtime_error("unsupported checkpoint version");
  FieldGrid field(static_cast<int>(r));
  in.read(reinterpret_cast<char*>(field.params()),
          static_cast<std::streamsize>(field.param_count() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated checkpoint: " + path);
  return field;
}

}  // namespace sbv
