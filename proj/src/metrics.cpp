#include "sbv/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sbv/errors.hpp"
#include "sbv/parallel.hpp"

namespace sbv {

namespace {

void require_same_size(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height)
    throw DimensionMismatch("image sizes differ: " + std::to_string(a.width) +
                            "x" + std::to_string(a.height) + " vs " +
                            std::to_string(b.width) + "x" +
                            std::to_string(b.height));
}

}  // namespace

double psnr(const Image& a, const Image& b) {
  require_same_size(a, b);
  double se = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    se += d * d;
  }
  const double mse = se / a.data.size();
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

constexpr int kWin = 11;

// 11-tap Gaussian, sigma 1.5, normalized. Separable window weights.
std::array<double, kWin> gaussian_taps() {
  std::array<double, kWin> t{};
  double sum = 0.0;
  for (int i = 0; i < kWin; ++i) {
    const double d = i - (kWin - 1) / 2.0;
    t[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    sum += t[i];
  }
  for (double& v : t) v /= sum;
  return t;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
  require_same_size(a, b);
  if (a.width < kWin || a.height < kWin)
    throw DimensionMismatch("ssim needs images of at least 11x11, got " +
                            std::to_string(a.width) + "x" +
                            std::to_string(a.height));

  const auto taps = gaussian_taps();
  constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  const int nx = a.width - kWin + 1, ny = a.height - kWin + 1;

  double channel_sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> window_means(static_cast<std::size_t>(nx) * ny);
    parallel_for(static_cast<std::size_t>(ny), 1, [&](std::size_t w0,
                                                      std::size_t w1) {
      for (std::size_t wy = w0; wy < w1; ++wy)
        for (int wx = 0; wx < nx; ++wx) {
          double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
          for (int dy = 0; dy < kWin; ++dy)
            for (int dx = 0; dx < kWin; ++dx) {
              const double w = taps[dy] * taps[dx];
              const double va = a.at(wx + dx, static_cast<int>(wy) + dy, c);
              const double vb = b.at(wx + dx, static_cast<int>(wy) + dy, c);
              mu_a += w * va;
              mu_b += w * vb;
              aa += w * va * va;
              bb += w * vb * vb;
              ab += w * va * vb;
            }
          const double var_a = aa - mu_a * mu_a;
          const double var_b = bb - mu_b * mu_b;
          const double cov = ab - mu_a * mu_b;
          const double num = (2 * mu_a * mu_b + c1) * (2 * cov + c2);
          const double den =
              (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
          window_means[wy * nx + wx] = num / den;
        }
    });
    // Sequential reduction in window order keeps the value thread-invariant.
    channel_sum += std::accumulate(window_means.begin(), window_means.end(),
                                   0.0) /
                   window_means.size();
  }
  return channel_sum / 3.0;
}

std::vector<Vec3> extract_surface_points(const FieldGrid& field,
                                         std::size_t n_target) {
  const int n = field.resolution() + 1;  // vertices per axis
  const double* p = field.params();
  const auto sdf = [&](int ix, int iy, int iz) {
    return p[field.vertex_index(ix, iy, iz) * FieldGrid::kStride];
  };

  std::vector<Vec3> points;
  const int dirs[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const double g0 = sdf(ix, iy, iz);
        for (const auto& d : dirs) {
          const int jx = ix + d[0], jy = iy + d[1], jz = iz + d[2];
          if (jx >= n || jy >= n || jz >= n) continue;
          const double g1 = sdf(jx, jy, jz);
          if (!(g0 * g1 < 0.0)) continue;
          const double t = g0 / (g0 - g1);  // linear root on the edge
          const Vec3 a = field.vertex_position(ix, iy, iz);
          const Vec3 b = field.vertex_position(jx, jy, jz);
          points.push_back(a + (b - a) * t);
        }
      }
  if (points.empty())
    throw NoSurface("field has no sign-crossing grid edges");

  if (n_target > 0 && points.size() > n_target) {
    std::vector<Vec3> kept;
    kept.reserve(n_target);
    for (std::size_t i = 0; i < n_target; ++i)
      kept.push_back(points[i * points.size() / n_target]);
    points = std::move(kept);
  }
  return points;
}

namespace {

// Minimal exact k-d tree over points (median split by widest axis).
class KdTree {
 public:
  explicit KdTree(const std::vector<Vec3>& pts) : pts_(pts) {
    idx_.resize(pts.size());
    std::iota(idx_.begin(), idx_.end(), std::size_t{0});
    nodes_.reserve(2 * pts.size());
    root_ = build(0, pts.size());
  }

  double nearest_distance(const Vec3& q) const {
    double best = std::numeric_limits<double>::infinity();
    search(root_, q, best);
    return std::sqrt(best);
  }

 private:
  static constexpr std::size_t kLeaf = 8;

  struct Node {
    int axis = -1;            // -1 for leaf
    double split = 0.0;
    std::size_t begin = 0, end = 0;  // leaf range into idx_
    int left = -1, right = -1;
  };

  int build(std::size_t begin, std::size_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    if (end - begin > kLeaf) {
      Vec3 lo = pts_[idx_[begin]], hi = lo;
      for (std::size_t i = begin; i < end; ++i) {
        lo = cmin(lo, pts_[idx_[i]]);
        hi = cmax(hi, pts_[idx_[i]]);
      }
      const Vec3 ext = hi - lo;
      int axis = 0;
      if (ext.y > ext[axis]) axis = 1;
      if (ext.z > ext[axis]) axis = 2;
      const std::size_t mid = (begin + end) / 2;
      std::nth_element(idx_.begin() + begin, idx_.begin() + mid,
                       idx_.begin() + end, [&](std::size_t a, std::size_t b) {
                         return pts_[a][axis] < pts_[b][axis];
                       });
      node.axis = axis;
      node.split = pts_[idx_[mid]][axis];
      nodes_.push_back(node);
      const int self = static_cast<int>(nodes_.size()) - 1;
      nodes_[self].left = build(begin, mid);
      nodes_[self].right = build(mid, end);
      return self;
    }
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  void search(int ni, const Vec3& q, double& best_sq) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const Vec3 d = pts_[idx_[i]] - q;
        best_sq = std::min(best_sq, d.dot(d));
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0 ? node.left : node.right;
    const int far = delta < 0 ? node.right : node.left;
    search(near, q, best_sq);
    if (delta * delta < best_sq) search(far, q, best_sq);
  }

  const std::vector<Vec3>& pts_;
  std::vector<std::size_t> idx_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

double directed_mean(const std::vector<Vec3>& from, const KdTree& to_tree) {
  std::vector<double> d(from.size());
  parallel_for(from.size(), 256, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i)
      d[i] = to_tree.nearest_distance(from[i]);
  });
  return std::accumulate(d.begin(), d.end(), 0.0) / d.size();
}

}  // namespace

ChamferResult chamfer(const std::vector<Vec3>& pred,
                      const std::vector<Vec3>& gt) {
  if (pred.empty() || gt.empty())
    throw EmptySet("chamfer needs two non-empty point sets");
  const KdTree pred_tree(pred), gt_tree(gt);
  ChamferResult r;
  r.accuracy = directed_mean(pred, gt_tree);
  r.completeness = directed_mean(gt, pred_tree);
  r.chamfer = 0.5 * (r.accuracy + r.completeness);
  return r;
}

}  // namespace sbv
