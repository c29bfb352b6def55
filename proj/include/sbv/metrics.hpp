#pragma once

#include <vector>

#include "sbv/field.hpp"
#include "sbv/geometry.hpp"
#include "sbv/image.hpp"

namespace sbv {

// 10·log10(1/MSE) over [0,1] pixels; +inf for identical images.
// Throws DimensionMismatch.
double psnr(const Image& a, const Image& b);

// Standard SSIM: 11x11 Gaussian window (sigma 1.5), C1=0.01², C2=0.03²,
// valid windows only, per-channel then averaged. Throws DimensionMismatch
// (also for images smaller than the window).
double ssim(const Image& a, const Image& b);

// One point per grid edge whose endpoint SDFs change sign, placed by linear
// interpolation of the root. n_target > 0 keeps a deterministic even-stride
// subsample of that many points. Throws NoSurface when no edge crosses.
std::vector<Vec3> extract_surface_points(const FieldGrid& field,
                                         std::size_t n_target = 0);

struct ChamferResult {
  double accuracy = 0.0;      // mean over pred of nearest-gt distance
  double completeness = 0.0;  // mean over gt of nearest-pred distance
  double chamfer = 0.0;       // (accuracy + completeness) / 2
};

// Exact nearest neighbors (k-d tree). Throws EmptySet.
ChamferResult chamfer(const std::vector<Vec3>& pred,
                      const std::vector<Vec3>& gt);

}  // namespace sbv
