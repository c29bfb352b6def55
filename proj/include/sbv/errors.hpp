#pragma once

#include <stdexcept>

namespace sbv {

// All domain errors derive from std::runtime_error so the CLI can catch one
// base type, print the message, and exit nonzero.

// Pixel ray does not intersect the scene bounding box.
struct RayMissesScene : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Query point outside the field's bounding box.
struct OutOfBounds : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid-mode sampling skipped every interval along a ray. Callers that render
// treat this as "background"; it is an exception so lower layers stay pure.
struct EmptyRay : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rendered variance fell below the representable floor. This indicates a bug
// (the loss clamps variance before use), never a legitimate input.
struct DegenerateVariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Training loss became NaN/inf; aborts the run with diagnostics.
struct NonFiniteLoss : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Entropy of a Gaussian needs strictly positive variance.
struct NonPositiveVariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A selector was asked for more views than remain in the candidate pool.
struct InsufficientCandidates : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two images (or point sets) with incompatible shapes.
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Surface extraction found no sign change anywhere in the grid.
struct NoSurface : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Chamfer distance over an empty point set.
struct EmptySet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation/heatmap asked for a checkpoint file that does not exist.
struct MissingCheckpoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sbv
