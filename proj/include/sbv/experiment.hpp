#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbv/dataset.hpp"
#include "sbv/metrics.hpp"
#include "sbv/training.hpp"

namespace sbv {

// One active-reconstruction run: scene + rig generation, the training loop
// with interleaved occupancy/SBV maintenance, per-round view selection, and
// final evaluation. Defaults describe the sphere benchmark run.
struct ExperimentConfig {
  std::string scene = "sphere";  // scene name, or a path ending in .json
  int image_size = 64;
  int resolution = 64;  // field, occupancy, and SBV grids share it
  double radius = 3.0;

  // Rig: a candidate/train pool plus an appended test block (its own seed
  // stream, so pool and test never coincide).
  std::string rig = "hemisphere";  // or "imbalanced"
  int pool_views = 16;             // hemisphere pool
  double elev_lo = 10.0, elev_hi = 80.0;
  int test_views = 6;  // hemisphere test block
  double test_elev_lo = 15.0, test_elev_hi = 75.0;
  int pool_common = 60, pool_high = 10, pool_low = 10;  // imbalanced pool
  int test_common = 4, test_high = 4, test_low = 2;     // imbalanced test

  std::vector<int> initial_train{0, 4, 8, 12};
  std::string strategy = "sbv";  // sbv, sbv-top, no-surface, no-surface-top,
                                 // entropy, variance, fvs, random
  int k_per_round = 3;
  int rounds = 4;
  int pixel_stride = 4;
  bool first_surface_only = false;
  std::uint64_t seed = 1;
  std::string out_dir = "out/run";

  TrainConfig train;
};

// Canonical presets used by the benchmark tests and the CLI.
ExperimentConfig sphere_preset(std::uint64_t seed, const std::string& out_dir);
ExperimentConfig shelf_preset(const std::string& strategy, std::uint64_t seed,
                              const std::string& out_dir);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct RunRecord {
  ExperimentConfig config;  // fully resolved
  std::vector<std::vector<int>> picks;  // per selection round
  std::vector<double> tau_history;      // τ in effect after each round
  std::vector<int> final_train_ids;
  std::vector<int> test_ids;
  std::vector<double> test_psnr, test_ssim;  // aligned with test_ids
  double mean_psnr = 0.0, mean_ssim = 0.0;
  ChamferResult mesh;
  double wall_seconds = 0.0;
};

// Artifact names inside a run directory.
constexpr const char* kConfigFile = "config.json";
constexpr const char* kRigFile = "rig.json";
constexpr const char* kLossFile = "loss.csv";
constexpr const char* kSelectionFile = "selection.csv";
constexpr const char* kMetricsFile = "metrics.csv";
constexpr const char* kMeshFile = "mesh.csv";
constexpr const char* kFieldFinal = "field_final.sbvf";
constexpr const char* kSbvFinal = "sbv_final.sbvg";
constexpr const char* kFieldRound1 = "field_round1.sbvf";
constexpr const char* kSbvRound1 = "sbv_round1.sbvg";

RunRecord run_active_loop(const ExperimentConfig& config);

// Re-evaluates the test split from the saved final checkpoint; rewrites
// metrics.csv/mesh.csv (bit-identical to the run's own, by determinism).
RunRecord eval_run(const std::string& run_dir);

struct ComparisonRow {
  std::string strategy;
  double psnr_mean = 0, psnr_std = 0;
  double ssim_mean = 0, ssim_std = 0;
  double chamfer_mean = 0, chamfer_std = 0;
};

// Runs every strategy with every seed (shared across strategies); per-run
// artifacts land in out_dir/<strategy>_seed<seed>/, the mean±std table in
// out_dir/summary.csv.
std::vector<ComparisonRow> run_comparison(const ExperimentConfig& base,
                                          const std::vector<std::string>& strategies,
                                          const std::vector<std::uint64_t>& seeds,
                                          const std::string& out_dir);

// Renders intra- and globally-normalized IG heatmaps for the given views
// (default: the run's test views) from the round-1 and final SBV checkpoints;
// global bounds take the minimum over the final maps and the maximum over the
// round-1 maps. PPMs land in <run_dir>/heatmaps. Throws MissingCheckpoint.
std::vector<std::string> emit_heatmaps(const std::string& run_dir,
                                       std::vector<int> view_ids = {});

}  // namespace sbv
