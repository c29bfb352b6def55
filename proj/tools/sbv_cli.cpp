// sbv — active 3D reconstruction experiments on synthetic CSG scenes.
//
//   sbv scene    render ground-truth views of a named scene
//   sbv rig      generate a camera rig JSON
//   sbv run      one active-learning run (config file or built-in preset)
//   sbv compare  strategy × seed grid of runs with a summary table
//   sbv eval     recompute metrics for a finished run from its checkpoint
//   sbv heatmap  IG heatmaps from a run's early/final SBV checkpoints

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbv/dataset.hpp"
#include "sbv/experiment.hpp"
#include "sbv/geometry.hpp"
#include "sbv/parallel.hpp"
#include "sbv/scenes.hpp"

namespace {

sbv::ExperimentConfig base_config(const std::string& config_path,
                                  const std::string& preset) {
  if (!config_path.empty()) return sbv::load_config(config_path);
  if (preset == "shelf") return sbv::shelf_preset("sbv", 1, "out/shelf");
  return sbv::sphere_preset(1, "out/sphere");
}

void apply_overrides(sbv::ExperimentConfig& config, const CLI::Option* seed_opt,
                     std::uint64_t seed, const std::string& strategy,
                     const std::string& out) {
  if (seed_opt->count()) config.seed = seed;
  if (!strategy.empty()) config.strategy = strategy;
  if (!out.empty()) config.out_dir = out;
}

int cmd_scene(const std::string& name, int views, int image_size,
              double radius, std::uint64_t seed, const std::string& out) {
  const sbv::SceneSdf scene =
      name.size() > 5 && name.substr(name.size() - 5) == ".json"
          ? sbv::load_scene(name)
          : sbv::scene_by_name(name);
  std::filesystem::create_directories(out);
  sbv::save_scene(out + "/scene.json", scene);

  sbv::Rig rig;
  for (const sbv::CameraPose& p : sbv::hemisphere_rig(
           views, radius, 10.0, 80.0, seed, image_size, image_size)) {
    rig.poses.push_back(p);
    rig.bands.push_back(sbv::ViewBand::Common);
  }
  sbv::save_rig(out + "/rig.json", rig);
  for (std::size_t i = 0; i < rig.poses.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "/view_%03zu.ppm", i);
    sbv::write_ppm(out + buf, sbv::render_gt(scene, rig.poses[i]));
  }
  std::printf("wrote %zu views to %s\n", rig.poses.size(), out.c_str());
  return 0;
}

int cmd_rig(const std::string& kind, int views, double radius, double elev_lo,
            double elev_hi, std::uint64_t seed, int image_size,
            const std::string& out) {
  sbv::Rig rig;
  if (kind == "hemisphere") {
    for (const sbv::CameraPose& p : sbv::hemisphere_rig(
             views, radius, elev_lo, elev_hi, seed, image_size, image_size)) {
      rig.poses.push_back(p);
      rig.bands.push_back(sbv::ViewBand::Common);
    }
  } else if (kind == "imbalanced") {
    // 75/12.5/12.5 split of the requested view count.
    const int high = views / 8, low = views / 8;
    rig = sbv::imbalanced_rig(views - high - low, high, low, radius, seed,
                              image_size, image_size);
  } else {
    std::fprintf(stderr, "unknown rig kind '%s'\n", kind.c_str());
    return 1;
  }
  sbv::save_rig(out, rig);
  std::printf("wrote %zu poses to %s\n", rig.poses.size(), out.c_str());
  return 0;
}

int cmd_run(const sbv::ExperimentConfig& config) {
  const sbv::RunRecord rec = sbv::run_active_loop(config);
  std::printf("run complete: strategy=%s seed=%llu\n",
              rec.config.strategy.c_str(),
              static_cast<unsigned long long>(rec.config.seed));
  std::printf("  mean PSNR %.3f dB, mean SSIM %.4f, chamfer %.5f\n",
              rec.mean_psnr, rec.mean_ssim, rec.mesh.chamfer);
  std::printf("  artifacts in %s\n", rec.config.out_dir.c_str());
  return 0;
}

int cmd_compare(const sbv::ExperimentConfig& base,
                const std::vector<std::string>& strategies,
                const std::vector<std::uint64_t>& seeds,
                const std::string& out) {
  const std::vector<sbv::ComparisonRow> rows =
      sbv::run_comparison(base, strategies, seeds, out);
  std::printf("%-16s %10s %10s %10s\n", "strategy", "psnr", "ssim", "chamfer");
  for (const sbv::ComparisonRow& r : rows)
    std::printf("%-16s %6.2f±%.2f %5.3f±%.3f %6.4f±%.4f\n", r.strategy.c_str(),
                r.psnr_mean, r.psnr_std, r.ssim_mean, r.ssim_std,
                r.chamfer_mean, r.chamfer_std);
  std::printf("summary in %s/summary.csv\n", out.c_str());
  return 0;
}

int cmd_eval(const std::string& run_dir) {
  const sbv::RunRecord rec = sbv::eval_run(run_dir);
  std::printf("eval complete: mean PSNR %.3f dB, mean SSIM %.4f, chamfer %.5f\n",
              rec.mean_psnr, rec.mean_ssim, rec.mesh.chamfer);
  return 0;
}

int cmd_heatmap(const std::string& run_dir, const std::vector<int>& views) {
  const std::vector<std::string> files = sbv::emit_heatmaps(run_dir, views);
  for (const std::string& f : files) std::printf("%s\n", f.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active 3D reconstruction with surface-based visibility"};
  app.require_subcommand(1);
  app.fallthrough();  // allow --threads after the subcommand

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (env SBV_THREADS)");

  // Shared run-shaping flags (run/compare).
  std::string config_path, strategy, out, preset = "sphere";
  std::uint64_t seed = 1;

  auto* sc_scene = app.add_subcommand("scene", "render ground-truth views");
  std::string scene_name = "sphere";
  int views = 8, image_size = 64;
  double radius = 3.0;
  sc_scene->add_option("--name", scene_name, "sphere | csg | shelf | *.json");
  sc_scene->add_option("--views", views, "number of views");
  sc_scene->add_option("--size", image_size, "image width = height");
  sc_scene->add_option("--radius", radius, "camera orbit radius");
  sc_scene->add_option("--seed", seed, "rig seed");
  sc_scene->add_option("--out", out, "output directory")->required();

  auto* sc_rig = app.add_subcommand("rig", "generate a camera rig JSON");
  std::string rig_kind = "hemisphere";
  double elev_lo = 10.0, elev_hi = 80.0;
  sc_rig->add_option("--kind", rig_kind, "hemisphere | imbalanced");
  sc_rig->add_option("--views", views, "number of poses");
  sc_rig->add_option("--radius", radius, "orbit radius");
  sc_rig->add_option("--elev-lo", elev_lo, "min elevation (deg)");
  sc_rig->add_option("--elev-hi", elev_hi, "max elevation (deg)");
  sc_rig->add_option("--seed", seed, "rig seed");
  sc_rig->add_option("--size", image_size, "image width = height");
  sc_rig->add_option("--out", out, "output JSON path")->required();

  auto* sc_run = app.add_subcommand("run", "one active-learning run");
  sc_run->add_option("--config", config_path, "experiment config JSON");
  sc_run->add_option("--preset", preset, "sphere | shelf (when no --config)");
  auto* run_seed = sc_run->add_option("--seed", seed, "run seed");
  sc_run->add_option("--strategy", strategy,
                     "sbv | sbv-top | no-surface | no-surface-top | entropy | "
                     "variance | fvs | random");
  sc_run->add_option("--out", out, "output directory");

  auto* sc_cmp = app.add_subcommand("compare", "strategy × seed comparison");
  std::vector<std::string> strategies{"sbv", "random", "entropy"};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  sc_cmp->add_option("--config", config_path, "base config JSON");
  sc_cmp->add_option("--preset", preset, "sphere | shelf (when no --config)");
  sc_cmp->add_option("--strategies", strategies, "strategies to run");
  sc_cmp->add_option("--seeds", seeds, "seeds shared across strategies");
  sc_cmp->add_option("--out", out, "output directory")->required();

  auto* sc_eval = app.add_subcommand("eval", "re-evaluate a finished run");
  std::string run_dir;
  sc_eval->add_option("run_dir", run_dir, "run output directory")->required();

  auto* sc_heat = app.add_subcommand("heatmap", "IG heatmaps for a run");
  std::vector<int> heat_views;
  sc_heat->add_option("run_dir", run_dir, "run output directory")->required();
  sc_heat->add_option("--views", heat_views, "view ids (default: test views)");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) sbv::set_thread_count(threads);

  try {
    if (sc_scene->parsed())
      return cmd_scene(scene_name, views, image_size, radius, seed, out);
    if (sc_rig->parsed())
      return cmd_rig(rig_kind, views, radius, elev_lo, elev_hi, seed,
                     image_size, out);
    if (sc_run->parsed()) {
      sbv::ExperimentConfig config = base_config(config_path, preset);
      apply_overrides(config, run_seed, seed, strategy, out);
      return cmd_run(config);
    }
    if (sc_cmp->parsed()) {
      sbv::ExperimentConfig config = base_config(config_path, preset);
      return cmd_compare(config, strategies, seeds, out);
    }
    if (sc_eval->parsed()) return cmd_eval(run_dir);
    if (sc_heat->parsed()) return cmd_heatmap(run_dir, heat_views);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
