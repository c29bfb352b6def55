#include "sbv/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sbv/errors.hpp"
#include "sbv/ig.hpp"
#include "sbv/nbv.hpp"
#include "sbv/parallel.hpp"
#include "sbv/sbv_grid.hpp"
#include "sbv/scenes.hpp"

namespace sbv {

namespace {

using nlohmann::json;

constexpr std::uint64_t kTestRigTag = 0x74657374;   // test-block rig stream
constexpr std::uint64_t kSelectTag = 0x73656c65;    // per-round random picks
constexpr std::uint64_t kGtPointsTag = 0x67747074;  // gt surface sampling

const std::set<std::string>& valid_strategies() {
  static const std::set<std::string> s{"sbv",     "sbv-top",        "no-surface",
                                       "no-surface-top", "entropy", "variance",
                                       "fvs",     "random"};
  return s;
}

// Shortest round-trippable decimal form.
std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

json train_to_json(const TrainConfig& t) {
  return json{{"learning_rate", t.learning_rate},
              {"eikonal_weight", t.eikonal_weight},
              {"uncertainty_rgb_weight", t.uncertainty_rgb_weight},
              {"uncertainty_beta_weight", t.uncertainty_beta_weight},
              {"beta_min", t.beta_min},
              {"batch_size", t.batch_size},
              {"n_samples", t.n_samples},
              {"lr_warmup_iters", t.lr_warmup_iters},
              {"sample_warmup_iters", t.sample_warmup_iters},
              {"occ_update_period", t.occ_update_period},
              {"n_occupied_refresh", t.n_occupied_refresh},
              {"n_random_refresh", t.n_random_refresh},
              {"tau_occ", t.tau_occ},
              {"square_weight_variance", t.square_weight_variance},
              {"total_iters", t.total_iters},
              {"sweep_period", t.sweep_period},
              {"selection_schedule", t.selection_schedule}};
}

template <typename T>
void get_to_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

TrainConfig train_from_json(const json& j) {
  TrainConfig t;
  get_to_if(j, "learning_rate", t.learning_rate);
  get_to_if(j, "eikonal_weight", t.eikonal_weight);
  get_to_if(j, "uncertainty_rgb_weight", t.uncertainty_rgb_weight);
  get_to_if(j, "uncertainty_beta_weight", t.uncertainty_beta_weight);
  get_to_if(j, "beta_min", t.beta_min);
  get_to_if(j, "batch_size", t.batch_size);
  get_to_if(j, "n_samples", t.n_samples);
  get_to_if(j, "lr_warmup_iters", t.lr_warmup_iters);
  get_to_if(j, "sample_warmup_iters", t.sample_warmup_iters);
  get_to_if(j, "occ_update_period", t.occ_update_period);
  get_to_if(j, "n_occupied_refresh", t.n_occupied_refresh);
  get_to_if(j, "n_random_refresh", t.n_random_refresh);
  get_to_if(j, "tau_occ", t.tau_occ);
  get_to_if(j, "square_weight_variance", t.square_weight_variance);
  get_to_if(j, "total_iters", t.total_iters);
  get_to_if(j, "sweep_period", t.sweep_period);
  get_to_if(j, "selection_schedule", t.selection_schedule);
  return t;
}

void validate(const ExperimentConfig& c) {
  if (!valid_strategies().count(c.strategy))
    throw std::invalid_argument("unknown strategy '" + c.strategy + "'");
  if (c.rig != "hemisphere" && c.rig != "imbalanced")
    throw std::invalid_argument("unknown rig kind '" + c.rig + "'");
  if (c.rounds < 0) throw std::invalid_argument("rounds must be >= 0");
  if (static_cast<int>(c.train.selection_schedule.size()) < c.rounds)
    throw std::invalid_argument("selection schedule shorter than rounds");
  if (!std::is_sorted(c.train.selection_schedule.begin(),
                      c.train.selection_schedule.end()))
    throw std::invalid_argument("selection schedule must ascend");
  if (c.out_dir.empty()) throw std::invalid_argument("out_dir required");
}

}  // namespace

ExperimentConfig sphere_preset(std::uint64_t seed, const std::string& out_dir) {
  ExperimentConfig c;  // defaults are the sphere run
  c.seed = seed;
  c.out_dir = out_dir;
  c.train.total_iters = 2000;
  c.train.selection_schedule = {200, 400, 600, 800};
  return c;
}

ExperimentConfig shelf_preset(const std::string& strategy, std::uint64_t seed,
                              const std::string& out_dir) {
  ExperimentConfig c;
  c.scene = "shelf";
  c.rig = "imbalanced";
  c.initial_train = {8, 40};  // two common-band views
  c.strategy = strategy;
  c.k_per_round = 2;
  c.rounds = 4;
  c.seed = seed;
  c.out_dir = out_dir;
  c.train.total_iters = 4000;
  c.train.selection_schedule = {200, 400, 600, 800};
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j{{"scene", c.scene},
         {"image_size", c.image_size},
         {"resolution", c.resolution},
         {"radius", c.radius},
         {"rig", c.rig},
         {"pool_views", c.pool_views},
         {"elev_lo", c.elev_lo},
         {"elev_hi", c.elev_hi},
         {"test_views", c.test_views},
         {"test_elev_lo", c.test_elev_lo},
         {"test_elev_hi", c.test_elev_hi},
         {"pool_common", c.pool_common},
         {"pool_high", c.pool_high},
         {"pool_low", c.pool_low},
         {"test_common", c.test_common},
         {"test_high", c.test_high},
         {"test_low", c.test_low},
         {"initial_train", c.initial_train},
         {"strategy", c.strategy},
         {"k_per_round", c.k_per_round},
         {"rounds", c.rounds},
         {"pixel_stride", c.pixel_stride},
         {"first_surface_only", c.first_surface_only},
         {"seed", c.seed},
         {"out_dir", c.out_dir},
         {"train", train_to_json(c.train)}};
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig c;
  get_to_if(j, "scene", c.scene);
  get_to_if(j, "image_size", c.image_size);
  get_to_if(j, "resolution", c.resolution);
  get_to_if(j, "radius", c.radius);
  get_to_if(j, "rig", c.rig);
  get_to_if(j, "pool_views", c.pool_views);
  get_to_if(j, "elev_lo", c.elev_lo);
  get_to_if(j, "elev_hi", c.elev_hi);
  get_to_if(j, "test_views", c.test_views);
  get_to_if(j, "test_elev_lo", c.test_elev_lo);
  get_to_if(j, "test_elev_hi", c.test_elev_hi);
  get_to_if(j, "pool_common", c.pool_common);
  get_to_if(j, "pool_high", c.pool_high);
  get_to_if(j, "pool_low", c.pool_low);
  get_to_if(j, "test_common", c.test_common);
  get_to_if(j, "test_high", c.test_high);
  get_to_if(j, "test_low", c.test_low);
  get_to_if(j, "initial_train", c.initial_train);
  get_to_if(j, "strategy", c.strategy);
  get_to_if(j, "k_per_round", c.k_per_round);
  get_to_if(j, "rounds", c.rounds);
  get_to_if(j, "pixel_stride", c.pixel_stride);
  get_to_if(j, "first_surface_only", c.first_surface_only);
  get_to_if(j, "seed", c.seed);
  get_to_if(j, "out_dir", c.out_dir);
  if (j.contains("train")) c.train = train_from_json(j.at("train"));
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

namespace {

SceneSdf make_scene(const ExperimentConfig& c) {
  if (c.scene.size() > 5 && c.scene.substr(c.scene.size() - 5) == ".json")
    return load_scene(c.scene);
  return scene_by_name(c.scene);
}

// Pool views first (ids 0..pool−1), then the test block with its own seed
// stream, so selection never sees a test pose.
Rig make_rig(const ExperimentConfig& c) {
  Rig rig;
  const std::uint64_t test_seed = c.seed ^ kTestRigTag;
  if (c.rig == "hemisphere") {
    for (const CameraPose& p :
         hemisphere_rig(c.pool_views, c.radius, c.elev_lo, c.elev_hi, c.seed,
                        c.image_size, c.image_size)) {
      rig.poses.push_back(p);
      rig.bands.push_back(ViewBand::Common);
    }
    for (const CameraPose& p :
         hemisphere_rig(c.test_views, c.radius, c.test_elev_lo, c.test_elev_hi,
                        test_seed, c.image_size, c.image_size)) {
      rig.poses.push_back(p);
      rig.bands.push_back(ViewBand::Common);
    }
  } else {
    rig = imbalanced_rig(c.pool_common, c.pool_high, c.pool_low, c.radius,
                         c.seed, c.image_size, c.image_size);
    const Rig test = imbalanced_rig(c.test_common, c.test_high, c.test_low,
                                    c.radius, test_seed, c.image_size,
                                    c.image_size);
    rig.poses.insert(rig.poses.end(), test.poses.begin(), test.poses.end());
    rig.bands.insert(rig.bands.end(), test.bands.begin(), test.bands.end());
  }
  return rig;
}

int pool_size(const ExperimentConfig& c) {
  return c.rig == "hemisphere" ? c.pool_views
                               : c.pool_common + c.pool_high + c.pool_low;
}
int test_size(const ExperimentConfig& c) {
  return c.rig == "hemisphere" ? c.test_views
                               : c.test_common + c.test_high + c.test_low;
}

// Per-candidate IG table (dense by view id; non-candidates stay 0).
// fvs/random need no scores and leave the table empty.
std::vector<double> candidate_ig(const ExperimentConfig& c,
                                 const Dataset& dataset, const SbvGrid& sbv,
                                 const FieldGrid& field,
                                 const OccupancyGrid& occ) {
  if (c.strategy == "fvs" || c.strategy == "random") return {};
  std::vector<double> ig(dataset.view_count(), 0.0);
  const std::vector<int> cands = dataset.candidate_ids();
  parallel_for(cands.size(), 1, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const int id = cands[i];
      const CameraPose& pose = dataset.pose(id);
      IgReport rep;
      if (c.strategy == "entropy")
        rep = ig_entropy(id, pose, sbv, c.pixel_stride);
      else if (c.strategy == "variance")
        rep = ig_variance(id, pose, field, occ, c.pixel_stride,
                          c.train.n_samples, c.train.square_weight_variance);
      else
        rep = ig_sbv(id, pose, sbv, c.pixel_stride,
                     c.strategy == "sbv" || c.strategy == "sbv-top",
                     c.first_surface_only);
      ig[id] = rep.ig;
    }
  });
  return ig;
}

std::vector<int> dispatch_select(const ExperimentConfig& c,
                                 SelectionState& sel,
                                 const std::vector<double>& ig,
                                 const Dataset& dataset, int round) {
  std::vector<CameraPose> poses;
  poses.reserve(dataset.view_count());
  for (int id = 0; id < dataset.view_count(); ++id)
    poses.push_back(dataset.pose(id));

  if (c.strategy == "random") {
    Rng rng = stream(c.seed, kSelectTag, static_cast<std::uint64_t>(round));
    return select_random(sel, rng);
  }
  if (c.strategy == "fvs") return select_fvs(sel, poses);
  if (c.strategy == "sbv" || c.strategy == "no-surface")
    return select_distance_topk(sel, ig, poses);
  return select_topk(sel, ig);  // sbv-top, no-surface-top, entropy, variance
}

void write_loss_csv(const std::string& path,
                    const std::vector<LossRow>& history) {
  std::ostringstream out;
  out << "iteration,l_s,l_u,lr,s,wall_ms\n";
  for (const LossRow& r : history)
    out << r.iteration << ',' << g17(r.l_s) << ',' << g17(r.l_u) << ','
        << g17(r.lr) << ',' << g17(r.s) << ',' << g17(r.wall_ms) << '\n';
  write_text(path, out.str());
}

// Fresh full occupancy refresh so evaluation is a pure function of
// (field checkpoint, seed) — reproducible from disk, unlike the training
// grid whose partial-update history would have to be replayed.
OccupancyGrid eval_occupancy(const ExperimentConfig& c, const FieldGrid& field) {
  OccupancyGrid occ(c.resolution, field.bbox());
  occ.refresh_full(field, c.train.tau_occ, c.seed);
  return occ;
}

struct EvalResult {
  std::vector<double> psnr, ssim;
  double mean_psnr = 0, mean_ssim = 0;
  ChamferResult mesh;
};

EvalResult eval_test_split(const ExperimentConfig& c, const SceneSdf& scene,
                           const Dataset& dataset, const FieldGrid& field) {
  const OccupancyGrid occ = eval_occupancy(c, field);
  EvalResult ev;
  for (int id : dataset.test_ids()) {
    const RenderedImage ri =
        render_image(dataset.pose(id), field, occ, c.train.n_samples,
                     c.train.square_weight_variance);
    ev.psnr.push_back(psnr(ri.color, dataset.gt_image(id)));
    ev.ssim.push_back(ssim(ri.color, dataset.gt_image(id)));
  }
  for (double v : ev.psnr) ev.mean_psnr += v;
  for (double v : ev.ssim) ev.mean_ssim += v;
  if (!ev.psnr.empty()) {
    ev.mean_psnr /= ev.psnr.size();
    ev.mean_ssim /= ev.ssim.size();
  }

  const std::vector<Vec3> gt_pts =
      gt_surface_points(scene, 10000, c.seed ^ kGtPointsTag);
  ev.mesh = chamfer(extract_surface_points(field), gt_pts);
  return ev;
}

void write_eval_csvs(const std::string& dir, const Dataset& dataset,
                     const EvalResult& ev) {
  std::ostringstream m;
  m << "view_id,psnr,ssim\n";
  const std::vector<int>& ids = dataset.test_ids();
  for (std::size_t i = 0; i < ids.size(); ++i)
    m << ids[i] << ',' << g17(ev.psnr[i]) << ',' << g17(ev.ssim[i]) << '\n';
  m << "mean," << g17(ev.mean_psnr) << ',' << g17(ev.mean_ssim) << '\n';
  write_text(dir + "/" + kMetricsFile, m.str());

  std::ostringstream mesh;
  mesh << "accuracy,completeness,chamfer\n"
       << g17(ev.mesh.accuracy) << ',' << g17(ev.mesh.completeness) << ','
       << g17(ev.mesh.chamfer) << '\n';
  write_text(dir + "/" + kMeshFile, mesh.str());
}

}  // namespace

RunRecord run_active_loop(const ExperimentConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(config.out_dir);
  write_text(config.out_dir + "/" + kConfigFile, config_to_json(config));

  const SceneSdf scene = make_scene(config);
  const Rig rig = make_rig(config);
  save_rig(config.out_dir + "/" + kRigFile, rig);

  SplitConfig split;
  split.initial_train = config.initial_train;
  const int pool = pool_size(config);
  for (int i = 0; i < test_size(config); ++i) split.test.push_back(pool + i);
  Dataset dataset = Dataset::build(scene, rig, split);

  FieldGrid field(config.resolution);
  field.init_sphere(0.5, Vec3{0, 0, 0}, Vec3{0.5, 0.5, 0.5});
  OccupancyGrid occ(config.resolution);
  SbvGrid sbv(config.resolution);
  TrainState state = make_train_state(field, config.seed);

  SelectionState sel;
  sel.train_ids = dataset.train_ids();
  sel.candidate_ids = dataset.candidate_ids();
  sel.k = config.k_per_round;

  RunRecord rec;
  rec.config = config;

  std::ostringstream sel_csv;
  sel_csv << "round,strategy,tau,picks\n";
  int round = 0;
  for (int t = 1; t <= config.train.total_iters; ++t) {
    occupancy_update(occ, field, state, config.train);
    try {
      train_step(state, config.train, dataset, field, occ);
    } catch (const std::exception& e) {
      throw std::runtime_error("iteration " + std::to_string(t) + ", round " +
                               std::to_string(round) + ": " + e.what());
    }
    if (config.train.sweep_period > 0 && t % config.train.sweep_period == 0)
      sbv.sweep_update(field, dataset.train_poses(), occ, config.seed);

    if (round < config.rounds &&
        t == config.train.selection_schedule[round]) {
      if (round == 0) {  // early checkpoints anchor the heatmap bounds
        save_field(config.out_dir + "/" + kFieldRound1, field);
        save_sbv(config.out_dir + "/" + kSbvRound1, sbv);
      }
      const std::vector<double> ig =
          candidate_ig(config, dataset, sbv, field, occ);

      if (!ig.empty()) {  // per-round candidate report, ranked
        std::vector<int> order = dataset.candidate_ids();
        std::sort(order.begin(), order.end(), [&](int a, int b) {
          if (ig[a] != ig[b]) return ig[a] > ig[b];
          return a < b;
        });
        std::ostringstream igcsv;
        igcsv << "view_id,strategy,ig,rank\n";
        for (std::size_t r = 0; r < order.size(); ++r)
          igcsv << order[r] << ',' << config.strategy << ','
                << g17(ig[order[r]]) << ',' << r + 1 << '\n';
        write_text(config.out_dir + "/ig_round_" + std::to_string(round + 1) +
                       ".csv",
                   igcsv.str());
      }

      std::vector<int> picks;
      try {
        picks = dispatch_select(config, sel, ig, dataset, round);
      } catch (const std::exception& e) {
        throw std::runtime_error("selection round " + std::to_string(round + 1) +
                                 ": " + e.what());
      }
      for (int id : picks) dataset.move_to_train(id);
      rec.picks.push_back(picks);
      rec.tau_history.push_back(sel.tau);

      sel_csv << round + 1 << ',' << config.strategy << ',' << g17(sel.tau)
              << ',';
      for (std::size_t i = 0; i < picks.size(); ++i)
        sel_csv << (i ? ";" : "") << picks[i];
      sel_csv << '\n';

      state.warmup_anchor = t;  // selection restarts the sampling warm-up
      ++round;
    }
  }

  save_field(config.out_dir + "/" + kFieldFinal, field);
  save_sbv(config.out_dir + "/" + kSbvFinal, sbv);
  write_loss_csv(config.out_dir + "/" + kLossFile, state.history);
  write_text(config.out_dir + "/" + kSelectionFile, sel_csv.str());

  const EvalResult ev = eval_test_split(config, scene, dataset, field);
  write_eval_csvs(config.out_dir, dataset, ev);

  rec.final_train_ids = dataset.train_ids();
  rec.test_ids = dataset.test_ids();
  rec.test_psnr = ev.psnr;
  rec.test_ssim = ev.ssim;
  rec.mean_psnr = ev.mean_psnr;
  rec.mean_ssim = ev.mean_ssim;
  rec.mesh = ev.mesh;
  rec.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  return rec;
}

RunRecord eval_run(const std::string& run_dir) {
  const ExperimentConfig config = load_config(run_dir + "/" + kConfigFile);
  const SceneSdf scene = make_scene(config);
  const Rig rig = make_rig(config);

  SplitConfig split;
  split.initial_train = config.initial_train;
  const int pool = pool_size(config);
  for (int i = 0; i < test_size(config); ++i) split.test.push_back(pool + i);
  Dataset dataset = Dataset::build(scene, rig, split);

  const FieldGrid field = load_field(run_dir + "/" + kFieldFinal);
  const EvalResult ev = eval_test_split(config, scene, dataset, field);
  write_eval_csvs(run_dir, dataset, ev);

  RunRecord rec;
  rec.config = config;
  rec.test_ids = dataset.test_ids();
  rec.test_psnr = ev.psnr;
  rec.test_ssim = ev.ssim;
  rec.mean_psnr = ev.mean_psnr;
  rec.mean_ssim = ev.mean_ssim;
  rec.mesh = ev.mesh;
  return rec;
}

std::vector<ComparisonRow> run_comparison(
    const ExperimentConfig& base, const std::vector<std::string>& strategies,
    const std::vector<std::uint64_t>& seeds, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<ComparisonRow> rows;
  for (const std::string& strategy : strategies) {
    std::vector<double> psnrs, ssims, chamfers;
    for (std::uint64_t seed : seeds) {
      ExperimentConfig c = base;
      c.strategy = strategy;
      c.seed = seed;
      c.out_dir = out_dir + "/" + strategy + "_seed" + std::to_string(seed);
      const RunRecord rec = run_active_loop(c);
      psnrs.push_back(rec.mean_psnr);
      ssims.push_back(rec.mean_ssim);
      chamfers.push_back(rec.mesh.chamfer);
    }
    const auto mean_std = [](const std::vector<double>& v) {
      double mean = 0;
      for (double x : v) mean += x;
      mean /= v.size();
      double var = 0;
      for (double x : v) var += (x - mean) * (x - mean);
      return std::pair<double, double>{mean, std::sqrt(var / v.size())};
    };
    ComparisonRow row;
    row.strategy = strategy;
    std::tie(row.psnr_mean, row.psnr_std) = mean_std(psnrs);
    std::tie(row.ssim_mean, row.ssim_std) = mean_std(ssims);
    std::tie(row.chamfer_mean, row.chamfer_std) = mean_std(chamfers);
    rows.push_back(row);
  }

  std::ostringstream out;
  out << "strategy,psnr_mean,psnr_std,ssim_mean,ssim_std,chamfer_mean,"
         "chamfer_std\n";
  for (const ComparisonRow& r : rows)
    out << r.strategy << ',' << g17(r.psnr_mean) << ',' << g17(r.psnr_std)
        << ',' << g17(r.ssim_mean) << ',' << g17(r.ssim_std) << ','
        << g17(r.chamfer_mean) << ',' << g17(r.chamfer_std) << '\n';
  write_text(out_dir + "/summary.csv", out.str());
  return rows;
}

std::vector<std::string> emit_heatmaps(const std::string& run_dir,
                                       std::vector<int> view_ids) {
  const ExperimentConfig config = load_config(run_dir + "/" + kConfigFile);
  const Rig rig = load_rig(run_dir + "/" + kRigFile);
  const SbvGrid sbv_early = load_sbv(run_dir + "/" + kSbvRound1);
  const SbvGrid sbv_final = load_sbv(run_dir + "/" + kSbvFinal);

  if (view_ids.empty()) {
    const int pool = pool_size(config);
    for (int i = 0; i < test_size(config); ++i) view_ids.push_back(pool + i);
  }

  const bool gated =
      config.strategy != "no-surface" && config.strategy != "no-surface-top";
  const auto report = [&](const SbvGrid& grid, int id) {
    return ig_sbv(id, rig.poses.at(id), grid, /*pixel_stride=*/1, gated,
                  config.first_surface_only);
  };

  // Fig.-style global bounds: min over the final maps, max over the early.
  std::vector<IgReport> early, final;
  for (int id : view_ids) {
    early.push_back(report(sbv_early, id));
    final.push_back(report(sbv_final, id));
  }
  double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
  for (const IgReport& r : final)
    for (double v : r.pixel_map) gmin = std::min(gmin, v);
  for (const IgReport& r : early)
    for (double v : r.pixel_map) gmax = std::max(gmax, v);

  const std::string dir = run_dir + "/heatmaps";
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (std::size_t i = 0; i < view_ids.size(); ++i) {
    const std::string id = std::to_string(view_ids[i]);
    const struct {
      const IgReport& rep;
      std::string name;
    } jobs[] = {{early[i], "early"}, {final[i], "final"}};
    for (const auto& job : jobs) {
      std::string p = dir + "/view" + id + "_" + job.name + "_intra.ppm";
      write_ppm(p, ig_heatmap_intra(job.rep));
      written.push_back(p);
      p = dir + "/view" + id + "_" + job.name + "_global.ppm";
      write_ppm(p, ig_heatmap_global(job.rep, gmin, gmax));
      written.push_back(p);
    }
  }
  return written;
}

}  // namespace sbv
