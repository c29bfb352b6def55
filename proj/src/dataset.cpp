#include "sbv/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace sbv {

namespace {

std::string split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Candidate: return "candidate";
    case Split::Test: return "test";
  }
  return "?";
}

}  // namespace

Dataset Dataset::build(const SceneSdf& scene, const Rig& rig,
                       const SplitConfig& split) {
  const int n = static_cast<int>(rig.poses.size());
  Dataset d;
  d.poses_ = rig.poses;
  d.bands_ = rig.bands;
  d.splits_.assign(n, Split::Candidate);
  d.accessed_.assign(n, 0);

  const auto assign = [&](const std::vector<int>& ids, Split s) {
    for (int id : ids) {
      if (id < 0 || id >= n)
        throw std::invalid_argument("split id " + std::to_string(id) +
                                    " outside rig of " + std::to_string(n) +
                                    " views");
      if (d.splits_[id] != Split::Candidate)
        throw std::invalid_argument("view " + std::to_string(id) +
                                    " assigned to two splits");
      d.splits_[id] = s;
    }
  };
  assign(split.initial_train, Split::Train);
  assign(split.test, Split::Test);

  d.train_ids_ = split.initial_train;
  d.test_ids_ = split.test;
  for (int id = 0; id < n; ++id)
    if (d.splits_[id] == Split::Candidate) d.candidate_ids_.push_back(id);

  d.images_.reserve(n);
  for (int id = 0; id < n; ++id)
    d.images_.push_back(render_gt(scene, rig.poses[id]));
  return d;
}

const Image& Dataset::gt_image(int id) const {
  if (splits_.at(id) == Split::Candidate)
    throw std::logic_error(
        "ground truth of candidate view " + std::to_string(id) +
        " is off-limits until the view is selected (poses only)");
  accessed_[id] = 1;
  return images_[id];
}

void Dataset::move_to_train(int id) {
  if (splits_.at(id) != Split::Candidate)
    throw std::logic_error("view " + std::to_string(id) + " is in the " +
                           split_name(splits_[id]) +
                           " split; only candidates can be promoted");
  splits_[id] = Split::Train;
  candidate_ids_.erase(
      std::remove(candidate_ids_.begin(), candidate_ids_.end(), id),
      candidate_ids_.end());
  train_ids_.push_back(id);
}

std::vector<CameraPose> Dataset::train_poses() const {
  std::vector<CameraPose> out;
  out.reserve(train_ids_.size());
  for (int id : train_ids_) out.push_back(poses_[id]);
  return out;
}

void Dataset::export_images(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  for (std::size_t id = 0; id < images_.size(); ++id) {
    char name[64];
    std::snprintf(name, sizeof(name), "view_%03zu_%s.ppm", id,
                  split_name(splits_[id]).c_str());
    write_ppm(dir + "/" + name, images_[id]);
  }
}

void save_dataset(const Dataset& dataset, const Rig& rig,
                  const std::string& dir) {
  std::filesystem::create_directories(dir);
  dataset.export_images(dir);
  save_rig(dir + "/rig.json", rig);
}

}  // namespace sbv
