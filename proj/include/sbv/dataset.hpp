#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbv/geometry.hpp"
#include "sbv/image.hpp"
#include "sbv/scenes.hpp"

namespace sbv {

enum class Split { Train, Candidate, Test };

struct SplitConfig {
  std::vector<int> initial_train;
  std::vector<int> test;
};

// Rendered ground truth for every rig view plus split bookkeeping. Poses are
// always readable; ground-truth images of *candidate* views are not — only
// the pose of an unselected view may inform selection, so gt_image throws
// until the view is moved to the train split. Reads are flagged so tests can
// audit exactly which images a pipeline consumed.
class Dataset {
 public:
  static Dataset build(const SceneSdf& scene, const Rig& rig,
                       const SplitConfig& split);

  int view_count() const { return static_cast<int>(poses_.size()); }
  const CameraPose& pose(int id) const { return poses_.at(id); }
  ViewBand band(int id) const { return bands_.at(id); }
  Split split_of(int id) const { return splits_.at(id); }

  const std::vector<int>& train_ids() const { return train_ids_; }
  const std::vector<int>& candidate_ids() const { return candidate_ids_; }
  const std::vector<int>& test_ids() const { return test_ids_; }

  // Throws std::logic_error for candidate views; flags the read otherwise.
  const Image& gt_image(int id) const;
  bool gt_accessed(int id) const { return accessed_.at(id) != 0; }

  void move_to_train(int id);  // candidate -> train

  std::vector<CameraPose> train_poses() const;

  // Offline export of every rendered view; bypasses the access flags on
  // purpose (this is data emission, not selection input).
  void export_images(const std::string& dir) const;

 private:
  std::vector<CameraPose> poses_;
  std::vector<ViewBand> bands_;
  std::vector<Image> images_;
  std::vector<Split> splits_;
  std::vector<int> train_ids_, candidate_ids_, test_ids_;
  mutable std::vector<std::uint8_t> accessed_;
};

// Writes view_###.ppm for every view plus the rig as JSON (offline export;
// the active loop itself never touches candidate images).
void save_dataset(const Dataset& dataset, const Rig& rig,
                  const std::string& dir);

}  // namespace sbv
