#pragma once

#include <vector>

#include "sbv/geometry.hpp"
#include "sbv/rng.hpp"

namespace sbv {

// Bookkeeping for one active-learning run. View ids index into the dataset's
// pose list; `ig` arguments below are dense per-view-id score tables.
struct SelectionState {
  std::vector<int> train_ids;
  std::vector<int> candidate_ids;
  double tau = 1.732;        // distance threshold, persisted across rounds
  double tau_decay = 0.95;
  int k = 1;                 // views selected per round
};

// Multiple-NBV selection: the first pick is the unfiltered global IG argmax;
// each later pick is the highest-IG candidate at Euclidean distance >= tau
// from every running train view and earlier pick, relaxing tau <- 0.95*tau
// whenever nothing qualifies. Picks move from candidate_ids to train_ids;
// the relaxed tau stays in the state. Ties always break to the lower id.
std::vector<int> select_distance_topk(SelectionState& state,
                                      const std::vector<double>& ig,
                                      const std::vector<CameraPose>& poses);

// The K highest-IG candidates (ablation without the distance constraint).
std::vector<int> select_topk(SelectionState& state,
                             const std::vector<double>& ig);

// Uniform without replacement.
std::vector<int> select_random(SelectionState& state, Rng& rng);

// Greedy farthest-point sampling: each pick maximizes the minimum camera
// distance to train views and earlier picks.
std::vector<int> select_fvs(SelectionState& state,
                            const std::vector<CameraPose>& poses);

}  // namespace sbv
