#include "sbv/nbv.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "sbv/errors.hpp"

namespace sbv {

namespace {

void require_candidates(const SelectionState& state) {
  if (state.k < 0 ||
      state.candidate_ids.size() < static_cast<std::size_t>(state.k))
    throw InsufficientCandidates("selection needs " + std::to_string(state.k) +
                                 " candidates, have " +
                                 std::to_string(state.candidate_ids.size()));
}

// Candidate ids ordered by descending IG, ties by lower id.
std::vector<int> ig_order(const SelectionState& state,
                          const std::vector<double>& ig) {
  std::vector<int> order = state.candidate_ids;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ig[a] != ig[b]) return ig[a] > ig[b];
    return a < b;
  });
  return order;
}

void commit_picks(SelectionState& state, const std::vector<int>& picks) {
  for (int id : picks) {
    state.candidate_ids.erase(
        std::remove(state.candidate_ids.begin(), state.candidate_ids.end(), id),
        state.candidate_ids.end());
    state.train_ids.push_back(id);
  }
}

}  // namespace

std::vector<int> select_distance_topk(SelectionState& state,
                                      const std::vector<double>& ig,
                                      const std::vector<CameraPose>& poses) {
  require_candidates(state);
  std::vector<int> order = ig_order(state, ig);

  std::vector<int> picks;
  std::vector<int> anchors = state.train_ids;  // running train set + picks
  while (static_cast<int>(picks.size()) < state.k) {
    int chosen = -1;
    if (picks.empty()) {
      chosen = order.front();  // first pick: plain argmax, no filter
    } else {
      while (chosen < 0) {
        for (int id : order) {
          bool far_enough = true;
          for (int anchor : anchors)
            if (camera_distance(poses[id], poses[anchor]) < state.tau) {
              far_enough = false;
              break;
            }
          if (far_enough) {
            chosen = id;
            break;
          }
        }
        if (chosen < 0) state.tau *= state.tau_decay;
      }
    }
    picks.push_back(chosen);
    anchors.push_back(chosen);
    order.erase(std::remove(order.begin(), order.end(), chosen), order.end());
  }

  commit_picks(state, picks);
  return picks;
}

std::vector<int> select_topk(SelectionState& state,
                             const std::vector<double>& ig) {
  require_candidates(state);
  std::vector<int> order = ig_order(state, ig);
  std::vector<int> picks(order.begin(), order.begin() + state.k);
  commit_picks(state, picks);
  return picks;
}

std::vector<int> select_random(SelectionState& state, Rng& rng) {
  require_candidates(state);
  std::vector<int> pool = state.candidate_ids;
  std::vector<int> picks;
  for (int i = 0; i < state.k; ++i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(pool.size()));
    picks.push_back(pool[j]);
    pool.erase(pool.begin() + j);
  }
  commit_picks(state, picks);
  return picks;
}

std::vector<int> select_fvs(SelectionState& state,
                            const std::vector<CameraPose>& poses) {
  require_candidates(state);
  std::vector<int> pool = state.candidate_ids;
  std::sort(pool.begin(), pool.end());  // tie scan visits lower ids first
  std::vector<int> anchors = state.train_ids;

  std::vector<int> picks;
  for (int i = 0; i < state.k; ++i) {
    int best = -1;
    double best_d = -1.0;
    for (int id : pool) {
      double d = std::numeric_limits<double>::infinity();
      for (int anchor : anchors)
        d = std::min(d, camera_distance(poses[id], poses[anchor]));
      if (d > best_d) {  // strict: equal min-distances keep the lower id
        best_d = d;
        best = id;
      }
    }
    picks.push_back(best);
    anchors.push_back(best);
    pool.erase(std::remove(pool.begin(), pool.end(), best), pool.end());
  }

  commit_picks(state, picks);
  return picks;
}

}  // namespace sbv
