#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "modesplit/mixing.hpp"
#include "modesplit/splitting.hpp"
#include "modesplit/states.hpp"

namespace modesplit {

// Repeated mode mixing and particle-number measurement until the counts hit
// the target split (in either order). Iteration i uses
// schedule[(i - 1) % schedule.size()]; every splitter must be unitary and
// non-trivial (r != 0 and t != 0). If the starting counts (N, 0) already
// match the target, the run accepts immediately with zero iterations.
struct ProtocolConfig {
  std::pair<int, int> target;
  std::vector<SplitterParams> schedule;
  int max_iterations = 50;
  std::uint64_t rng_seed = 0;
  // Track the full joint state alongside the sampled counts and score the
  // output against it. Costs a dense simulation per iteration; intended for
  // modest particle numbers.
  bool cross_check = false;
};

struct ProtocolResult {
  bool success = false;
  int iterations_used = 0;
  std::vector<std::pair<int, int>> sector_trajectory;  // measured counts per iteration
  std::optional<JointFockState> output_state;          // on the target-labeled split
  // |<target | output>|: computed from the tracked joint state when
  // cross_check is on, and 1 by construction otherwise.
  double fidelity = 0.0;
};

struct EnsembleStats {
  long trials = 0;
  long failures = 0;
  std::vector<long> successes_by_iteration;  // index = iterations used
  double early_acceptance_rate = 0.0;        // finished within one iteration
  double mean_iterations = 0.0;              // over successes; 0 if none
  double failure_fraction = 0.0;
  double min_fidelity = 0.0;                 // over successes; 0 if none
  double mean_fidelity = 0.0;
};

// One protocol run. Sampling is reproducible: the random stream depends only
// on (config.rng_seed, trial_index).
ProtocolResult run_trial(const TwoModeState& input, const ProtocolConfig& config,
                         std::uint64_t trial_index);

// run_trial with trial index 0.
ProtocolResult run_once(const TwoModeState& input, const ProtocolConfig& config);

// Independent trials with indices 0..trials-1. Statistics for a single trial
// match run_once.
EnsembleStats run_ensemble(const TwoModeState& input, const ProtocolConfig& config,
                           long trials);

// Lower bound on the probability of reaching the target split from the given
// counts within two mixing steps: route everything into one mode, then split
// to the target. Nonzero for every non-trivial splitter.
double two_step_bound(int from_left, int from_right, int target_left,
                      int target_right, const SplitterParams& params);

}  // namespace modesplit
