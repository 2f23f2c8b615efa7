#include "modesplit/protocol.hpp"

#include <cmath>

#include "modesplit/combinatorics.hpp"
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace modesplit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform doubles built from raw engine words; the standard distributions
// are implementation-defined, which would break cross-platform
// reproducibility of sampled trajectories.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial)
      : engine_(splitmix64(seed ^ splitmix64(trial + 1))) {}

  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

void validate_config(const TwoModeState& input, const ProtocolConfig& config) {
  if (!input.is_normalized())
    throw std::domain_error("protocol: input state is not normalized");
  const int n = input.total_particles();
  if (config.target.first < 0 || config.target.second < 0 ||
      config.target.first + config.target.second != n)
    throw std::domain_error("protocol: target split does not sum to the particle count");
  if (config.schedule.empty())
    throw std::domain_error("protocol: empty splitter schedule");
  for (const SplitterParams& p : config.schedule) {
    if (!p.is_unitary())
      throw std::domain_error("protocol: splitter is not unitary");
    if (std::abs(p.r) <= kNormTol || std::abs(p.t) <= kNormTol)
      throw std::domain_error("protocol: trivial splitter cannot reach other sectors");
  }
  if (config.max_iterations < 0)
    throw std::domain_error("protocol: negative iteration limit");
}

// Cumulative distribution over the next left-mode count, conditioned on the
// current counts and the splitter in use.
using DistCache = std::map<std::pair<int, std::size_t>, std::vector<double>>;

const std::vector<double>& sector_distribution(int left, int total,
                                               std::size_t schedule_index,
                                               const SplitterParams& params,
                                               DistCache& cache) {
  const auto key = std::make_pair(left, schedule_index);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<double> cumulative(total + 1);
  double sum = 0.0;
  for (int k = 0; k <= total; ++k) {
    sum += std::norm(mixing_coefficient(left, total - left, k, total - k, params));
    cumulative[k] = sum;
  }
  for (double& c : cumulative) c /= sum;
  cumulative[total] = 1.0;
  return cache.emplace(key, std::move(cumulative)).first->second;
}

// The tracked joint state restricted to the measured sector, rearranged onto
// the (target_left, target_right) labeling. mirrored swaps the two modes.
JointFockState boxed_sector(const JointModeState& joint, int target_left,
                            int target_right, bool mirrored) {
  JointFockState box({target_left, target_right});
  for (int x = 0; x <= target_left; ++x)
    for (int y = 0; y <= target_right; ++y) {
      const std::array<int, 4> occ =
          mirrored ? std::array<int, 4>{y, target_right - y, x, target_left - x}
                   : std::array<int, 4>{x, target_left - x, y, target_right - y};
      const int counts[2] = {x, y};
      box.set_amplitude(counts, joint.amplitude(occ));
    }
  return box;
}

ProtocolResult run_trial_impl(const TwoModeState& input, const ProtocolConfig& config,
                              std::uint64_t trial_index, DistCache& cache) {
  validate_config(input, config);
  const int n = input.total_particles();
  const auto [target_left, target_right] = config.target;
  const std::pair<int, int> mirror{target_right, target_left};

  TrialRng rng(config.rng_seed, trial_index);
  ProtocolResult result;

  std::optional<JointModeState> joint;
  if (config.cross_check) {
    joint.emplace(n);
    for (int k = 0; k <= n; ++k)
      joint->set_amplitude({k, n - k, 0, 0}, input.amplitude(k));
  }

  auto finish = [&](std::pair<int, int> measured, int iterations) {
    result.success = true;
    result.iterations_used = iterations;
    result.output_state = ideal_mode_split(input, target_left, target_right);
    if (joint) {
      const bool mirrored = measured == mirror && measured != config.target;
      const JointFockState box =
          boxed_sector(*joint, target_left, target_right, mirrored);
      result.fidelity = std::abs(inner(box, *result.output_state));
    } else {
      result.fidelity = 1.0;
    }
  };

  std::pair<int, int> sector{n, 0};
  if (sector == config.target || sector == mirror) {
    finish(sector, 0);
    return result;
  }

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    const std::size_t idx = (iter - 1) % config.schedule.size();
    const SplitterParams& params = config.schedule[idx];
    const std::vector<double>& cumulative =
        sector_distribution(sector.first, n, idx, params, cache);

    const double u = rng.uniform();
    int k = 0;
    while (k < n && cumulative[k] <= u) ++k;

    sector = {k, n - k};
    result.sector_trajectory.push_back(sector);

    if (joint) {
      *joint = evolve_joint(*joint, params);
      // Local particle counts were measured: keep the sector, renormalize.
      for (Eigen::Index i = 0; i < joint->size(); ++i) {
        const auto& occ = joint->basis()[i];
        if (occ[0] + occ[1] != k) joint->amplitudes()(i) = 0.0;
      }
      const double norm = joint->norm();
      if (norm <= std::numeric_limits<double>::min())
        throw std::runtime_error("protocol: tracked state vanished after projection");
      joint->amplitudes() /= norm;
    }

    if (sector == config.target || sector == mirror) {
      finish(sector, iter);
      return result;
    }
  }
  result.iterations_used = config.max_iterations;
  return result;
}

}  // namespace

ProtocolResult run_trial(const TwoModeState& input, const ProtocolConfig& config,
                         std::uint64_t trial_index) {
  DistCache cache;
  return run_trial_impl(input, config, trial_index, cache);
}

ProtocolResult run_once(const TwoModeState& input, const ProtocolConfig& config) {
  return run_trial(input, config, 0);
}

EnsembleStats run_ensemble(const TwoModeState& input, const ProtocolConfig& config,
                           long trials) {
  if (trials < 1) throw std::domain_error("run_ensemble: need at least one trial");
  DistCache cache;
  EnsembleStats stats;
  stats.trials = trials;
  stats.successes_by_iteration.assign(config.max_iterations + 1, 0);
  stats.min_fidelity = std::numeric_limits<double>::infinity();
  double fidelity_sum = 0.0;
  long successes = 0;
  long iteration_sum = 0;

  for (long t = 0; t < trials; ++t) {
    const ProtocolResult r =
        run_trial_impl(input, config, static_cast<std::uint64_t>(t), cache);
    if (!r.success) {
      ++stats.failures;
      continue;
    }
    ++successes;
    iteration_sum += r.iterations_used;
    ++stats.successes_by_iteration[r.iterations_used];
    fidelity_sum += r.fidelity;
    stats.min_fidelity = std::min(stats.min_fidelity, r.fidelity);
  }

  stats.failure_fraction = double(stats.failures) / double(trials);
  long early = stats.successes_by_iteration[0];
  if (config.max_iterations >= 1) early += stats.successes_by_iteration[1];
  stats.early_acceptance_rate = double(early) / double(trials);
  if (successes > 0) {
    stats.mean_iterations = double(iteration_sum) / double(successes);
    stats.mean_fidelity = fidelity_sum / double(successes);
  } else {
    stats.min_fidelity = 0.0;
  }
  return stats;
}

double two_step_bound(int from_left, int from_right, int target_left,
                      int target_right, const SplitterParams& params) {
  if (from_left < 0 || from_right < 0 || target_left < 0 || target_right < 0)
    throw std::domain_error("two_step_bound: negative sector entry");
  const int n = from_left + from_right;
  if (target_left + target_right != n)
    throw std::domain_error("two_step_bound: sector totals differ");
  if (!params.is_unitary())
    throw std::domain_error("two_step_bound: |r|^2 + |t|^2 must be 1");
  if (std::abs(params.r) <= kNormTol || std::abs(params.t) <= kNormTol)
    throw std::domain_error("two_step_bound: trivial splitter cannot reach other sectors");
  const cplx through = std::sqrt(binomial(n, from_left)) *
                       ipow(params.r, from_left) *
                       ipow(-std::conj(params.t), from_right);
  const cplx out = std::sqrt(binomial(n, target_left)) *
                   ipow(params.r, target_left) * ipow(params.t, target_right);
  return std::norm(through * out);
}

}  // namespace modesplit
