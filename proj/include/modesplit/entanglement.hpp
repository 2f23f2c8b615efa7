#pragma once

#include <Eigen/Dense>

#include "modesplit/common.hpp"
#include "modesplit/splitting.hpp"
#include "modesplit/states.hpp"

namespace modesplit {

// Shannon entropy, in bits, of the squared Schmidt coefficients.
double schmidt_entropy(const SchmidtDecomposition& decomposition);

// Two-qubit concurrence of a physical 4x4 density matrix.
double concurrence(const DensityMatrix& rho);

// Tangle of a pure two-mode state across its modes: 2 (1 - tr rho_left^2).
// Requires a normalized input.
double tangle_pure(const JointFockState& state);

// Spin squeezing of a normalized state: the smallest variance orthogonal to
// the mean spin direction, scaled against the coherent-state value,
// xi^2 = 4 min_var / N. The orthogonal plane needs a mean spin direction, so
// this is undefined when <J> vanishes.
struct SqueezingReport {
  double xi_squared = 0.0;
  Eigen::Vector3d mean_direction;      // unit vector along <J>
  double min_orthogonal_variance = 0.0;
};

SqueezingReport squeezing(const TwoModeState& state);

// Lower bound on the tangle of the split state implied by squeezing:
// max(left, right) * ((1 - xi^2) / (N - 1))^2, zero when xi^2 >= 1.
double squeezing_tangle_bound(double xi_squared, int total_particles, int left_total,
                              int right_total);

// Monogamy ladder for one state and one split: the tangle of the split
// state, the pair-concurrence bound max(left, right) * C(rho_pair)^2, and
// the squeezing bound when the mean spin does not vanish.
struct BoundReport {
  double tangle = 0.0;
  double monogamy_bound = 0.0;
  double pair_concurrence = 0.0;
  bool squeezing_defined = false;
  double xi_squared = 0.0;
  double squeezing_bound = 0.0;
  bool monogamy_satisfied = false;
  bool squeezing_satisfied = false;
};

BoundReport entanglement_bounds(const TwoModeState& state, int left_total,
                                int right_total);

// One-axis-twisted state: binomial amplitudes with the quadratic phase
// exp(-i theta (n - N/2)^2).
TwoModeState one_axis_twist(int total_particles, double theta);

}  // namespace modesplit
