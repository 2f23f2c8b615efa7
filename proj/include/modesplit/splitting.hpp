#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "modesplit/common.hpp"
#include "modesplit/states.hpp"

namespace modesplit {

// Beamsplitter amplitudes: an input creation operator on the kept side maps
// to r (straight) and t (crossed); the companion input maps to -conj(t) and
// conj(r). Unitarity requires |r|^2 + |t|^2 = 1.
struct SplitterParams {
  cplx r;
  cplx t;

  bool is_unitary(double tol = kNormTol) const;
};

// One column of a multi-port mode network: amplitudes alpha_k for routing an
// input creation operator to k output modes. Isometry requires
// sum |alpha_k|^2 = 1.
struct NetworkColumn {
  std::vector<cplx> alphas;

  int num_modes() const { return static_cast<int>(alphas.size()); }
  bool is_isometric(double tol = kNormTol) const;
};

// Fock amplitudes of several two-level modes with fixed per-mode particle
// totals. Indexed by the per-mode lower-level occupations (n_1, ..., n_k),
// n_i in [0, totals[i]], stored dense with the last mode varying fastest.
class JointFockState {
 public:
  explicit JointFockState(std::vector<int> mode_totals);

  int num_modes() const { return static_cast<int>(totals_.size()); }
  const std::vector<int>& mode_totals() const { return totals_; }
  int total_particles() const;

  Eigen::Index size() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }

  Eigen::Index flat_index(std::span<const int> lower_counts) const;
  std::vector<int> unflatten(Eigen::Index index) const;

  cplx amplitude(std::span<const int> lower_counts) const;
  void set_amplitude(std::span<const int> lower_counts, cplx value);

  double norm() const { return amps_.norm(); }

 private:
  std::vector<int> totals_;
  std::vector<Eigen::Index> strides_;
  Eigen::VectorXcd amps_;
};

cplx inner(const JointFockState& a, const JointFockState& b);

// Superposition of sectors produced by splitting: per sector key (the tuple
// of per-mode particle totals), a complex weight and the normalized state
// conditioned on that outcome. Keys with exactly zero weight are omitted.
class SectoredState {
 public:
  struct Sector {
    cplx weight;
    JointFockState state;
  };

  explicit SectoredState(int total_particles);

  int total_particles() const { return total_; }
  const std::map<std::vector<int>, Sector>& sectors() const { return sectors_; }

  void add_sector(std::vector<int> key, cplx weight, JointFockState state);

  // Sum of |weight|^2 over all sectors.
  double total_probability() const;

 private:
  int total_;
  std::map<std::vector<int>, Sector> sectors_;
};

// Projection onto one sector: outcome probability |weight|^2 and the
// post-measurement state. A valid but absent sector gives probability zero
// and no state.
struct SectorProjection {
  double probability = 0.0;
  std::optional<JointFockState> state;
};

// Schmidt spectrum of a bipartition. Coefficients are sorted descending;
// exact zeros (and, on the SVD route, values below kRankTol) are dropped.
// Labels give the occupation pair ((n_C, N_C - n_C), (n_D, N_D - n_D)) per
// coefficient where a closed form provides them; the numerical SVD route
// leaves them empty since degenerate spectra admit no canonical labeling.
struct SchmidtDecomposition {
  std::vector<double> coefficients;
  std::vector<std::pair<int, int>> left_labels;
  std::vector<std::pair<int, int>> right_labels;
};

// Split one spatial mode into two on a beamsplitter, decomposed by the
// sector of local particle counts (N_C, N_D). Input must be normalized.
SectoredState beamsplit(const TwoModeState& state, const SplitterParams& params);

// Split into num_modes() output modes of a network column.
SectoredState multimode_split(const TwoModeState& state, const NetworkColumn& column);

// Measurement of the local particle counts. The key must have the right
// number of modes, non-negative entries and the correct total.
SectorProjection project_sector(const SectoredState& state, std::span<const int> key);

// Closed-form Schmidt spectrum of |n, N-n> split into mode sizes
// (left_total, right_total): lambda_{n_C, n_D} =
// sqrt(C(left, n_C) C(right, n_D) / C(N, n)), with occupation labels.
SchmidtDecomposition mode_schmidt_coeffs(int n_lower, int total_particles,
                                         int left_total, int right_total);

// Numerical Schmidt spectrum of a first-quantization state across the
// bipartition (particles 1..left_particles | rest).
SchmidtDecomposition particle_schmidt(const ParticleState& state, int left_particles);

// Numerical Schmidt spectrum of a two-mode joint state via SVD of its
// coefficient matrix.
SchmidtDecomposition schmidt_of_joint(const JointFockState& state);

// The two-mode state a lossless splitting protocol targets: amplitudes
// phi_n carried onto the (left_total, right_total) sector basis with the
// closed-form Schmidt coefficients.
JointFockState ideal_mode_split(const TwoModeState& state, int left_total,
                                int right_total);

}  // namespace modesplit
