#pragma once

#include <Eigen/Dense>
#include <string_view>

#include "modesplit/common.hpp"

namespace modesplit {

// State of N identical two-level bosons occupying a single spatial mode,
// expanded over the occupation basis {|n, N-n>}: n particles in the lower
// internal level, N-n in the upper. Amplitudes are indexed by n = 0..N.
//
// The constructor checks only the amplitude count; norm is checked where a
// normalized state is actually required (factories, protocol, CLI entry
// points), so that intermediate results of ladder operators may be carried
// around unnormalized.
class TwoModeState {
 public:
  TwoModeState(int total_particles, Eigen::VectorXcd amplitudes);

  int total_particles() const { return total_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  cplx amplitude(int n_lower) const;

  double norm() const { return amps_.norm(); }
  bool is_normalized(double tol = kNormTol) const;

 private:
  int total_;
  Eigen::VectorXcd amps_;
};

// First-quantization state of N pseudo-labeled two-level particles, 2^N
// amplitudes. Basis index convention: particle 1 holds the most significant
// bit, bit value 0 means the lower internal level.
class ParticleState {
 public:
  ParticleState(int num_particles, Eigen::VectorXcd amplitudes);

  int num_particles() const { return particles_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  double norm() const { return amps_.norm(); }

 private:
  int particles_;
  Eigen::VectorXcd amps_;
};

// Density matrix with physicality enforced at construction: square,
// Hermitian, unit trace, eigenvalues >= -tol.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd m, double tol = kNormTol);

  const Eigen::MatrixXcd& matrix() const { return m_; }
  int dimension() const { return static_cast<int>(m_.rows()); }

 private:
  Eigen::MatrixXcd m_;
};

enum class Ladder {
  kLowerCreate,      // add one particle to the lower level
  kUpperCreate,      // add one particle to the upper level
  kLowerAnnihilate,  // remove one particle from the lower level
  kUpperAnnihilate,  // remove one particle from the upper level
};

// Mean vector and second moments of the collective spin (Jx, Jy, Jz).
// Convention: the lower internal level is the -1 eigenstate of the
// single-particle z operator, so |N, 0> has <Jz> = -N/2.
struct CollectiveSpinMoments {
  Eigen::Vector3d mean;
  Eigen::Matrix3cd second_moments;  // <J_a J_b>

  // Symmetrized covariance: Re<J_a J_b> - <J_a><J_b>.
  Eigen::Matrix3d covariance() const;
};

// |n, N-n>: n particles in the lower level out of N total.
TwoModeState make_fock(int n_lower, int total_particles);

// Equal-amplitude expansion of each |n, N-n> over the C(N, n) bit strings
// with N-n ones. Requires N <= kMaxDenseParticles.
ParticleState to_first_quantization(const TwoModeState& state);

// Symmetrized first-quantization state for a bit pattern such as "0011"
// ('0' = lower level). Requires pattern length <= kMaxDenseParticles.
ParticleState symmetrize(std::string_view pattern);

// Overlaps <n, N-n | psi> for n = 0..N.
Eigen::VectorXcd symmetric_projection(const ParticleState& state);

// Creation / annihilation of a single particle in one internal level.
// Returns a state with N+1 (creation) or N-1 (annihilation) particles,
// generally unnormalized. Annihilating the vacuum gives the zero vector.
TwoModeState apply_ladder(const TwoModeState& state, Ladder op);

// Reduced state of any pair of particles (independent of the pair by
// symmetry), in the basis {|00>, |01>, |10>, |11>}. Closed form, no 2^N
// expansion. Requires N >= 2 and a normalized input.
DensityMatrix two_particle_rdm(const TwoModeState& state);

// Collective spin moments of a normalized state.
CollectiveSpinMoments collective_spin(const TwoModeState& state);

// Matrix of a collective spin component on the occupation basis, (N+1)^2.
// axis is 'x', 'y' or 'z'.
Eigen::MatrixXcd spin_operator(char axis, int total_particles);

}  // namespace modesplit
