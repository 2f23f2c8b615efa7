#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <map>
#include <string>

#include "modesplit/common.hpp"
#include "modesplit/splitting.hpp"

namespace modesplit {

// Input/output sector pair {N_A, N_B, N_C, N_D}: the map block takes the
// symmetric basis of the (N_A, N_B) split to that of the (N_C, N_D) split.
using SectorPair = std::array<int, 4>;

// A linear map between split sectors, stored block-wise: for each sector
// pair an (N+1) x (N+1) matrix on the bases {|n, N-n>}. Absent blocks are
// zero.
class MixingMap {
 public:
  explicit MixingMap(int total_particles);

  int total_particles() const { return total_; }
  const std::map<SectorPair, Eigen::MatrixXcd>& blocks() const { return blocks_; }

  void set_block(const SectorPair& key, Eigen::MatrixXcd block);
  const Eigen::MatrixXcd* block(const SectorPair& key) const;

  // Map whose blocks are coefficient * identity.
  static MixingMap from_coefficients(int total_particles,
                                     const std::map<SectorPair, cplx>& coefficients);

 private:
  int total_;
  std::map<SectorPair, Eigen::MatrixXcd> blocks_;
};

enum class LadderDirection { kRaise, kLower };

// Collective ladder operator on the (N+1)-dimensional symmetric basis of a
// split: raising takes |n, N-n> to sqrt(n (N-n+1)) |n-1, N-n+1>. The matrix
// is the same for every split of N particles.
Eigen::MatrixXcd ladder_on_sector(LadderDirection direction, int total_particles);

// Outcome of a structural check, with the first violation found.
struct MixingDiagnostic {
  bool ok = true;
  SectorPair where{};       // offending block
  std::string check;        // which condition failed
  int row = -1, col = -1;   // offending entry, when meaningful
  double magnitude = 0.0;   // size of the violation
  std::string message;
};

// True when every block commutes with the collective ladder operators, the
// defining property of maps that only mix modes and leave internal levels
// alone.
MixingDiagnostic is_mode_mixing(const MixingMap& map, double tol = kNormTol);

// Full structural characterization: ladder commutation, proportionality of
// each block to the identity, and the entry-wise recurrence
// M(m+1, n+1) = M(m, n) sqrt((n+1)(N-n) / ((m+1)(N-m))) that identity-form
// blocks satisfy. On success, coefficients holds the per-block constants.
struct CharacterizeResult {
  bool ok = false;
  std::map<SectorPair, cplx> coefficients;
  MixingDiagnostic diagnostic;
};

CharacterizeResult characterize(const MixingMap& map, double tol = kNormTol);

// Amplitudes of two spatial modes with two internal levels each, indexed by
// (n_A, m_A, n_B, m_B): lower/upper counts in mode A, then mode B, summing
// to the particle total. Basis tuples are ordered lexicographically.
class JointModeState {
 public:
  explicit JointModeState(int total_particles);

  int total_particles() const { return total_; }
  const std::vector<std::array<int, 4>>& basis() const { return basis_; }
  Eigen::Index size() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }

  Eigen::Index index_of(const std::array<int, 4>& occ) const;
  cplx amplitude(const std::array<int, 4>& occ) const;
  void set_amplitude(const std::array<int, 4>& occ, cplx value);

  double norm() const { return amps_.norm(); }

 private:
  int total_;
  std::vector<std::array<int, 4>> basis_;
  std::map<std::array<int, 4>, Eigen::Index> index_;
  Eigen::VectorXcd amps_;
};

cplx inner(const JointModeState& a, const JointModeState& b);

// |n, N-n> of the (left_total, right_total) split, expanded over joint
// occupations with the closed-form Schmidt coefficients.
JointModeState sector_basis_state(int n_lower, int total_particles, int left_total,
                                  int right_total);

// Apply the splitter to both internal levels: creation operators of mode A
// map to r c + t d, those of mode B to -conj(t) c + conj(r) d.
JointModeState evolve_joint(const JointModeState& state, const SplitterParams& params);

// Sector-block decomposition of a beamsplitter's action, computed by
// evolving each sector basis state and projecting on the output bases.
MixingMap induced_map(const SplitterParams& params, int total_particles);

// Amplitude for the fully-lower-level input sector (in_left, in_right) to
// land on the fully-lower-level output sector (out_left, out_right).
cplx mixing_coefficient(int in_left, int in_right, int out_left, int out_right,
                        const SplitterParams& params);

// ---- first-quantization form -------------------------------------------

// Dense matrix on the 4^N space of N particles carrying a mode label and an
// internal level: per-particle basis code 2*mode + level, particle 1 most
// significant. Built as the N-th tensor power of a single-particle mode map
// (2x2, acting on the mode label only).
Eigen::MatrixXcd tensor_power_mode_map(const Eigen::Matrix2cd& single_particle_modes,
                                       int total_particles);

// |n, N-n> of the (left_total, right_total) split embedded in the 4^N
// first-quantization space.
Eigen::VectorXcd embed_sector_state(int n_lower, int total_particles, int left_total,
                                    int right_total);

// Check that a 4^N map commutes with every single-particle internal ladder
// operator, and extract its sector-block coefficients. Maps with that
// symmetry act on sector bases as constants, and the constants must agree
// for every input occupation n.
struct TensorFormReport {
  bool commutes = false;
  bool blocks_consistent = false;
  std::map<SectorPair, cplx> coefficients;
  std::string diagnostic;
};

TensorFormReport check_particle_form(const Eigen::MatrixXcd& map, int total_particles,
                                     double tol = kNormTol);

// ---- map file format ------------------------------------------------------
//
//   mixing-map v1
//   N <total>
//   block <N_A> <N_B> <N_C> <N_D>
//   <re,im> ... (N+1 entries)        } N+1 rows
//   (further blocks)
//
// Blank lines between sections are allowed.

void save_mixing_map(const MixingMap& map, std::ostream& out);
MixingMap load_mixing_map(std::istream& in);

}  // namespace modesplit
