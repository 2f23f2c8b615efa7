#include "modesplit/states.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "modesplit/combinatorics.hpp"

namespace modesplit {

TwoModeState::TwoModeState(int total_particles, Eigen::VectorXcd amplitudes)
    : total_(total_particles), amps_(std::move(amplitudes)) {
  if (total_ < 0) throw std::invalid_argument("TwoModeState: negative particle count");
  if (amps_.size() != total_ + 1)
    throw std::invalid_argument("TwoModeState: expected " +
                                std::to_string(total_ + 1) + " amplitudes, got " +
                                std::to_string(amps_.size()));
}

cplx TwoModeState::amplitude(int n_lower) const {
  if (n_lower < 0 || n_lower > total_)
    throw std::out_of_range("TwoModeState: occupation out of range");
  return amps_(n_lower);
}

bool TwoModeState::is_normalized(double tol) const {
  return std::abs(norm() - 1.0) <= tol;
}

ParticleState::ParticleState(int num_particles, Eigen::VectorXcd amplitudes)
    : particles_(num_particles), amps_(std::move(amplitudes)) {
  if (particles_ < 0)
    throw std::invalid_argument("ParticleState: negative particle count");
  if (particles_ > kMaxDenseParticles)
    throw std::length_error("ParticleState: particle count exceeds dense limit");
  if (amps_.size() != (Eigen::Index{1} << particles_))
    throw std::invalid_argument("ParticleState: amplitude count is not 2^N");
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw std::invalid_argument("DensityMatrix: matrix is not square");
  if (m_.rows() == 0) throw std::invalid_argument("DensityMatrix: empty matrix");
  const double herm_dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol)
    throw std::domain_error("DensityMatrix: not Hermitian (deviation " +
                            std::to_string(herm_dev) + ")");
  const double trace_dev = std::abs(m_.trace() - cplx{1.0, 0.0});
  if (trace_dev > tol)
    throw std::domain_error("DensityMatrix: trace differs from one by " +
                            std::to_string(trace_dev));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      (m_ + m_.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol)
    throw std::domain_error("DensityMatrix: negative eigenvalue " +
                            std::to_string(min_eig));
}

Eigen::Matrix3d CollectiveSpinMoments::covariance() const {
  Eigen::Matrix3d cov;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      cov(a, b) = second_moments(a, b).real() - mean(a) * mean(b);
  return cov;
}

TwoModeState make_fock(int n_lower, int total_particles) {
  if (total_particles < 0 || n_lower < 0 || n_lower > total_particles)
    throw std::domain_error("make_fock: occupation out of range");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(total_particles + 1);
  amps(n_lower) = 1.0;
  return TwoModeState(total_particles, std::move(amps));
}

ParticleState to_first_quantization(const TwoModeState& state) {
  const int n = state.total_particles();
  if (n > kMaxDenseParticles)
    throw std::length_error("to_first_quantization: particle count exceeds dense limit");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXcd amps(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const int ones = std::popcount(static_cast<unsigned long long>(i));
    const int n_lower = n - ones;
    amps(i) = state.amplitude(n_lower) / std::sqrt(binomial(n, n_lower));
  }
  return ParticleState(n, std::move(amps));
}

ParticleState symmetrize(std::string_view pattern) {
  const int n = static_cast<int>(pattern.size());
  if (n > kMaxDenseParticles)
    throw std::length_error("symmetrize: pattern exceeds dense limit");
  int ones = 0;
  for (char c : pattern) {
    if (c == '1')
      ++ones;
    else if (c != '0')
      throw std::invalid_argument("symmetrize: pattern must contain only 0 and 1");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
  const double amp = 1.0 / std::sqrt(binomial(n, ones));
  for (Eigen::Index i = 0; i < dim; ++i)
    if (std::popcount(static_cast<unsigned long long>(i)) == ones) amps(i) = amp;
  return ParticleState(n, std::move(amps));
}

Eigen::VectorXcd symmetric_projection(const ParticleState& state) {
  const int n = state.num_particles();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n + 1);
  const Eigen::Index dim = Eigen::Index{1} << n;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const int n_lower = n - std::popcount(static_cast<unsigned long long>(i));
    out(n_lower) += state.amplitudes()(i);
  }
  for (int k = 0; k <= n; ++k) out(k) /= std::sqrt(binomial(n, k));
  return out;
}

TwoModeState apply_ladder(const TwoModeState& state, Ladder op) {
  const int n = state.total_particles();
  const Eigen::VectorXcd& in = state.amplitudes();
  switch (op) {
    case Ladder::kLowerCreate: {
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n + 2);
      for (int k = 0; k <= n; ++k) out(k + 1) = std::sqrt(k + 1.0) * in(k);
      return TwoModeState(n + 1, std::move(out));
    }
    case Ladder::kUpperCreate: {
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n + 2);
      for (int k = 0; k <= n; ++k) out(k) = std::sqrt(n - k + 1.0) * in(k);
      return TwoModeState(n + 1, std::move(out));
    }
    case Ladder::kLowerAnnihilate: {
      if (n == 0) return TwoModeState(0, Eigen::VectorXcd::Zero(1));
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
      for (int k = 1; k <= n; ++k) out(k - 1) = std::sqrt(double(k)) * in(k);
      return TwoModeState(n - 1, std::move(out));
    }
    case Ladder::kUpperAnnihilate: {
      if (n == 0) return TwoModeState(0, Eigen::VectorXcd::Zero(1));
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
      for (int k = 0; k < n; ++k) out(k) = std::sqrt(double(n - k)) * in(k);
      return TwoModeState(n - 1, std::move(out));
    }
  }
  throw std::invalid_argument("apply_ladder: unknown operator");
}

DensityMatrix two_particle_rdm(const TwoModeState& state) {
  const int n = state.total_particles();
  if (n < 2) throw std::domain_error("two_particle_rdm: need at least two particles");
  if (!state.is_normalized())
    throw std::domain_error("two_particle_rdm: state is not normalized");
  const Eigen::VectorXcd& phi = state.amplitudes();

  // Tracing out all but two particles of the symmetrized expansion leaves,
  // for row label a and column label b (2-bit codes, particle order kept),
  //   rho(a, b) = sum_z C(N-2, z) phi(z + za) conj(phi(z + zb))
  //               / sqrt(C(N, z + za) C(N, z + zb)),
  // where za, zb count the zero bits of a and b. The z sum runs over lower-
  // level occupations of the traced-out N-2 particles.
  auto zeros_of = [](int code) { return 2 - std::popcount(static_cast<unsigned>(code)); };
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const int za = zeros_of(a), zb = zeros_of(b);
      cplx sum = 0.0;
      for (int z = 0; z <= n - 2; ++z)
        sum += binomial(n - 2, z) * phi(z + za) * std::conj(phi(z + zb)) /
               std::sqrt(binomial(n, z + za) * binomial(n, z + zb));
      rho(a, b) = sum;
    }
  return DensityMatrix(std::move(rho));
}

Eigen::MatrixXcd spin_operator(char axis, int total_particles) {
  const int n = total_particles;
  if (n < 0) throw std::domain_error("spin_operator: negative particle count");
  Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k)
    jp(k - 1, k) = std::sqrt(double(k) * (n - k + 1));  // raises one lower -> upper
  const Eigen::MatrixXcd jm = jp.adjoint();
  switch (axis) {
    case 'x':
      return (jp + jm) / 2.0;
    case 'y':
      return (jp - jm) / cplx{0.0, 2.0};
    case 'z': {
      Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(n + 1, n + 1);
      for (int k = 0; k <= n; ++k) jz(k, k) = (n - 2.0 * k) / 2.0;
      return jz;
    }
    default:
      throw std::invalid_argument("spin_operator: axis must be x, y or z");
  }
}

CollectiveSpinMoments collective_spin(const TwoModeState& state) {
  if (!state.is_normalized())
    throw std::domain_error("collective_spin: state is not normalized");
  const int n = state.total_particles();
  const Eigen::MatrixXcd ops[3] = {spin_operator('x', n), spin_operator('y', n),
                                   spin_operator('z', n)};
  const Eigen::VectorXcd& phi = state.amplitudes();
  CollectiveSpinMoments m;
  Eigen::VectorXcd applied[3];
  for (int a = 0; a < 3; ++a) {
    applied[a] = ops[a] * phi;
    m.mean(a) = phi.dot(applied[a]).real();
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m.second_moments(a, b) = applied[a].dot(applied[b]);
  return m;
}

}  // namespace modesplit
