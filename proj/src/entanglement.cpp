#include "modesplit/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modesplit/combinatorics.hpp"

namespace modesplit {

double schmidt_entropy(const SchmidtDecomposition& decomposition) {
  double h = 0.0;
  for (double c : decomposition.coefficients) {
    const double p = c * c;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dimension() != 4)
    throw std::invalid_argument("concurrence: need a two-qubit (4x4) matrix");
  // Spin-flipped companion: (sigma_y (x) sigma_y) conj(rho) (sigma_y (x) sigma_y).
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd flipped = yy * rho.matrix().conjugate() * yy;
  const Eigen::Matrix4cd product = rho.matrix() * flipped;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(product, false);
  std::array<double, 4> mu;
  for (int i = 0; i < 4; ++i)
    mu[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

double tangle_pure(const JointFockState& state) {
  if (state.num_modes() != 2)
    throw std::invalid_argument("tangle_pure: need exactly two modes");
  if (std::abs(state.norm() - 1.0) > kNormTol)
    throw std::domain_error("tangle_pure: state is not normalized");
  const int rows = state.mode_totals()[0] + 1;
  const int cols = state.mode_totals()[1] + 1;
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      m(state.amplitudes().data(), rows, cols);
  const Eigen::MatrixXcd reduced = m * m.adjoint();
  const double purity = (reduced * reduced).trace().real();
  return std::max(0.0, 2.0 * (1.0 - purity));
}

SqueezingReport squeezing(const TwoModeState& state) {
  const CollectiveSpinMoments moments = collective_spin(state);
  const double j = moments.mean.norm();
  if (j <= kNormTol)
    throw std::domain_error("squeezing: mean spin vanishes, no squeezing direction");
  const int n = state.total_particles();
  if (n < 1) throw std::domain_error("squeezing: need at least one particle");

  SqueezingReport report;
  report.mean_direction = moments.mean / j;

  // Orthonormal pair spanning the plane orthogonal to the mean direction.
  Eigen::Vector3d seed = Eigen::Vector3d::UnitX();
  if (std::abs(report.mean_direction.x()) > 0.9) seed = Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = report.mean_direction.cross(seed).normalized();
  const Eigen::Vector3d e2 = report.mean_direction.cross(e1).normalized();

  const Eigen::Matrix3d cov = moments.covariance();
  Eigen::Matrix2d v;
  v(0, 0) = e1.dot(cov * e1);
  v(0, 1) = e1.dot(cov * e2);
  v(1, 0) = e2.dot(cov * e1);
  v(1, 1) = e2.dot(cov * e2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es((v + v.transpose()) / 2.0,
                                                    Eigen::EigenvaluesOnly);
  report.min_orthogonal_variance = std::max(0.0, es.eigenvalues().minCoeff());
  report.xi_squared = 4.0 * report.min_orthogonal_variance / double(n);
  return report;
}

double squeezing_tangle_bound(double xi_squared, int total_particles, int left_total,
                              int right_total) {
  if (left_total < 0 || right_total < 0 ||
      left_total + right_total != total_particles)
    throw std::domain_error("squeezing_tangle_bound: mode sizes must sum to the total");
  if (total_particles < 2)
    throw std::domain_error("squeezing_tangle_bound: need at least two particles");
  if (xi_squared >= 1.0) return 0.0;
  const double gain = (1.0 - xi_squared) / double(total_particles - 1);
  return double(std::max(left_total, right_total)) * gain * gain;
}

BoundReport entanglement_bounds(const TwoModeState& state, int left_total,
                                int right_total) {
  const int n = state.total_particles();
  if (left_total < 0 || right_total < 0 || left_total + right_total != n)
    throw std::domain_error("entanglement_bounds: mode sizes must sum to the total");
  if (n < 2)
    throw std::domain_error("entanglement_bounds: need at least two particles");

  BoundReport report;
  report.pair_concurrence = concurrence(two_particle_rdm(state));
  report.monogamy_bound = double(std::max(left_total, right_total)) *
                          report.pair_concurrence * report.pair_concurrence;
  report.tangle = tangle_pure(ideal_mode_split(state, left_total, right_total));
  report.monogamy_satisfied = report.tangle >= report.monogamy_bound - kNormTol;

  try {
    report.xi_squared = squeezing(state).xi_squared;
    report.squeezing_defined = true;
    report.squeezing_bound =
        squeezing_tangle_bound(report.xi_squared, n, left_total, right_total);
    report.squeezing_satisfied = report.tangle >= report.squeezing_bound - kNormTol;
  } catch (const std::domain_error&) {
    report.squeezing_defined = false;
    report.squeezing_satisfied = true;  // nothing to violate
  }
  return report;
}

TwoModeState one_axis_twist(int total_particles, double theta) {
  if (total_particles < 1)
    throw std::domain_error("one_axis_twist: need at least one particle");
  const int n = total_particles;
  Eigen::VectorXcd amps(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double weight = std::sqrt(std::ldexp(binomial(n, k), -n));
    const double m = k - n / 2.0;
    amps(k) = std::polar(weight, -theta * m * m);
  }
  return TwoModeState(n, std::move(amps));
}

}  // namespace modesplit
