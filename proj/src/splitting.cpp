#include "modesplit/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "modesplit/combinatorics.hpp"

namespace modesplit {

namespace {

constexpr Eigen::Index kMaxJointAmplitudes = Eigen::Index{1} << 24;

void check_normalized(const TwoModeState& state, const char* who) {
  if (!state.is_normalized())
    throw std::domain_error(std::string(who) + ": input state is not normalized");
}

SchmidtDecomposition schmidt_from_singular_values(const Eigen::VectorXd& sv) {
  SchmidtDecomposition out;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol) out.coefficients.push_back(sv(i));
  return out;  // JacobiSVD already sorts descending
}

}  // namespace

bool SplitterParams::is_unitary(double tol) const {
  return std::abs(std::norm(r) + std::norm(t) - 1.0) <= tol;
}

bool NetworkColumn::is_isometric(double tol) const {
  double s = 0.0;
  for (cplx a : alphas) s += std::norm(a);
  return std::abs(s - 1.0) <= tol;
}

JointFockState::JointFockState(std::vector<int> mode_totals)
    : totals_(std::move(mode_totals)) {
  if (totals_.empty())
    throw std::invalid_argument("JointFockState: need at least one mode");
  Eigen::Index size = 1;
  for (int t : totals_) {
    if (t < 0) throw std::invalid_argument("JointFockState: negative mode total");
    if (size > kMaxJointAmplitudes / (t + 1))
      throw std::length_error("JointFockState: amplitude table too large");
    size *= t + 1;
  }
  strides_.assign(totals_.size(), 1);
  for (int k = static_cast<int>(totals_.size()) - 2; k >= 0; --k)
    strides_[k] = strides_[k + 1] * (totals_[k + 1] + 1);
  amps_ = Eigen::VectorXcd::Zero(size);
}

int JointFockState::total_particles() const {
  return std::accumulate(totals_.begin(), totals_.end(), 0);
}

Eigen::Index JointFockState::flat_index(std::span<const int> lower_counts) const {
  if (lower_counts.size() != totals_.size())
    throw std::invalid_argument("JointFockState: wrong number of occupations");
  Eigen::Index idx = 0;
  for (std::size_t k = 0; k < totals_.size(); ++k) {
    if (lower_counts[k] < 0 || lower_counts[k] > totals_[k])
      throw std::out_of_range("JointFockState: occupation out of range");
    idx += strides_[k] * lower_counts[k];
  }
  return idx;
}

std::vector<int> JointFockState::unflatten(Eigen::Index index) const {
  if (index < 0 || index >= amps_.size())
    throw std::out_of_range("JointFockState: flat index out of range");
  std::vector<int> out(totals_.size());
  for (std::size_t k = 0; k < totals_.size(); ++k) {
    out[k] = static_cast<int>(index / strides_[k]);
    index %= strides_[k];
  }
  return out;
}

cplx JointFockState::amplitude(std::span<const int> lower_counts) const {
  return amps_(flat_index(lower_counts));
}

void JointFockState::set_amplitude(std::span<const int> lower_counts, cplx value) {
  amps_(flat_index(lower_counts)) = value;
}

cplx inner(const JointFockState& a, const JointFockState& b) {
  if (a.mode_totals() != b.mode_totals())
    throw std::invalid_argument("inner: mode totals differ");
  return a.amplitudes().dot(b.amplitudes());
}

SectoredState::SectoredState(int total_particles) : total_(total_particles) {
  if (total_ < 0) throw std::invalid_argument("SectoredState: negative particle count");
}

void SectoredState::add_sector(std::vector<int> key, cplx weight,
                               JointFockState state) {
  int sum = 0;
  for (int k : key) {
    if (k < 0) throw std::invalid_argument("SectoredState: negative sector entry");
    sum += k;
  }
  if (sum != total_)
    throw std::invalid_argument("SectoredState: sector does not sum to the total");
  if (state.mode_totals() != key)
    throw std::invalid_argument("SectoredState: state totals do not match the key");
  sectors_.insert_or_assign(std::move(key), Sector{weight, std::move(state)});
}

double SectoredState::total_probability() const {
  double p = 0.0;
  for (const auto& [key, sector] : sectors_) p += std::norm(sector.weight);
  return p;
}

SectoredState beamsplit(const TwoModeState& state, const SplitterParams& params) {
  check_normalized(state, "beamsplit");
  if (!params.is_unitary())
    throw std::domain_error("beamsplit: |r|^2 + |t|^2 must be 1");
  NetworkColumn column{{params.r, params.t}};
  return multimode_split(state, column);
}

SectoredState multimode_split(const TwoModeState& state, const NetworkColumn& column) {
  check_normalized(state, "multimode_split");
  if (!column.is_isometric())
    throw std::domain_error("multimode_split: column amplitudes must have unit norm");
  const int n_total = state.total_particles();
  const int modes = column.num_modes();
  SectoredState out(n_total);

  // Enumerate compositions of the total into per-mode counts, starting from
  // (N, 0, ..., 0): decrement the rightmost positive entry left of the end
  // and hand the whole tail to its right neighbour.
  std::vector<int> key(modes, 0);
  key[0] = n_total;
  auto next_composition = [&]() -> bool {
    if (modes == 1 || key[modes - 1] == n_total) return false;
    int k = modes - 2;
    while (key[k] == 0) --k;
    --key[k];
    int tail = 1;
    for (int j = k + 1; j < modes; ++j) {
      tail += key[j];
      key[j] = 0;
    }
    key[k + 1] = tail;
    return true;
  };

  const Eigen::VectorXcd& phi = state.amplitudes();
  do {
    // Weight of the sector: sqrt(multinomial) * prod alpha_K^{key_K}.
    cplx weight = std::sqrt(multinomial(n_total, key));
    for (int k = 0; k < modes; ++k) weight *= ipow(column.alphas[k], key[k]);
    if (weight == cplx{0.0, 0.0}) continue;

    // Normalized sector state: amplitude at lower-level counts (n_1..n_k) is
    // phi_n * sqrt(prod_K C(key_K, n_K) / C(N, n)) with n = sum n_K.
    JointFockState box(key);
    std::vector<int> lower(modes, 0);
    bool more = true;
    while (more) {
      const int n = std::accumulate(lower.begin(), lower.end(), 0);
      if (phi(n) != cplx{0.0, 0.0}) {
        const double lam =
            std::sqrt(binomial_product_ratio(key, lower, n_total, n));
        if (lam != 0.0) box.set_amplitude(lower, phi(n) * lam);
      }
      // Advance mixed-radix counter over occupations.
      more = false;
      for (int k = modes - 1; k >= 0; --k) {
        if (lower[k] < key[k]) {
          ++lower[k];
          std::fill(lower.begin() + k + 1, lower.end(), 0);
          more = true;
          break;
        }
      }
    }
    out.add_sector(key, weight, std::move(box));
  } while (next_composition());
  return out;
}

SectorProjection project_sector(const SectoredState& state, std::span<const int> key) {
  int sum = 0;
  for (int k : key) {
    if (k < 0) throw std::domain_error("project_sector: negative sector entry");
    sum += k;
  }
  if (sum != state.total_particles())
    throw std::domain_error("project_sector: sector does not sum to the total");
  if (state.sectors().empty())
    throw std::domain_error("project_sector: state has no sectors");
  const std::size_t modes = state.sectors().begin()->first.size();
  if (key.size() != modes)
    throw std::domain_error("project_sector: wrong number of modes");

  std::vector<int> k(key.begin(), key.end());
  auto it = state.sectors().find(k);
  if (it == state.sectors().end()) return SectorProjection{};
  return SectorProjection{std::norm(it->second.weight), it->second.state};
}

SchmidtDecomposition mode_schmidt_coeffs(int n_lower, int total_particles,
                                         int left_total, int right_total) {
  if (left_total < 0 || right_total < 0 || left_total + right_total != total_particles)
    throw std::domain_error("mode_schmidt_coeffs: mode sizes must sum to the total");
  if (n_lower < 0 || n_lower > total_particles)
    throw std::domain_error("mode_schmidt_coeffs: occupation out of range");

  struct Entry {
    double lam;
    std::pair<int, int> left, right;
  };
  std::vector<Entry> entries;
  const int lo = std::max(0, n_lower - right_total);
  const int hi = std::min(left_total, n_lower);
  for (int nc = lo; nc <= hi; ++nc) {
    const int nd = n_lower - nc;
    const int ns[2] = {left_total, right_total};
    const int ks[2] = {nc, nd};
    const double lam =
        std::sqrt(binomial_product_ratio(ns, ks, total_particles, n_lower));
    entries.push_back({lam, {nc, left_total - nc}, {nd, right_total - nd}});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.lam > b.lam; });
  SchmidtDecomposition out;
  for (const Entry& e : entries) {
    if (e.lam == 0.0) continue;
    out.coefficients.push_back(e.lam);
    out.left_labels.push_back(e.left);
    out.right_labels.push_back(e.right);
  }
  return out;
}

SchmidtDecomposition particle_schmidt(const ParticleState& state, int left_particles) {
  const int n = state.num_particles();
  if (left_particles < 1 || left_particles > n - 1)
    throw std::domain_error("particle_schmidt: partition must leave particles on both sides");
  const Eigen::Index rows = Eigen::Index{1} << left_particles;
  const Eigen::Index cols = Eigen::Index{1} << (n - left_particles);
  // Particle 1 is the most significant bit, so the first left_particles bits
  // select the row.
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      m(state.amplitudes().data(), rows, cols);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return schmidt_from_singular_values(svd.singularValues());
}

SchmidtDecomposition schmidt_of_joint(const JointFockState& state) {
  if (state.num_modes() != 2)
    throw std::invalid_argument("schmidt_of_joint: need exactly two modes");
  const int rows = state.mode_totals()[0] + 1;
  const int cols = state.mode_totals()[1] + 1;
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      m(state.amplitudes().data(), rows, cols);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return schmidt_from_singular_values(svd.singularValues());
}

JointFockState ideal_mode_split(const TwoModeState& state, int left_total,
                                int right_total) {
  const int n_total = state.total_particles();
  if (left_total < 0 || right_total < 0 || left_total + right_total != n_total)
    throw std::domain_error("ideal_mode_split: mode sizes must sum to the total");
  check_normalized(state, "ideal_mode_split");
  JointFockState out({left_total, right_total});
  for (int n = 0; n <= n_total; ++n) {
    if (state.amplitude(n) == cplx{0.0, 0.0}) continue;
    const SchmidtDecomposition sd =
        mode_schmidt_coeffs(n, n_total, left_total, right_total);
    for (std::size_t i = 0; i < sd.coefficients.size(); ++i) {
      const int counts[2] = {sd.left_labels[i].first, sd.right_labels[i].first};
      out.set_amplitude(counts, state.amplitude(n) * sd.coefficients[i]);
    }
  }
  return out;
}

}  // namespace modesplit
