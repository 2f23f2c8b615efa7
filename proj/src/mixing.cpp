#include "modesplit/mixing.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "modesplit/combinatorics.hpp"

namespace modesplit {

namespace {

const std::vector<double>& factorials() {
  static const std::vector<double> table = [] {
    std::vector<double> f(171);
    f[0] = 1.0;
    for (std::size_t k = 1; k < f.size(); ++k) f[k] = f[k - 1] * double(k);
    return f;
  }();
  return table;
}

std::string sector_text(const SectorPair& s) {
  return "(" + std::to_string(s[0]) + "," + std::to_string(s[1]) + ";" +
         std::to_string(s[2]) + "," + std::to_string(s[3]) + ")";
}

void check_sector_key(const SectorPair& key, int total, const char* who) {
  if (key[0] < 0 || key[1] < 0 || key[2] < 0 || key[3] < 0)
    throw std::invalid_argument(std::string(who) + ": negative sector entry");
  if (key[0] + key[1] != total || key[2] + key[3] != total)
    throw std::invalid_argument(std::string(who) +
                                ": sector totals do not match the particle count");
}

}  // namespace

MixingMap::MixingMap(int total_particles) : total_(total_particles) {
  if (total_ < 0) throw std::invalid_argument("MixingMap: negative particle count");
}

void MixingMap::set_block(const SectorPair& key, Eigen::MatrixXcd block) {
  check_sector_key(key, total_, "MixingMap");
  if (block.rows() != total_ + 1 || block.cols() != total_ + 1)
    throw std::invalid_argument("MixingMap: block must be (N+1) x (N+1)");
  blocks_.insert_or_assign(key, std::move(block));
}

const Eigen::MatrixXcd* MixingMap::block(const SectorPair& key) const {
  auto it = blocks_.find(key);
  return it == blocks_.end() ? nullptr : &it->second;
}

MixingMap MixingMap::from_coefficients(int total_particles,
                                       const std::map<SectorPair, cplx>& coefficients) {
  MixingMap map(total_particles);
  const Eigen::MatrixXcd id =
      Eigen::MatrixXcd::Identity(total_particles + 1, total_particles + 1);
  for (const auto& [key, c] : coefficients) map.set_block(key, c * id);
  return map;
}

Eigen::MatrixXcd ladder_on_sector(LadderDirection direction, int total_particles) {
  const int n = total_particles;
  if (n < 0) throw std::domain_error("ladder_on_sector: negative particle count");
  Eigen::MatrixXcd raise = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) raise(k - 1, k) = std::sqrt(double(k) * (n - k + 1));
  if (direction == LadderDirection::kRaise) return raise;
  return raise.adjoint();
}

MixingDiagnostic is_mode_mixing(const MixingMap& map, double tol) {
  const int n = map.total_particles();
  const Eigen::MatrixXcd jp = ladder_on_sector(LadderDirection::kRaise, n);
  const Eigen::MatrixXcd jm = ladder_on_sector(LadderDirection::kLower, n);
  for (const auto& [key, block] : map.blocks()) {
    for (const auto& [name, op] : {std::pair{"raising", &jp}, {"lowering", &jm}}) {
      const Eigen::MatrixXcd comm = block * (*op) - (*op) * block;
      Eigen::Index row = 0, col = 0;
      const double dev = comm.cwiseAbs().maxCoeff(&row, &col);
      if (dev > tol) {
        MixingDiagnostic d;
        d.ok = false;
        d.where = key;
        d.check = std::string(name) + "-commutator";
        d.row = static_cast<int>(row);
        d.col = static_cast<int>(col);
        d.magnitude = dev;
        d.message = "block " + sector_text(key) + " fails the " + name +
                    "-operator commutator at entry (" + std::to_string(d.row) + "," +
                    std::to_string(d.col) + "), deviation " + std::to_string(dev);
        return d;
      }
    }
  }
  return MixingDiagnostic{};
}

CharacterizeResult characterize(const MixingMap& map, double tol) {
  CharacterizeResult result;
  result.diagnostic = is_mode_mixing(map, tol);
  if (!result.diagnostic.ok) return result;

  const int n = map.total_particles();
  for (const auto& [key, block] : map.blocks()) {
    // Mean diagonal as the candidate constant.
    cplx c = block.trace() / double(n + 1);
    const Eigen::MatrixXcd dev =
        block - c * Eigen::MatrixXcd::Identity(n + 1, n + 1);
    Eigen::Index row = 0, col = 0;
    const double d = dev.cwiseAbs().maxCoeff(&row, &col);
    if (d > tol) {
      result.diagnostic.ok = false;
      result.diagnostic.where = key;
      result.diagnostic.check = "identity-form";
      result.diagnostic.row = static_cast<int>(row);
      result.diagnostic.col = static_cast<int>(col);
      result.diagnostic.magnitude = d;
      result.diagnostic.message =
          "block " + sector_text(key) + " is not a multiple of the identity";
      return result;
    }
    // The entry-wise recurrence along diagonals; identity blocks satisfy it
    // trivially but it is part of the structural contract, so verify.
    for (int mm = 0; mm < n; ++mm)
      for (int nn = 0; nn < n; ++nn) {
        const double factor =
            std::sqrt(double(nn + 1) * (n - nn) / (double(mm + 1) * (n - mm)));
        const double rdev = std::abs(block(mm + 1, nn + 1) - block(mm, nn) * factor);
        if (rdev > tol) {
          result.diagnostic.ok = false;
          result.diagnostic.where = key;
          result.diagnostic.check = "recurrence";
          result.diagnostic.row = mm;
          result.diagnostic.col = nn;
          result.diagnostic.magnitude = rdev;
          result.diagnostic.message =
              "block " + sector_text(key) + " violates the diagonal recurrence";
          return result;
        }
      }
    result.coefficients[key] = c;
  }
  result.ok = true;
  return result;
}

JointModeState::JointModeState(int total_particles) : total_(total_particles) {
  if (total_ < 0)
    throw std::invalid_argument("JointModeState: negative particle count");
  for (int na = 0; na <= total_; ++na)
    for (int ma = 0; ma <= total_ - na; ++ma)
      for (int nb = 0; nb <= total_ - na - ma; ++nb) {
        const int mb = total_ - na - ma - nb;
        index_[{na, ma, nb, mb}] = static_cast<Eigen::Index>(basis_.size());
        basis_.push_back({na, ma, nb, mb});
      }
  amps_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_.size()));
}

Eigen::Index JointModeState::index_of(const std::array<int, 4>& occ) const {
  auto it = index_.find(occ);
  if (it == index_.end())
    throw std::out_of_range("JointModeState: occupation tuple out of range");
  return it->second;
}

cplx JointModeState::amplitude(const std::array<int, 4>& occ) const {
  return amps_(index_of(occ));
}

void JointModeState::set_amplitude(const std::array<int, 4>& occ, cplx value) {
  amps_(index_of(occ)) = value;
}

cplx inner(const JointModeState& a, const JointModeState& b) {
  if (a.total_particles() != b.total_particles())
    throw std::invalid_argument("inner: particle totals differ");
  return a.amplitudes().dot(b.amplitudes());
}

JointModeState sector_basis_state(int n_lower, int total_particles, int left_total,
                                  int right_total) {
  if (left_total < 0 || right_total < 0 ||
      left_total + right_total != total_particles)
    throw std::domain_error("sector_basis_state: mode sizes must sum to the total");
  if (n_lower < 0 || n_lower > total_particles)
    throw std::domain_error("sector_basis_state: occupation out of range");
  JointModeState out(total_particles);
  const int lo = std::max(0, n_lower - right_total);
  const int hi = std::min(left_total, n_lower);
  for (int na = lo; na <= hi; ++na) {
    const int nb = n_lower - na;
    const int ns[2] = {left_total, right_total};
    const int ks[2] = {na, nb};
    const double lam =
        std::sqrt(binomial_product_ratio(ns, ks, total_particles, n_lower));
    out.set_amplitude({na, left_total - na, nb, right_total - nb}, lam);
  }
  return out;
}

JointModeState evolve_joint(const JointModeState& state, const SplitterParams& p) {
  if (!p.is_unitary())
    throw std::domain_error("evolve_joint: |r|^2 + |t|^2 must be 1");
  const int total = state.total_particles();
  const std::vector<double>& fact = factorials();
  JointModeState out(total);
  const cplx mt = -std::conj(p.t);
  const cplx cr = std::conj(p.r);

  for (Eigen::Index idx = 0; idx < state.size(); ++idx) {
    const cplx amp = state.amplitudes()(idx);
    if (amp == cplx{0.0, 0.0}) continue;
    const auto [na, ma, nb, mb] = state.basis()[idx];
    const double in_fact = fact[na] * fact[ma] * fact[nb] * fact[mb];
    // Expand each creation-operator power binomially over the two outputs:
    // a0..b1 count the particles of each input group routed to the first
    // output mode.
    for (int a0 = 0; a0 <= na; ++a0)
      for (int a1 = 0; a1 <= ma; ++a1)
        for (int b0 = 0; b0 <= nb; ++b0)
          for (int b1 = 0; b1 <= mb; ++b1) {
            const int nc = a0 + b0, mc = a1 + b1;
            const int nd = (na - a0) + (nb - b0), md = (ma - a1) + (mb - b1);
            const cplx coef = binomial(na, a0) * binomial(ma, a1) *
                              binomial(nb, b0) * binomial(mb, b1) *
                              ipow(p.r, a0 + a1) * ipow(p.t, (na - a0) + (ma - a1)) *
                              ipow(mt, b0 + b1) * ipow(cr, (nb - b0) + (mb - b1)) *
                              std::sqrt(fact[nc] * fact[mc] * fact[nd] * fact[md] /
                                        in_fact);
            const std::array<int, 4> target{nc, mc, nd, md};
            out.amplitudes()(out.index_of(target)) += amp * coef;
          }
  }
  return out;
}

MixingMap induced_map(const SplitterParams& params, int total_particles) {
  if (!params.is_unitary())
    throw std::domain_error("induced_map: |r|^2 + |t|^2 must be 1");
  const int n = total_particles;
  // Sector basis states, shared between the input and output sides.
  std::vector<std::vector<JointModeState>> basis;
  basis.reserve(n + 1);
  for (int left = 0; left <= n; ++left) {
    std::vector<JointModeState> per_occ;
    per_occ.reserve(n + 1);
    for (int occ = 0; occ <= n; ++occ)
      per_occ.push_back(sector_basis_state(occ, n, left, n - left));
    basis.push_back(std::move(per_occ));
  }

  MixingMap map(n);
  for (int in_left = 0; in_left <= n; ++in_left) {
    std::vector<JointModeState> evolved;
    evolved.reserve(n + 1);
    for (int occ = 0; occ <= n; ++occ)
      evolved.push_back(evolve_joint(basis[in_left][occ], params));
    for (int out_left = 0; out_left <= n; ++out_left) {
      Eigen::MatrixXcd block(n + 1, n + 1);
      for (int row = 0; row <= n; ++row)
        for (int col = 0; col <= n; ++col)
          block(row, col) = inner(basis[out_left][row], evolved[col]);
      map.set_block({in_left, n - in_left, out_left, n - out_left},
                    std::move(block));
    }
  }
  return map;
}

cplx mixing_coefficient(int in_left, int in_right, int out_left, int out_right,
                        const SplitterParams& params) {
  if (in_left < 0 || in_right < 0 || out_left < 0 || out_right < 0)
    throw std::domain_error("mixing_coefficient: negative sector entry");
  const int total = in_left + in_right;
  if (out_left + out_right != total)
    throw std::domain_error("mixing_coefficient: sector totals differ");
  JointModeState in(total);
  in.set_amplitude({in_left, 0, in_right, 0}, 1.0);
  const JointModeState out = evolve_joint(in, params);
  return out.amplitude({out_left, 0, out_right, 0});
}

Eigen::MatrixXcd tensor_power_mode_map(const Eigen::Matrix2cd& single_particle_modes,
                                       int total_particles) {
  if (total_particles < 1)
    throw std::domain_error("tensor_power_mode_map: need at least one particle");
  if (total_particles > 6)
    throw std::length_error("tensor_power_mode_map: 4^N space too large beyond N=6");
  Eigen::Matrix4cd single = Eigen::Matrix4cd::Zero();
  for (int out_mode = 0; out_mode < 2; ++out_mode)
    for (int in_mode = 0; in_mode < 2; ++in_mode)
      for (int level = 0; level < 2; ++level)
        single(2 * out_mode + level, 2 * in_mode + level) =
            single_particle_modes(out_mode, in_mode);

  Eigen::MatrixXcd out = single;
  for (int p = 1; p < total_particles; ++p) {
    const Eigen::Index d = out.rows();
    Eigen::MatrixXcd next(d * 4, d * 4);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        next.block(i * 4, j * 4, 4, 4) = out(i, j) * single;
    out = std::move(next);
  }
  return out;
}

Eigen::VectorXcd embed_sector_state(int n_lower, int total_particles, int left_total,
                                    int right_total) {
  if (left_total < 0 || right_total < 0 ||
      left_total + right_total != total_particles)
    throw std::domain_error("embed_sector_state: mode sizes must sum to the total");
  if (n_lower < 0 || n_lower > total_particles)
    throw std::domain_error("embed_sector_state: occupation out of range");
  if (total_particles < 1)
    throw std::domain_error("embed_sector_state: need at least one particle");
  if (total_particles > 6)
    throw std::length_error("embed_sector_state: 4^N space too large beyond N=6");

  const Eigen::Index dim = Eigen::Index{1} << (2 * total_particles);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    int counts[4] = {0, 0, 0, 0};  // (mode, level) pairs
    for (int p = 0; p < total_particles; ++p)
      ++counts[(idx >> (2 * p)) & 3];
    const int na = counts[0], ma = counts[1], nb = counts[2], mb = counts[3];
    if (na + ma != left_total || nb + mb != right_total) continue;
    if (na + nb != n_lower) continue;
    const int ns[2] = {left_total, right_total};
    const int ks[2] = {na, nb};
    const double lam =
        std::sqrt(binomial_product_ratio(ns, ks, total_particles, n_lower));
    const int parts[4] = {na, ma, nb, mb};
    out(idx) = lam / std::sqrt(multinomial(total_particles, parts));
  }
  return out;
}

TensorFormReport check_particle_form(const Eigen::MatrixXcd& map, int total_particles,
                                     double tol) {
  if (total_particles < 1)
    throw std::domain_error("check_particle_form: need at least one particle");
  if (total_particles > 6)
    throw std::length_error("check_particle_form: 4^N space too large beyond N=6");
  const Eigen::Index dim = Eigen::Index{1} << (2 * total_particles);
  if (map.rows() != dim || map.cols() != dim)
    throw std::invalid_argument("check_particle_form: map is not 4^N x 4^N");

  TensorFormReport report;

  // Commutators with each particle's internal raising and lowering operator.
  // The level bit of particle p strides the index by 4^(N-p).
  for (int p = 1; p <= total_particles; ++p) {
    const Eigen::Index step = Eigen::Index{1} << (2 * (total_particles - p));
    auto level = [&](Eigen::Index i) { return (i / step) & 1; };
    for (int raise = 0; raise < 2; ++raise) {
      double worst = 0.0;
      for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) {
          cplx right, left;  // (map * op)(i,j) and (op * map)(i,j)
          if (raise) {
            right = level(j) == 0 ? map(i, j + step) : cplx{};
            left = level(i) == 1 ? map(i - step, j) : cplx{};
          } else {
            right = level(j) == 1 ? map(i, j - step) : cplx{};
            left = level(i) == 0 ? map(i + step, j) : cplx{};
          }
          worst = std::max(worst, std::abs(right - left));
        }
      if (worst > tol) {
        report.diagnostic = "particle " + std::to_string(p) + " " +
                            (raise ? "raising" : "lowering") +
                            "-operator commutator deviates by " +
                            std::to_string(worst);
        return report;
      }
    }
  }
  report.commutes = true;

  // Extract per-sector constants and verify they are occupation-independent.
  const int n = total_particles;
  std::vector<std::vector<Eigen::VectorXcd>> emb(n + 1);
  for (int left = 0; left <= n; ++left) {
    emb[left].reserve(n + 1);
    for (int occ = 0; occ <= n; ++occ)
      emb[left].push_back(embed_sector_state(occ, n, left, n - left));
  }
  for (int in_left = 0; in_left <= n; ++in_left)
    for (int occ = 0; occ <= n; ++occ) {
      const Eigen::VectorXcd image = map * emb[in_left][occ];
      Eigen::VectorXcd residual = image;
      for (int out_left = 0; out_left <= n; ++out_left) {
        const cplx c = emb[out_left][occ].dot(image);
        residual -= c * emb[out_left][occ];
        const SectorPair key{in_left, n - in_left, out_left, n - out_left};
        auto it = report.coefficients.find(key);
        if (it == report.coefficients.end()) {
          report.coefficients[key] = c;
        } else if (std::abs(it->second - c) > tol) {
          report.diagnostic = "sector " + sector_text(key) +
                              " constant drifts with the occupation: |" +
                              std::to_string(std::abs(it->second - c)) + "|";
          return report;
        }
      }
      const double res = residual.cwiseAbs().maxCoeff();
      if (res > tol) {
        report.diagnostic =
            "image of occupation " + std::to_string(occ) + " in split (" +
            std::to_string(in_left) + "," + std::to_string(n - in_left) +
            ") leaves the sector bases, residual " + std::to_string(res);
        return report;
      }
    }
  report.blocks_consistent = true;
  return report;
}

namespace {

std::string format_entry(cplx v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", v.real(), v.imag());
  return buf;
}

struct LineReader {
  std::istream& in;
  int number = 0;

  // Next non-blank line; false at end of input.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++number;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("mixing map: line " + std::to_string(number) + ": " +
                             what);
  }
};

}  // namespace

void save_mixing_map(const MixingMap& map, std::ostream& out) {
  const int n = map.total_particles();
  out << "mixing-map v1\n";
  out << "N " << n << "\n";
  for (const auto& [key, block] : map.blocks()) {
    out << "block " << key[0] << " " << key[1] << " " << key[2] << " " << key[3]
        << "\n";
    for (int row = 0; row <= n; ++row) {
      for (int col = 0; col <= n; ++col) {
        if (col) out << " ";
        out << format_entry(block(row, col));
      }
      out << "\n";
    }
  }
}

MixingMap load_mixing_map(std::istream& in) {
  LineReader reader{in};
  std::string line;
  if (!reader.next(line)) reader.fail("empty input");
  if (line != "mixing-map v1") reader.fail("expected header 'mixing-map v1'");

  if (!reader.next(line)) reader.fail("missing particle count");
  int total = -1;
  {
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag >> total) || tag != "N" || total < 0)
      reader.fail("expected 'N <count>'");
    std::string extra;
    if (ss >> extra) reader.fail("trailing content after particle count");
  }

  MixingMap map(total);
  while (reader.next(line)) {
    std::istringstream ss(line);
    std::string tag;
    SectorPair key{};
    if (!(ss >> tag) || tag != "block")
      reader.fail("expected 'block <N_A> <N_B> <N_C> <N_D>'");
    if (!(ss >> key[0] >> key[1] >> key[2] >> key[3]))
      reader.fail("expected four sector counts after 'block'");
    std::string extra;
    if (ss >> extra) reader.fail("trailing content after sector counts");
    if (map.block(key) != nullptr) reader.fail("duplicate block " + sector_text(key));

    Eigen::MatrixXcd block(total + 1, total + 1);
    for (int row = 0; row <= total; ++row) {
      if (!reader.next(line)) reader.fail("unexpected end of input inside a block");
      std::istringstream rowstream(line);
      for (int col = 0; col <= total; ++col) {
        std::string entry;
        if (!(rowstream >> entry))
          reader.fail("expected " + std::to_string(total + 1) + " entries in the row");
        const auto comma = entry.find(',');
        if (comma == std::string::npos)
          reader.fail("entry '" + entry + "' is not 're,im'");
        try {
          std::size_t used = 0;
          const double re = std::stod(entry.substr(0, comma), &used);
          if (used != comma) throw std::invalid_argument("");
          const std::string imag_text = entry.substr(comma + 1);
          const double im = std::stod(imag_text, &used);
          if (used != imag_text.size()) throw std::invalid_argument("");
          block(row, col) = cplx{re, im};
        } catch (const std::exception&) {
          reader.fail("entry '" + entry + "' is not 're,im'");
        }
      }
      std::string extra_entry;
      if (rowstream >> extra_entry) reader.fail("too many entries in the row");
    }
    try {
      map.set_block(key, std::move(block));
    } catch (const std::invalid_argument& e) {
      reader.fail(e.what());
    }
  }
  return map;
}

}  // namespace modesplit
