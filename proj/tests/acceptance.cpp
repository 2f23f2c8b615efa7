// Acceptance gate: one line per criterion, [PASS]/[FAIL], nonzero exit on
// any failure. Invoke as: acceptance <path-to-cli-binary>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "modesplit/cli.hpp"
#include "modesplit/combinatorics.hpp"
#include "modesplit/entanglement.hpp"
#include "modesplit/mixing.hpp"
#include "modesplit/protocol.hpp"
#include "modesplit/splitting.hpp"
#include "modesplit/states.hpp"
#include "oracles.hpp"

using namespace modesplit;

namespace {

struct Failure {
  std::vector<std::string> notes;

  void add(const std::string& note) {
    if (notes.size() < 8) notes.push_back(note);
  }
  bool ok() const { return notes.empty(); }
};

std::string fmt(const char* pattern, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, pattern, args...);
  return buffer;
}

SplitterParams balanced() {
  const double s = 1.0 / std::sqrt(2.0);
  return SplitterParams{s, s};
}

// 1. Splitting |2,1> of three particles on a beamsplitter produces the four
//    local-count sectors with weights r^3, sqrt(3) r^2 t, sqrt(3) r t^2, t^3
//    and the fixed normalized sector states, for random unitary (r, t).
Failure criterion1() {
  Failure f;
  oracle::TestRng rng(101);
  const double s3 = std::sqrt(3.0);
  const double i3 = 1.0 / std::sqrt(3.0);
  for (int rep = 0; rep < 20; ++rep) {
    const SplitterParams p = oracle::random_splitter(rng);
    const SectoredState split = beamsplit(make_fock(2, 3), p);
    const cplx r = p.r, t = p.t;

    struct Expect {
      std::vector<int> key;
      cplx weight;
      std::vector<std::pair<std::vector<int>, double>> amps;
    };
    const std::vector<Expect> table = {
        {{3, 0}, r * r * r, {{{2, 0}, 1.0}}},
        {{2, 1}, s3 * r * r * t, {{{2, 0}, i3}, {{1, 1}, std::sqrt(2.0) * i3}}},
        {{1, 2}, s3 * r * t * t, {{{0, 2}, i3}, {{1, 1}, std::sqrt(2.0) * i3}}},
        {{0, 3}, t * t * t, {{{0, 2}, 1.0}}},
    };
    for (const Expect& e : table) {
      const auto it = split.sectors().find(e.key);
      if (it == split.sectors().end()) {
        f.add(fmt("rep %d: sector (%d,%d) missing", rep, e.key[0], e.key[1]));
        continue;
      }
      if (std::abs(it->second.weight - e.weight) > 1e-12)
        f.add(fmt("rep %d: sector (%d,%d) weight off by %.3e", rep, e.key[0],
                  e.key[1], std::abs(it->second.weight - e.weight)));
      for (const auto& [occ, value] : e.amps)
        if (std::abs(it->second.state.amplitude(occ) - cplx{value, 0}) > 1e-12)
          f.add(fmt("rep %d: sector (%d,%d) amplitude (%d,%d) off", rep, e.key[0],
                    e.key[1], occ[0], occ[1]));
    }
    if (split.sectors().size() != 4)
      f.add(fmt("rep %d: expected 4 sectors, got %zu", rep, split.sectors().size()));
  }
  return f;
}

// 2. The numerical Schmidt spectrum across any particle bipartition equals
//    the closed-form mode coefficients sqrt(C(N_X,n_X) C(N_Y,n_Y) / C(N,n)),
//    for every basis state with N <= 10 and for random superpositions.
Failure criterion2() {
  Failure f;
  for (int n_total = 2; n_total <= 10; ++n_total)
    for (int low = 0; low <= n_total; ++low) {
      const ParticleState fq = to_first_quantization(make_fock(low, n_total));
      for (int left = 1; left < n_total; ++left) {
        std::vector<double> expected;
        for (int nx = 0; nx <= left; ++nx) {
          const int ny = low - nx;
          if (ny < 0 || ny > n_total - left) continue;
          expected.push_back(std::sqrt(binomial(left, nx) *
                                       binomial(n_total - left, ny) /
                                       binomial(n_total, low)));
        }
        std::sort(expected.begin(), expected.end(), std::greater<>());
        const std::vector<double> got = particle_schmidt(fq, left).coefficients;
        if (got.size() != expected.size()) {
          f.add(fmt("basis N=%d n=%d left=%d: %zu coefficients, expected %zu",
                    n_total, low, left, got.size(), expected.size()));
          continue;
        }
        for (size_t i = 0; i < got.size(); ++i)
          if (std::abs(got[i] - expected[i]) > 1e-10)
            f.add(fmt("basis N=%d n=%d left=%d: coefficient %zu off by %.3e",
                      n_total, low, left, i, std::abs(got[i] - expected[i])));
      }
    }

  oracle::TestRng rng(102);
  for (int n_total = 2; n_total <= 10; ++n_total)
    for (int rep = 0; rep < 100; ++rep) {
      const TwoModeState s = oracle::random_state(rng, n_total);
      const ParticleState fq = to_first_quantization(s);
      for (int left = 1; left < n_total; ++left) {
        const std::vector<double> a = particle_schmidt(fq, left).coefficients;
        const std::vector<double> b =
            schmidt_of_joint(ideal_mode_split(s, left, n_total - left)).coefficients;
        const size_t count = std::max(a.size(), b.size());
        for (size_t i = 0; i < count; ++i) {
          const double va = i < a.size() ? a[i] : 0.0;
          const double vb = i < b.size() ? b[i] : 0.0;
          if (std::abs(va - vb) > 1e-10)
            f.add(fmt("random N=%d rep=%d left=%d: coefficient %zu off by %.3e",
                      n_total, rep, left, i, std::abs(va - vb)));
        }
      }
    }
  return f;
}

// 3. Both directions of the mixing characterization: beamsplitter-induced
//    sector maps commute with the collective ladders and decompose into
//    constant blocks matching the closed-form transition amplitudes, planted
//    constant-block maps are accepted, and perturbed maps are rejected with
//    the offending block named.
Failure criterion3() {
  Failure f;
  oracle::TestRng rng(103);
  for (int n = 1; n <= 8; ++n) {
    std::vector<SplitterParams> params{balanced()};
    for (int k = 0; k < 3; ++k) params.push_back(oracle::random_splitter(rng));
    for (const SplitterParams& p : params) {
      const MixingMap map = induced_map(p, n);
      if (!is_mode_mixing(map).ok) {
        f.add(fmt("induced map N=%d fails ladder commutation", n));
        continue;
      }
      const CharacterizeResult res = characterize(map);
      if (!res.ok) {
        f.add(fmt("induced map N=%d fails characterization: %s", n,
                  res.diagnostic.message.c_str()));
        continue;
      }
      for (const auto& [key, coef] : res.coefficients) {
        const cplx direct = mixing_coefficient(key[0], key[1], key[2], key[3], p);
        if (std::abs(coef - direct) > 1e-10)
          f.add(fmt("induced map N=%d block (%d,%d)->(%d,%d) constant off by %.3e",
                    n, key[0], key[1], key[2], key[3], std::abs(coef - direct)));
      }
    }
  }

  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + int(rng.uniform() * 6);
    std::map<SectorPair, cplx> planted;
    for (int a = 0; a <= n; ++a)
      for (int c = 0; c <= n; ++c)
        planted[{a, n - a, c, n - c}] = rng.gaussian();
    const MixingMap map = MixingMap::from_coefficients(n, planted);
    const CharacterizeResult res = characterize(map);
    if (!res.ok || !is_mode_mixing(map).ok) {
      f.add(fmt("planted map rep=%d rejected", rep));
      continue;
    }
    for (const auto& [key, value] : planted)
      if (std::abs(res.coefficients.at(key) - value) > 1e-10)
        f.add(fmt("planted map rep=%d constant not recovered", rep));
  }

  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + int(rng.uniform() * 6);
    std::map<SectorPair, cplx> planted;
    for (int a = 0; a <= n; ++a)
      for (int c = 0; c <= n; ++c)
        planted[{a, n - a, c, n - c}] = rng.gaussian();
    MixingMap map = MixingMap::from_coefficients(n, planted);
    const int a = int(rng.uniform() * (n + 1));
    const int c = int(rng.uniform() * (n + 1));
    const SectorPair key{a, n - a, c, n - c};
    Eigen::MatrixXcd block = *map.block(key);
    const int row = int(rng.uniform() * (n + 1));
    const int col = int(rng.uniform() * (n + 1));
    block(row, col) += cplx{1e-4, -1e-4};
    map.set_block(key, block);
    const CharacterizeResult res = characterize(map);
    if (res.ok) {
      f.add(fmt("perturbed map rep=%d accepted", rep));
      continue;
    }
    if (res.diagnostic.where != key)
      f.add(fmt("perturbed map rep=%d blames (%d,%d)->(%d,%d), tampered "
                "(%d,%d)->(%d,%d)",
                rep, res.diagnostic.where[0], res.diagnostic.where[1],
                res.diagnostic.where[2], res.diagnostic.where[3], key[0], key[1],
                key[2], key[3]));
  }
  return f;
}

// 4. Tensor powers of a single-particle mode rotation, acting on particles
//    carrying (mode, level) labels, commute with every per-particle level
//    ladder and reduce to the same sector constants as the mode picture.
Failure criterion4() {
  Failure f;
  oracle::TestRng rng(104);
  for (int n = 1; n <= 4; ++n) {
    std::vector<SplitterParams> params{balanced(), oracle::random_splitter(rng)};
    for (const SplitterParams& p : params) {
      Eigen::Matrix2cd modes;
      modes << p.r, -std::conj(p.t), p.t, std::conj(p.r);
      const TensorFormReport report =
          check_particle_form(tensor_power_mode_map(modes, n), n);
      if (!report.commutes) {
        f.add(fmt("N=%d: tensor power fails ladder commutation: %s", n,
                  report.diagnostic.c_str()));
        continue;
      }
      if (!report.blocks_consistent) {
        f.add(fmt("N=%d: tensor power blocks not sector constants: %s", n,
                  report.diagnostic.c_str()));
        continue;
      }
      const CharacterizeResult sector = characterize(induced_map(p, n));
      if (!sector.ok) {
        f.add(fmt("N=%d: sector characterization failed unexpectedly", n));
        continue;
      }
      for (const auto& [key, value] : sector.coefficients) {
        if (std::abs(value) < 1e-12) continue;
        const auto it = report.coefficients.find(key);
        if (it == report.coefficients.end()) {
          f.add(fmt("N=%d: block (%d,%d)->(%d,%d) missing from particle form", n,
                    key[0], key[1], key[2], key[3]));
          continue;
        }
        if (std::abs(it->second - value) > 1e-10)
          f.add(fmt("N=%d: block (%d,%d)->(%d,%d) constant differs by %.3e", n,
                    key[0], key[1], key[2], key[3], std::abs(it->second - value)));
      }
    }
  }
  return f;
}

// 5. Extraction statistics: 1e5 seeded trials splitting |2,1> toward the
//    (2,1) counts on a balanced splitter accept on the first round at rate
//    3/4 within 3 binomial deviations, every accepted state matches the
//    ideal split with fidelity 1, virtually no trial exhausts 50 rounds, and
//    the closed-form transition amplitudes match the computed ones.
Failure criterion5() {
  Failure f;
  const TwoModeState input = make_fock(2, 3);
  ProtocolConfig config;
  config.target = {2, 1};
  config.schedule = {balanced()};
  config.max_iterations = 50;
  config.rng_seed = 20260815;
  config.cross_check = true;
  const long trials = 100000;
  const EnsembleStats stats = run_ensemble(input, config, trials);

  const double p = 0.75;
  const double sigma = std::sqrt(p * (1 - p) / double(trials));
  if (std::abs(stats.early_acceptance_rate - p) > 3 * sigma)
    f.add(fmt("first-round acceptance %.5f vs 3/4 (3 sigma = %.5f)",
              stats.early_acceptance_rate, 3 * sigma));
  if (stats.min_fidelity < 1.0 - 1e-10)
    f.add(fmt("worst accepted fidelity %.12f", stats.min_fidelity));
  if (stats.failure_fraction >= 1e-4)
    f.add(fmt("failure fraction %.2e at 50 rounds", stats.failure_fraction));

  oracle::TestRng rng(105);
  std::vector<SplitterParams> params{balanced(), oracle::random_splitter(rng),
                                     oracle::random_splitter(rng)};
  for (const SplitterParams& q : params)
    for (int n = 1; n <= 4; ++n)
      for (int a = 0; a <= n; ++a) {
        const cplx collect = std::sqrt(binomial(n, a)) * ipow(q.r, a) *
                             ipow(-std::conj(q.t), n - a);
        const cplx fan = std::sqrt(binomial(n, a)) * ipow(q.r, a) *
                         ipow(q.t, n - a);
        if (std::abs(mixing_coefficient(a, n - a, n, 0, q) - collect) > 1e-12)
          f.add(fmt("collect amplitude (%d,%d)->(%d,0) deviates", a, n - a, n));
        if (std::abs(mixing_coefficient(n, 0, a, n - a, q) - fan) > 1e-12)
          f.add(fmt("fan-out amplitude (%d,0)->(%d,%d) deviates", n, a, n - a));
      }
  return f;
}

// 6. Three-mode network splits agree with direct operator expansion for
//    every basis state with N <= 6, and sector weights stay normalized for
//    random isometric columns.
Failure criterion6() {
  Failure f;
  oracle::TestRng rng(106);
  for (int n_total = 1; n_total <= 6; ++n_total)
    for (int low = 0; low <= n_total; ++low)
      for (int rep = 0; rep < 3; ++rep) {
        const std::vector<cplx> alphas = oracle::random_column(rng, 3);
        const TwoModeState input = make_fock(low, n_total);
        const SectoredState split = multimode_split(input, NetworkColumn{alphas});
        const auto terms = oracle::expansion_split(input, alphas);
        for (const auto& [occ, value] : terms) {
          std::vector<int> key(3), lower(3);
          for (int m = 0; m < 3; ++m) {
            lower[m] = occ[2 * m];
            key[m] = occ[2 * m] + occ[2 * m + 1];
          }
          const auto it = split.sectors().find(key);
          const cplx ours = it == split.sectors().end()
                                ? cplx{0, 0}
                                : it->second.weight * it->second.state.amplitude(lower);
          if (std::abs(ours - value) > 1e-10)
            f.add(fmt("N=%d n=%d rep=%d: term (%d,%d,%d) off by %.3e", n_total,
                      low, rep, key[0], key[1], key[2], std::abs(ours - value)));
        }
      }

  for (int rep = 0; rep < 100; ++rep) {
    const int modes = 2 + int(rng.uniform() * 3);
    const int n_total = 1 + int(rng.uniform() * 6);
    const TwoModeState s = oracle::random_state(rng, n_total);
    const double total =
        multimode_split(s, NetworkColumn{oracle::random_column(rng, modes)})
            .total_probability();
    if (std::abs(total - 1.0) > 1e-10)
      f.add(fmt("rep=%d: total sector probability %.12f", rep, total));
  }
  return f;
}

// 7. Monogamy: the tangle of the split state dominates
//    max(left, right) * pair-concurrence^2 for random symmetric states.
Failure criterion7() {
  Failure f;
  oracle::TestRng rng(107);
  for (int n = 2; n <= 10; ++n)
    for (int rep = 0; rep < 200; ++rep) {
      const TwoModeState s = oracle::random_state(rng, n);
      const double pair = concurrence(two_particle_rdm(s));
      for (int left = 1; left < n; ++left) {
        const double bound = std::max(left, n - left) * pair * pair;
        const double tangle = tangle_pure(ideal_mode_split(s, left, n - left));
        if (tangle < bound - 1e-10)
          f.add(fmt("N=%d rep=%d left=%d: tangle %.12f < bound %.12f", n, rep,
                    left, tangle, bound));
      }
    }
  return f;
}

// 8. Squeezing bound: across twisted states, whenever xi^2 < 1 the balanced
//    split's tangle dominates max(left, right) ((1 - xi^2)/(N - 1))^2; a
//    violation reports the intermediate pair-concurrence comparison.
Failure criterion8() {
  Failure f;
  for (int n = 4; n <= 10; ++n)
    for (int step = 0; step < 20; ++step) {
      const double theta = 0.01 + (0.5 - 0.01) * double(step) / 19.0;
      const TwoModeState s = one_axis_twist(n, theta);
      double xi2;
      try {
        xi2 = squeezing(s).xi_squared;
      } catch (const std::domain_error&) {
        continue;  // no mean spin direction, bound is vacuous
      }
      if (xi2 >= 1.0) continue;
      const int left = (n + 1) / 2, right = n / 2;
      const double bound =
          std::max(left, right) * std::pow((1.0 - xi2) / (n - 1), 2);
      const double tangle = tangle_pure(ideal_mode_split(s, left, right));
      if (tangle < bound - 1e-10) {
        const double pair = concurrence(two_particle_rdm(s));
        f.add(fmt("N=%d theta=%.4f: tangle %.10f < bound %.10f "
                  "[pair concurrence %.10f vs (1-xi^2)/(N-1) = %.10f]",
                  n, theta, tangle, bound, pair, (1.0 - xi2) / (n - 1)));
      }
    }
  return f;
}

// 9. Determinism: repeated CLI invocations with identical seeds produce
//    byte-identical documents.
Failure criterion9(const std::string& cli) {
  Failure f;
  const std::string dir = "/tmp";
  const std::vector<std::string> invocations = {
      " --seed 42 extract --state 'fock 2 3' --target 2,1 --trials 2000",
      " --seed 7 --format csv extract --state 'oat 4 0.2' --target 2,2 "
      "--trials 500",
      " bounds --state 'oat 6 0.1' --split 3,3 --sweep 0.01:0.5:10",
      " split --state 'amps 1 0 0,1' --r 0.6 --t 0.8",
  };
  for (size_t i = 0; i < invocations.size(); ++i) {
    std::string texts[2];
    bool ran = true;
    for (int pass = 0; pass < 2; ++pass) {
      const std::string path =
          dir + "/modesplit_accept_" + std::to_string(i) + "_" +
          std::to_string(pass) + ".txt";
      const std::string command =
          cli + invocations[i] + " > " + path + " 2>/dev/null";
      if (std::system(command.c_str()) != 0) {
        f.add(fmt("invocation %zu pass %d exited nonzero", i, pass));
        ran = false;
        break;
      }
      std::ifstream in(path, std::ios::binary);
      std::ostringstream buffer;
      buffer << in.rdbuf();
      texts[pass] = buffer.str();
      std::remove(path.c_str());
    }
    if (!ran) continue;
    if (texts[0].empty())
      f.add(fmt("invocation %zu produced no output", i));
    else if (texts[0] != texts[1])
      f.add(fmt("invocation %zu differs between identical runs", i));
  }
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
    return 2;
  }
  const std::string cli = argv[1];

  struct Criterion {
    const char* description;
    double time_limit_s;  // <= 0: no limit
    Failure (*run)();
  };
  const std::vector<Criterion> fixed = {
      {"three-particle beamsplitter sector decomposition", 1.0, criterion1},
      {"particle and mode Schmidt spectra agree", 120.0, criterion2},
      {"ladder-commuting maps are sector constants, both directions", 60.0,
       criterion3},
      {"tensor-power mode maps reduce to the same sector constants", 60.0,
       criterion4},
      {"extraction protocol statistics and output fidelity", 60.0, criterion5},
      {"multimode splits match direct operator expansion", 0.0, criterion6},
      {"split-state tangle dominates the pair-concurrence bound", 120.0,
       criterion7},
      {"split-state tangle dominates the squeezing bound", 60.0, criterion8},
  };

  bool all_ok = true;
  int index = 0;
  const auto report = [&](const char* description, double limit,
                          const Failure& f, double elapsed) {
    ++index;
    bool ok = f.ok();
    std::string suffix = fmt(" (%.2f s)", elapsed);
    if (limit > 0 && elapsed > limit) {
      ok = false;
      suffix = fmt(" (%.2f s, over the %.0f s limit)", elapsed, limit);
    }
    std::printf("[%s] %d. %s%s\n", ok ? "PASS" : "FAIL", index, description,
                suffix.c_str());
    for (const std::string& note : f.notes) std::printf("       %s\n", note.c_str());
    all_ok = all_ok && ok;
  };

  for (const Criterion& c : fixed) {
    const auto start = std::chrono::steady_clock::now();
    const Failure f = c.run();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    report(c.description, c.time_limit_s, f, elapsed);
  }

  {
    const auto start = std::chrono::steady_clock::now();
    const Failure f = criterion9(cli);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    report("seeded runs produce byte-identical documents", 0.0, f, elapsed);
  }

  return all_ok ? 0 : 1;
}
