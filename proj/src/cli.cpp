#include "modesplit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "modesplit/entanglement.hpp"
#include "modesplit/mixing.hpp"
#include "modesplit/protocol.hpp"
#include "modesplit/splitting.hpp"

namespace modesplit::cli {

namespace {

// Desk-scale guard against typo'd particle counts allocating gigabytes.
constexpr int kMaxSpecParticles = 4096;

double parse_real_strict(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": expected a number, got '" + text + "'");
  }
}

int parse_int_strict(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": expected an integer, got '" + text + "'");
  }
}

std::vector<std::string> whitespace_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = text.find_first_not_of(" \t", pos);
    if (start == std::string::npos) break;
    const std::size_t end = text.find_first_of(" \t", start);
    out.push_back(text.substr(start, (end == std::string::npos ? text.size() : end) - start));
    pos = end == std::string::npos ? text.size() : end;
  }
  return out;
}

std::string pair_text(std::pair<int, int> p) {
  return std::to_string(p.first) + "," + std::to_string(p.second);
}

std::string counts_text(std::span<const int> counts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(counts[i]);
  }
  return out;
}

void add_schmidt_node(TreeNode& parent, const SchmidtDecomposition& sd) {
  TreeNode& node = parent.add("schmidt");
  node.add("entropy", format_real(schmidt_entropy(sd)));
  for (std::size_t i = 0; i < sd.coefficients.size(); ++i)
    node.add("coefficient " + std::to_string(i), format_real(sd.coefficients[i]));
}

void add_joint_amplitudes(TreeNode& parent, const JointFockState& state) {
  TreeNode& node = parent.add("amplitudes");
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const cplx a = state.amplitudes()(i);
    if (a == cplx{0.0, 0.0}) continue;
    node.add("amp " + counts_text(state.unflatten(i), ','), format_complex(a));
  }
}

RunRecord make_record(const char* command, const GlobalOptions& opts) {
  RunRecord record;
  record.command = command;
  record.seed = opts.seed;
  record.tolerance = opts.tolerance;
  return record;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos)
    return cplx{parse_real_strict(text, "complex value"), 0.0};
  const double re = parse_real_strict(text.substr(0, comma), "complex real part");
  const double im = parse_real_strict(text.substr(comma + 1), "complex imaginary part");
  return cplx{re, im};
}

std::pair<int, int> parse_int_pair(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("pair: expected 'a,b', got '" + text + "'");
  return {parse_int_strict(text.substr(0, comma), "pair"),
          parse_int_strict(text.substr(comma + 1), "pair")};
}

TwoModeState parse_state_spec(const std::string& spec) {
  const std::vector<std::string> toks = whitespace_tokens(spec);
  auto tok_what = [](std::size_t i) { return "state spec: token " + std::to_string(i + 1); };
  if (toks.empty()) throw std::invalid_argument("state spec: empty");

  if (toks[0] == "fock") {
    if (toks.size() != 3)
      throw std::invalid_argument("state spec: expected 'fock <n> <N>'");
    const int n = parse_int_strict(toks[1], tok_what(1));
    const int total = parse_int_strict(toks[2], tok_what(2));
    if (total > kMaxSpecParticles)
      throw std::invalid_argument("state spec: particle count beyond desk scale");
    try {
      return make_fock(n, total);
    } catch (const std::domain_error& e) {
      throw std::invalid_argument("state spec: " + std::string(e.what()));
    }
  }
  if (toks[0] == "oat") {
    if (toks.size() != 3)
      throw std::invalid_argument("state spec: expected 'oat <N> <theta>'");
    const int total = parse_int_strict(toks[1], tok_what(1));
    if (total > kMaxSpecParticles)
      throw std::invalid_argument("state spec: particle count beyond desk scale");
    const double theta = parse_real_strict(toks[2], tok_what(2));
    try {
      return one_axis_twist(total, theta);
    } catch (const std::domain_error& e) {
      throw std::invalid_argument("state spec: " + std::string(e.what()));
    }
  }
  if (toks[0] == "amps") {
    if (toks.size() < 2)
      throw std::invalid_argument("state spec: 'amps' needs at least one amplitude");
    if (toks.size() > std::size_t(kMaxSpecParticles) + 2)
      throw std::invalid_argument("state spec: particle count beyond desk scale");
    Eigen::VectorXcd amps(toks.size() - 1);
    for (std::size_t i = 1; i < toks.size(); ++i) {
      try {
        amps(i - 1) = parse_complex(toks[i]);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(tok_what(i) + ": " + e.what());
      }
    }
    const double norm = amps.norm();
    if (norm <= kRankTol)
      throw std::invalid_argument("state spec: amplitude list has zero norm");
    amps /= norm;
    return TwoModeState(static_cast<int>(toks.size()) - 2, std::move(amps));
  }
  throw std::invalid_argument("state spec: token 1: unknown kind '" + toks[0] +
                              "' (expected fock, oat or amps)");
}

std::pair<cplx, cplx> normalize_splitter(cplx r, cplx t) {
  const double sum = std::norm(r) + std::norm(t);
  if (std::abs(sum - 1.0) > kUnitSlack)
    throw std::invalid_argument("splitter: |r|^2 + |t|^2 = " + std::to_string(sum) +
                                " is too far from 1");
  const double scale = 1.0 / std::sqrt(sum);
  return {r * scale, t * scale};
}

RunRecord cmd_split(const std::string& state_spec, const std::string& r_text,
                    const std::string& t_text,
                    const std::vector<std::string>& sector_filters,
                    const GlobalOptions& opts) {
  RunRecord record = make_record("split", opts);
  record.params.add("state", state_spec);
  const auto [r, t] = normalize_splitter(parse_complex(r_text), parse_complex(t_text));
  record.params.add("r", format_complex(r));
  record.params.add("t", format_complex(t));
  for (const std::string& f : sector_filters) record.params.add("filter", f);

  const TwoModeState state = parse_state_spec(state_spec);
  const int n = state.total_particles();
  const SectoredState split = beamsplit(state, {r, t});

  record.results.add("particles", std::to_string(n));
  record.results.add("total_probability", format_real(split.total_probability()));
  TreeNode& sectors = record.results.add("sectors");
  record.table.push_back(
      {"left", "right", "weight_re", "weight_im", "probability", "entropy"});

  auto emit_sector = [&](const std::vector<int>& key) {
    const SectorProjection proj = project_sector(split, key);
    TreeNode& node = sectors.add("sector " + counts_text(key, ','));
    node.add("probability", format_real(proj.probability));
    std::vector<std::string> row{std::to_string(key[0]), std::to_string(key[1])};
    if (proj.state) {
      const cplx w = split.sectors().at(key).weight;
      node.add("weight", format_complex(w));
      const SchmidtDecomposition sd = schmidt_of_joint(*proj.state);
      add_schmidt_node(node, sd);
      add_joint_amplitudes(node, *proj.state);
      row.insert(row.end(),
                 {format_real(w.real()), format_real(w.imag()),
                  format_real(proj.probability), format_real(schmidt_entropy(sd))});
    } else {
      row.insert(row.end(), {"0", "0", "0", "0"});
    }
    record.table.push_back(std::move(row));
  };

  if (sector_filters.empty()) {
    for (const auto& [key, sector] : split.sectors()) emit_sector(key);
  } else {
    for (const std::string& f : sector_filters) {
      const auto [a, b] = parse_int_pair(f);
      emit_sector({a, b});
    }
  }
  return record;
}

RunRecord cmd_schmidt(const std::string& state_spec, int left_particles,
                      const GlobalOptions& opts) {
  RunRecord record = make_record("schmidt", opts);
  record.params.add("state", state_spec);
  record.params.add("partition", std::to_string(left_particles));

  const TwoModeState state = parse_state_spec(state_spec);
  const int n = state.total_particles();
  if (left_particles < 1 || left_particles > n - 1)
    throw std::domain_error("schmidt: partition must leave particles on both sides");
  const int right_particles = n - left_particles;

  record.results.add("particles", std::to_string(n));
  record.results.add("partition",
                     pair_text({left_particles, right_particles}));

  const SchmidtDecomposition mode_sd =
      schmidt_of_joint(ideal_mode_split(state, left_particles, right_particles));
  record.results.add("entropy", format_real(schmidt_entropy(mode_sd)));
  TreeNode& mode_node = record.results.add("mode_spectrum");
  for (std::size_t i = 0; i < mode_sd.coefficients.size(); ++i)
    mode_node.add("coefficient " + std::to_string(i),
                  format_real(mode_sd.coefficients[i]));

  // Occupation labels are only canonical for a basis-state input.
  int nonzero = 0, basis_n = 0;
  for (int k = 0; k <= n; ++k)
    if (state.amplitude(k) != cplx{0.0, 0.0}) {
      ++nonzero;
      basis_n = k;
    }
  if (nonzero == 1) {
    const SchmidtDecomposition labeled =
        mode_schmidt_coeffs(basis_n, n, left_particles, right_particles);
    TreeNode& levels = record.results.add("levels");
    for (std::size_t i = 0; i < labeled.coefficients.size(); ++i)
      levels.add("level " + pair_text(labeled.left_labels[i]) + "|" +
                     pair_text(labeled.right_labels[i]),
                 format_real(labeled.coefficients[i]));
  }

  std::vector<double> particle_coeffs;
  bool have_particle = false;
  double deviation = 0.0;
  if (n <= kMaxDenseParticles) {
    const SchmidtDecomposition particle_sd =
        particle_schmidt(to_first_quantization(state), left_particles);
    particle_coeffs = particle_sd.coefficients;
    have_particle = true;
    const std::size_t len =
        std::max(mode_sd.coefficients.size(), particle_coeffs.size());
    for (std::size_t i = 0; i < len; ++i) {
      const double a = i < mode_sd.coefficients.size() ? mode_sd.coefficients[i] : 0.0;
      const double b = i < particle_coeffs.size() ? particle_coeffs[i] : 0.0;
      deviation = std::max(deviation, std::abs(a - b));
    }
    TreeNode& part_node = record.results.add("particle_spectrum");
    for (std::size_t i = 0; i < particle_coeffs.size(); ++i)
      part_node.add("coefficient " + std::to_string(i),
                    format_real(particle_coeffs[i]));
    record.results.add("max_deviation", format_real(deviation));
  } else {
    record.results.add("particle_spectrum",
                       "omitted (first quantization limited to N <= 14)");
  }

  record.table.push_back(
      {"index", "mode_coefficient", "particle_coefficient", "abs_difference"});
  const std::size_t rows =
      std::max(mode_sd.coefficients.size(), particle_coeffs.size());
  for (std::size_t i = 0; i < rows; ++i) {
    const bool has_mode = i < mode_sd.coefficients.size();
    const bool has_part = have_particle && i < particle_coeffs.size();
    const double a = has_mode ? mode_sd.coefficients[i] : 0.0;
    const double b = has_part ? particle_coeffs[i] : 0.0;
    record.table.push_back({std::to_string(i),
                            has_mode ? format_real(a) : std::string{},
                            has_part ? format_real(b) : std::string{},
                            have_particle ? format_real(std::abs(a - b))
                                          : std::string{}});
  }
  return record;
}

RunRecord cmd_extract(const std::string& state_spec, const std::string& target_text,
                      const std::string& r_text, const std::string& t_text,
                      long trials, int max_iterations, const GlobalOptions& opts) {
  RunRecord record = make_record("extract", opts);
  record.params.add("state", state_spec);
  record.params.add("target", target_text);
  const auto [r, t] = normalize_splitter(parse_complex(r_text), parse_complex(t_text));
  record.params.add("r", format_complex(r));
  record.params.add("t", format_complex(t));
  record.params.add("trials", std::to_string(trials));
  record.params.add("max_iterations", std::to_string(max_iterations));

  const TwoModeState state = parse_state_spec(state_spec);
  const int n = state.total_particles();

  ProtocolConfig config;
  config.target = parse_int_pair(target_text);
  config.schedule = {SplitterParams{r, t}};
  config.max_iterations = max_iterations;
  config.rng_seed = opts.seed;
  config.cross_check = n <= 6;  // full joint-state tracking stays cheap here

  const EnsembleStats stats = run_ensemble(state, config, trials);

  record.results.add("particles", std::to_string(n));
  record.results.add("target", pair_text(config.target));
  record.results.add("cross_check", config.cross_check ? "on" : "off");
  record.results.add("trials", std::to_string(stats.trials));
  record.results.add("failures", std::to_string(stats.failures));
  record.results.add("failure_fraction", format_real(stats.failure_fraction));
  record.results.add("early_acceptance_rate",
                     format_real(stats.early_acceptance_rate));
  record.results.add("mean_iterations", format_real(stats.mean_iterations));
  record.results.add("mean_fidelity", format_real(stats.mean_fidelity));
  record.results.add("min_fidelity", format_real(stats.min_fidelity));
  record.results.add(
      "two_step_bound",
      format_real(two_step_bound(n, 0, config.target.first, config.target.second,
                                 config.schedule[0])));

  TreeNode& hist = record.results.add("histogram");
  for (std::size_t k = 0; k < stats.successes_by_iteration.size(); ++k)
    if (stats.successes_by_iteration[k] > 0)
      hist.add("iterations " + std::to_string(k),
               std::to_string(stats.successes_by_iteration[k]));

  bool have_sample = false;
  for (long t_idx = 0; t_idx < trials && !have_sample; ++t_idx) {
    const ProtocolResult r_trial =
        run_trial(state, config, static_cast<std::uint64_t>(t_idx));
    if (!r_trial.success) continue;
    have_sample = true;
    TreeNode& sample = record.results.add("sample");
    sample.add("trial", std::to_string(t_idx));
    sample.add("iterations", std::to_string(r_trial.iterations_used));
    std::string traj;
    for (const auto& s : r_trial.sector_trajectory) {
      if (!traj.empty()) traj += ' ';
      traj += pair_text(s);
    }
    if (!traj.empty()) sample.add("trajectory", traj);
    sample.add("fidelity", format_real(r_trial.fidelity));
    add_joint_amplitudes(sample, *r_trial.output_state);
  }
  if (!have_sample) record.results.add("sample", "none");

  record.table.push_back({"iterations", "successes"});
  for (std::size_t k = 0; k < stats.successes_by_iteration.size(); ++k)
    record.table.push_back(
        {std::to_string(k), std::to_string(stats.successes_by_iteration[k])});
  return record;
}

RunRecord cmd_verify_mixing(const std::string& map_path, const GlobalOptions& opts) {
  RunRecord record = make_record("verify-mixing", opts);
  record.params.add("map", map_path);

  std::ifstream file(map_path);
  if (!file) throw std::runtime_error("cannot open map file '" + map_path + "'");
  const MixingMap map = load_mixing_map(file);
  const CharacterizeResult result = characterize(map, opts.tolerance);

  record.results.add("particles", std::to_string(map.total_particles()));
  record.results.add("blocks", std::to_string(map.blocks().size()));
  record.results.add("verdict", result.ok ? "pass" : "fail");
  record.table.push_back(
      {"in_left", "in_right", "out_left", "out_right", "coeff_re", "coeff_im"});
  if (result.ok) {
    TreeNode& coeffs = record.results.add("coefficients");
    for (const auto& [key, c] : result.coefficients) {
      coeffs.add("C " + std::to_string(key[0]) + "," + std::to_string(key[1]) +
                     "->" + std::to_string(key[2]) + "," + std::to_string(key[3]),
                 format_complex(c));
      record.table.push_back({std::to_string(key[0]), std::to_string(key[1]),
                              std::to_string(key[2]), std::to_string(key[3]),
                              format_real(c.real()), format_real(c.imag())});
    }
  } else {
    const MixingDiagnostic& d = result.diagnostic;
    TreeNode& violation = record.results.add("violation");
    violation.add("check", d.check);
    violation.add("block", std::to_string(d.where[0]) + "," +
                               std::to_string(d.where[1]) + "->" +
                               std::to_string(d.where[2]) + "," +
                               std::to_string(d.where[3]));
    violation.add("row", std::to_string(d.row));
    violation.add("col", std::to_string(d.col));
    violation.add("magnitude", format_real(d.magnitude));
    violation.add("detail", d.message);
  }
  return record;
}

RunRecord cmd_bounds(const std::string& state_spec, const std::string& split_text,
                     const std::string& sweep_text, const GlobalOptions& opts) {
  RunRecord record = make_record("bounds", opts);
  record.params.add("state", state_spec);
  record.params.add("split", split_text);
  if (!sweep_text.empty()) record.params.add("sweep", sweep_text);

  const auto [left, right] = parse_int_pair(split_text);
  record.table.push_back({"theta", "xi_squared", "tangle", "pair_concurrence",
                          "monogamy_bound", "squeezing_bound"});

  auto emit = [&](TreeNode& node, const BoundReport& rep, const std::string& theta) {
    node.add("tangle", format_real(rep.tangle));
    node.add("pair_concurrence", format_real(rep.pair_concurrence));
    node.add("monogamy_bound", format_real(rep.monogamy_bound));
    node.add("monogamy_satisfied", rep.monogamy_satisfied ? "true" : "false");
    if (rep.squeezing_defined) {
      node.add("xi_squared", format_real(rep.xi_squared));
      node.add("squeezing_bound", format_real(rep.squeezing_bound));
      node.add("squeezing_satisfied", rep.squeezing_satisfied ? "true" : "false");
    } else {
      node.add("squeezing", "undefined (mean spin vanishes)");
    }
    record.table.push_back(
        {theta, rep.squeezing_defined ? format_real(rep.xi_squared) : std::string{},
         format_real(rep.tangle), format_real(rep.pair_concurrence),
         format_real(rep.monogamy_bound),
         rep.squeezing_defined ? format_real(rep.squeezing_bound) : std::string{}});
  };

  if (sweep_text.empty()) {
    const TwoModeState state = parse_state_spec(state_spec);
    record.results.add("particles", std::to_string(state.total_particles()));
    record.results.add("split", pair_text({left, right}));
    emit(record.results, entanglement_bounds(state, left, right), "");
    return record;
  }

  // Sweep: the spec must be an "oat" state; its theta is replaced per point.
  const std::vector<std::string> toks = whitespace_tokens(state_spec);
  if (toks.empty() || toks[0] != "oat")
    throw std::invalid_argument("bounds: sweep needs an 'oat' state spec");
  parse_state_spec(state_spec);  // full grammar check
  const int n = parse_int_strict(toks[1], "state spec: token 2");

  const std::size_t c1 = sweep_text.find(':');
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                                 : sweep_text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw std::invalid_argument("bounds: sweep must be 'start:stop:count'");
  const double start = parse_real_strict(sweep_text.substr(0, c1), "sweep start");
  const double stop =
      parse_real_strict(sweep_text.substr(c1 + 1, c2 - c1 - 1), "sweep stop");
  const int count = parse_int_strict(sweep_text.substr(c2 + 1), "sweep count");
  if (count < 1) throw std::invalid_argument("bounds: sweep count must be positive");

  record.results.add("particles", std::to_string(n));
  record.results.add("split", pair_text({left, right}));
  TreeNode& points = record.results.add("points");
  for (int i = 0; i < count; ++i) {
    const double theta =
        count == 1 ? start : start + (stop - start) * double(i) / double(count - 1);
    const TwoModeState state = one_axis_twist(n, theta);
    TreeNode& node = points.add("theta " + format_real(theta));
    emit(node, entanglement_bounds(state, left, right), format_real(theta));
  }
  return record;
}

RunRecord cmd_multimode_split(const std::string& state_spec,
                              const std::vector<std::string>& alpha_texts,
                              const GlobalOptions& opts) {
  RunRecord record = make_record("multimode-split", opts);
  record.params.add("state", state_spec);
  if (alpha_texts.empty())
    throw std::invalid_argument("multimode-split: need at least one alpha");

  NetworkColumn column;
  double sum = 0.0;
  for (const std::string& text : alpha_texts) {
    column.alphas.push_back(parse_complex(text));
    sum += std::norm(column.alphas.back());
  }
  if (std::abs(sum - 1.0) > kUnitSlack)
    throw std::invalid_argument("multimode-split: column norm " + std::to_string(sum) +
                            " is too far from 1");
  const double scale = 1.0 / std::sqrt(sum);
  for (cplx& a : column.alphas) {
    a *= scale;
    record.params.add("alpha", format_complex(a));
  }

  const TwoModeState state = parse_state_spec(state_spec);
  const SectoredState split = multimode_split(state, column);

  record.results.add("particles", std::to_string(state.total_particles()));
  record.results.add("modes", std::to_string(column.num_modes()));
  record.results.add("total_probability", format_real(split.total_probability()));
  TreeNode& sectors = record.results.add("sectors");
  record.table.push_back({"sector", "probability", "weight_re", "weight_im"});
  for (const auto& [key, sector] : split.sectors()) {
    TreeNode& node = sectors.add("sector " + counts_text(key, ','));
    node.add("weight", format_complex(sector.weight));
    node.add("probability", format_real(std::norm(sector.weight)));
    add_joint_amplitudes(node, sector.state);
    record.table.push_back({counts_text(key, ';'),
                            format_real(std::norm(sector.weight)),
                            format_real(sector.weight.real()),
                            format_real(sector.weight.imag())});
  }
  return record;
}

}  // namespace modesplit::cli
