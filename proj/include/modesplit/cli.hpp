#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "modesplit/common.hpp"
#include "modesplit/report.hpp"
#include "modesplit/states.hpp"

namespace modesplit::cli {

// Splitter and network amplitudes given on the command line are accepted
// when within this distance of unit norm, then normalized exactly.
inline constexpr double kUnitSlack = 1e-6;

struct GlobalOptions {
  std::uint64_t seed = 0;
  double tolerance = kNormTol;
};

// "re" or "re,im". Throws std::invalid_argument with the offending text.
cplx parse_complex(const std::string& text);

// "a,b" with two integers.
std::pair<int, int> parse_int_pair(const std::string& text);

// State grammar: "fock n N" | "oat N theta" | "amps c0 c1 ... cN" with
// complex entries "re[,im]" (normalized). Errors carry the token position.
TwoModeState parse_state_spec(const std::string& spec);

// Rescale (r, t) to exact unit norm, rejecting pairs further than kUnitSlack
// from it.
std::pair<cplx, cplx> normalize_splitter(cplx r, cplx t);

RunRecord cmd_split(const std::string& state_spec, const std::string& r_text,
                    const std::string& t_text,
                    const std::vector<std::string>& sector_filters,
                    const GlobalOptions& opts);

RunRecord cmd_schmidt(const std::string& state_spec, int left_particles,
                      const GlobalOptions& opts);

RunRecord cmd_extract(const std::string& state_spec, const std::string& target_text,
                      const std::string& r_text, const std::string& t_text,
                      long trials, int max_iterations, const GlobalOptions& opts);

RunRecord cmd_verify_mixing(const std::string& map_path, const GlobalOptions& opts);

// sweep_text "start:stop:count" is optional (empty = single evaluation) and
// only meaningful for "oat" specs, whose theta is replaced per point.
RunRecord cmd_bounds(const std::string& state_spec, const std::string& split_text,
                     const std::string& sweep_text, const GlobalOptions& opts);

RunRecord cmd_multimode_split(const std::string& state_spec,
                              const std::vector<std::string>& alpha_texts,
                              const GlobalOptions& opts);

}  // namespace modesplit::cli
