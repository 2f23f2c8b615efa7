#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "modesplit/cli.hpp"
#include "modesplit/mixing.hpp"
#include "modesplit/report.hpp"
#include "oracles.hpp"

using namespace modesplit;

namespace {

const TreeNode& child_of(const TreeNode& node, const std::string& key) {
  for (const TreeNode& child : node.children)
    if (child.key == key) return child;
  throw std::runtime_error("missing key: " + key);
}

bool has_child(const TreeNode& node, const std::string& key) {
  for (const TreeNode& child : node.children)
    if (child.key == key) return true;
  return false;
}

double leaf_as_real(const TreeNode& node, const std::string& key) {
  return std::stod(child_of(node, key).value);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("tree serialization round trips") {
    TreeNode root("report");
    root.add("alpha", "1");
    TreeNode& sub = root.add("nested");
    sub.add("value", "0.5,-0.25");
    sub.add("empty leaf", "");
    root.add("omega", "text with spaces");

    const std::string text = serialize_tree(root);
    CHECK(parse_tree(text) == root);

    CHECK_THROWS_AS(parse_tree("a: 1\nb: 2\n"), std::runtime_error);  // two roots
    CHECK_THROWS_AS(parse_tree("root:\n   three: spaces\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_tree("root:\n\tx: 1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_tree("root:\n  child\n"), std::runtime_error);
    try {
      parse_tree("root:\n  ok: 1\n      jumped: 2\n");
      CHECK(false);
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }

  TEST_CASE("numeric formatting is stable") {
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");
    CHECK(format_complex(cplx{0.25, -0.5}) == "0.25,-0.5");
    CHECK(format_real(1e-300) == "1e-300");
  }

  TEST_CASE("state specs") {
    const TwoModeState fock = cli::parse_state_spec("fock 2 3");
    CHECK(fock.total_particles() == 3);
    CHECK(fock.amplitude(2) == cplx{1.0, 0.0});

    const TwoModeState oat = cli::parse_state_spec("oat 4 0.2");
    CHECK(oat.total_particles() == 4);
    CHECK(oat.is_normalized());

    // Unnormalized amplitude lists are rescaled; this one is "fock 1 2".
    const TwoModeState amps = cli::parse_state_spec("amps 0 5 0");
    CHECK(amps.total_particles() == 2);
    CHECK(std::abs(amps.amplitude(1) - cplx{1, 0}) < 1e-15);

    const TwoModeState bell = cli::parse_state_spec("amps 1 0 0,1");
    CHECK(std::abs(bell.amplitude(0) - cplx{1.0 / std::sqrt(2.0), 0}) < 1e-12);
    CHECK(std::abs(bell.amplitude(2) - cplx{0, 1.0 / std::sqrt(2.0)}) < 1e-12);

    CHECK_THROWS_AS(cli::parse_state_spec(""), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_state_spec("fock 4 3"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_state_spec("fock 1"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_state_spec("oat 0 0.1"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_state_spec("amps 0 0"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_state_spec("amps 1 2x"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_state_spec("coherent 3"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_state_spec("fock 1 5000"), std::invalid_argument);
    try {
      cli::parse_state_spec("amps 1 bad 0");
      CHECK(false);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("token 3") != std::string::npos);
    }
  }

  TEST_CASE("splitter normalization") {
    const auto [r, t] = cli::normalize_splitter(cplx{0.6, 0}, cplx{0.8, 0});
    CHECK(std::abs(std::norm(r) + std::norm(t) - 1.0) < 1e-15);
    CHECK(std::abs(r - cplx{0.6, 0}) < 1e-12);
    const double s = 1.0 / std::sqrt(2.0);
    const auto [r2, t2] =
        cli::normalize_splitter(cplx{s * (1 + 3e-7), 0}, cplx{s, 0});
    CHECK(std::abs(std::norm(r2) + std::norm(t2) - 1.0) < 1e-15);
    CHECK_THROWS_AS(cli::normalize_splitter(cplx{1.0, 0}, cplx{0.1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_complex("1+2i"), std::invalid_argument);
    CHECK(cli::parse_complex("-0.5,0.25") == cplx{-0.5, 0.25});
    CHECK(cli::parse_int_pair("3,1") == std::pair<int, int>{3, 1});
    CHECK_THROWS_AS(cli::parse_int_pair("3,"), std::invalid_argument);
  }

  TEST_CASE("split command") {
    cli::GlobalOptions opts;
    const std::string s = "0.70710678118654752";
    const RunRecord rec = cli::cmd_split("fock 1 2", s, s, {}, opts);
    CHECK(rec.command == "split");
    CHECK(std::abs(leaf_as_real(rec.results, "total_probability") - 1.0) < 1e-11);
    const TreeNode& sectors = child_of(rec.results, "sectors");
    REQUIRE(sectors.children.size() == 3);
    const TreeNode& shared = child_of(sectors, "sector 1,1");
    CHECK(std::abs(leaf_as_real(shared, "probability") - 0.5) < 1e-11);
    const TreeNode& schmidt = child_of(shared, "schmidt");
    CHECK(std::abs(leaf_as_real(schmidt, "entropy") - 1.0) < 1e-10);
    CHECK(has_child(shared, "amplitudes"));

    // Filters restrict the sector list; absent sectors report zero.
    const RunRecord chosen =
        cli::cmd_split("fock 1 2", "1", "0", {"0,2"}, opts);
    const TreeNode& only = child_of(chosen.results, "sectors");
    REQUIRE(only.children.size() == 1);
    CHECK(leaf_as_real(only.children[0], "probability") == 0.0);

    // Probabilities across sectors sum to one.
    double total = 0.0;
    for (const TreeNode& sector : sectors.children)
      total += leaf_as_real(sector, "probability");
    CHECK(std::abs(total - 1.0) < 1e-9);

    // The serialized document is reproducible and parses back to itself.
    const RunRecord again = cli::cmd_split("fock 1 2", s, s, {}, opts);
    CHECK(again == rec);
    CHECK(again.tree_text() == rec.tree_text());
    CHECK(parse_run_record(rec.tree_text()) == rec);
    CHECK(rec.csv_text().rfind("left,right,", 0) == 0);
  }

  TEST_CASE("schmidt command") {
    cli::GlobalOptions opts;
    const RunRecord rec = cli::cmd_schmidt("fock 2 3", 2, opts);
    const TreeNode& modes = child_of(rec.results, "mode_spectrum");
    REQUIRE(modes.children.size() == 2);
    CHECK(std::abs(std::stod(modes.children[0].value) - std::sqrt(2.0 / 3.0)) <
          1e-10);
    CHECK(std::abs(std::stod(modes.children[1].value) - std::sqrt(1.0 / 3.0)) <
          1e-10);
    const double entropy = leaf_as_real(rec.results, "entropy");
    CHECK(std::abs(entropy - (std::log2(3.0) - 2.0 / 3.0)) < 1e-10);
    CHECK(has_child(rec.results, "levels"));  // labels exist for basis states
    CHECK(has_child(rec.results, "particle_spectrum"));
    CHECK(leaf_as_real(rec.results, "max_deviation") < 1e-10);

    // Superpositions have no labeled closed form but still match spectra.
    const RunRecord mixed = cli::cmd_schmidt("amps 1 0 1", 1, opts);
    CHECK(!has_child(mixed.results, "levels"));
    CHECK(leaf_as_real(mixed.results, "max_deviation") < 1e-10);

    // Beyond the dense limit the particle route is omitted, not faked.
    const RunRecord big = cli::cmd_schmidt("fock 8 16", 8, opts);
    const TreeNode& omitted = child_of(big.results, "particle_spectrum");
    CHECK(omitted.children.empty());
    CHECK(omitted.value.find("omitted") != std::string::npos);
    CHECK(!has_child(big.results, "max_deviation"));

    CHECK_THROWS_AS(cli::cmd_schmidt("fock 1 2", 2, opts), std::domain_error);
  }

  TEST_CASE("extract command") {
    cli::GlobalOptions opts;
    opts.seed = 42;
    const std::string s = "0.70710678118654752";
    const RunRecord rec = cli::cmd_extract("fock 1 3", "2,1", s, s, 400, 50, opts);
    CHECK(child_of(rec.results, "cross_check").value == "on");
    CHECK(leaf_as_real(rec.results, "trials") == 400);
    CHECK(leaf_as_real(rec.results, "failures") == 0);
    const double early = leaf_as_real(rec.results, "early_acceptance_rate");
    CHECK(early > 0.75 - 3 * 0.0217);  // 3 sigma at 400 trials
    CHECK(early < 0.75 + 3 * 0.0217);
    CHECK(std::abs(leaf_as_real(rec.results, "mean_fidelity") - 1.0) < 1e-10);
    CHECK(std::abs(leaf_as_real(rec.results, "two_step_bound") - 3.0 / 64.0) < 1e-12);
    CHECK(has_child(rec.results, "histogram"));
    const TreeNode& sample = child_of(rec.results, "sample");
    CHECK(std::abs(leaf_as_real(sample, "fidelity") - 1.0) < 1e-10);
    CHECK(has_child(sample, "amplitudes"));

    // Identical seeds give byte-identical documents.
    const RunRecord again = cli::cmd_extract("fock 1 3", "2,1", s, s, 400, 50, opts);
    CHECK(again.tree_text() == rec.tree_text());
    CHECK(again.csv_text() == rec.csv_text());

    cli::GlobalOptions other = opts;
    other.seed = 43;
    const RunRecord moved = cli::cmd_extract("fock 1 3", "2,1", s, s, 400, 50, other);
    CHECK(moved.tree_text() != rec.tree_text());

    // Large particle numbers drop the dense cross-check.
    const RunRecord big = cli::cmd_extract("fock 4 8", "4,4", s, s, 5, 50, opts);
    CHECK(child_of(big.results, "cross_check").value == "off");

    CHECK_THROWS_AS(cli::cmd_extract("fock 1 3", "2,2", s, s, 10, 50, opts),
                    std::domain_error);
  }

  TEST_CASE("verify-mixing command") {
    cli::GlobalOptions opts;
    const std::string good_path = "/tmp/modesplit_test_map_good.txt";
    const std::string bad_path = "/tmp/modesplit_test_map_bad.txt";
    const double s = 1.0 / std::sqrt(2.0);
    const MixingMap map = induced_map(SplitterParams{s, s}, 2);
    {
      std::ofstream out(good_path);
      save_mixing_map(map, out);
    }
    const RunRecord pass = cli::cmd_verify_mixing(good_path, opts);
    CHECK(child_of(pass.results, "verdict").value == "pass");
    const TreeNode& coeffs = child_of(pass.results, "coefficients");
    CHECK(coeffs.children.size() == map.blocks().size());
    CHECK(pass.csv_text().rfind("in_left,", 0) == 0);

    MixingMap broken = map;
    Eigen::MatrixXcd block = *broken.block({1, 1, 1, 1});
    block(0, 0) += cplx{0.01, 0};
    broken.set_block({1, 1, 1, 1}, block);
    {
      std::ofstream out(bad_path);
      save_mixing_map(broken, out);
    }
    const RunRecord fail = cli::cmd_verify_mixing(bad_path, opts);
    CHECK(child_of(fail.results, "verdict").value == "fail");
    const TreeNode& violation = child_of(fail.results, "violation");
    CHECK(child_of(violation, "block").value == "1,1->1,1");
    CHECK(leaf_as_real(violation, "magnitude") > 1e-3);

    CHECK_THROWS_AS(cli::cmd_verify_mixing("/tmp/does_not_exist_map.txt", opts),
                    std::runtime_error);
    std::remove(good_path.c_str());
    std::remove(bad_path.c_str());
  }

  TEST_CASE("bounds command") {
    cli::GlobalOptions opts;
    const RunRecord rec = cli::cmd_bounds("fock 2 3", "2,1", "", opts);
    CHECK(std::abs(leaf_as_real(rec.results, "tangle") - 8.0 / 9.0) < 1e-10);
    CHECK(std::abs(leaf_as_real(rec.results, "pair_concurrence") - 2.0 / 3.0) <
          1e-10);
    CHECK(std::abs(leaf_as_real(rec.results, "monogamy_bound") - 8.0 / 9.0) < 1e-10);
    CHECK(child_of(rec.results, "monogamy_satisfied").value == "true");

    // Vanishing mean spin reports the squeezing as undefined.
    const RunRecord flat = cli::cmd_bounds("fock 1 2", "1,1", "", opts);
    CHECK(child_of(flat.results, "squeezing").value ==
          "undefined (mean spin vanishes)");

    const RunRecord swept = cli::cmd_bounds("oat 4 0.1", "2,2", "0.05:0.25:5", opts);
    const TreeNode& points = child_of(swept.results, "points");
    REQUIRE(points.children.size() == 5);
    CHECK(points.children.front().key == "theta 0.05");
    CHECK(points.children.back().key == "theta 0.25");
    for (const TreeNode& point : points.children) {
      CHECK(child_of(point, "monogamy_satisfied").value == "true");
      if (has_child(point, "squeezing_satisfied"))
        CHECK(child_of(point, "squeezing_satisfied").value == "true");
    }
    CHECK(swept.table.size() == 6);  // header + 5 rows

    CHECK_THROWS_AS(cli::cmd_bounds("fock 2 3", "2,1", "0.1:0.2:3", opts),
                    std::invalid_argument);
    CHECK_THROWS_AS(cli::cmd_bounds("oat 4 0.1", "2,2", "0.1:0.2:0", opts),
                    std::invalid_argument);
    CHECK_THROWS_AS(cli::cmd_bounds("oat 4 0.1", "2,2", "garbled", opts),
                    std::invalid_argument);
  }

  TEST_CASE("multimode-split command") {
    cli::GlobalOptions opts;
    const std::string third = "0.57735026918962576";
    const RunRecord rec =
        cli::cmd_multimode_split("fock 1 2", {third, third, third}, opts);
    CHECK(std::abs(leaf_as_real(rec.results, "total_probability") - 1.0) < 1e-10);
    CHECK(child_of(rec.results, "modes").value == "3");
    const TreeNode& sectors = child_of(rec.results, "sectors");
    CHECK(sectors.children.size() == 6);  // compositions of 2 into 3 parts
    double total = 0.0;
    for (const TreeNode& sector : sectors.children)
      total += leaf_as_real(sector, "probability");
    CHECK(std::abs(total - 1.0) < 1e-9);
    // CSV sector labels keep cells comma-free.
    CHECK(rec.csv_text().find("1;1;0") != std::string::npos);

    CHECK_THROWS_AS(cli::cmd_multimode_split("fock 1 2", {"1", "1"}, opts),
                    std::invalid_argument);
    CHECK_THROWS_AS(cli::cmd_multimode_split("fock 1 2", {}, opts),
                    std::invalid_argument);
  }

  TEST_CASE("run records serialize completely") {
    cli::GlobalOptions opts;
    opts.seed = 9;
    opts.tolerance = 1e-9;
    const RunRecord rec = cli::cmd_bounds("oat 3 0.2", "2,1", "", opts);
    const RunRecord back = parse_run_record(rec.tree_text());
    CHECK(back == rec);
    CHECK(back.seed == 9);
    CHECK(back.command == "bounds");

    CHECK_THROWS_AS(parse_run_record("not-a-report:\n  x: 1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_run_record("modesplit-report:\n  bogus: 1\n"),
                    std::runtime_error);
  }
}
