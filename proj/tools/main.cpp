#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modesplit/cli.hpp"
#include "modesplit/version.hpp"

namespace {

int write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return std::cout ? 0 : 1;
  }
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) {
    std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using modesplit::RunRecord;
  namespace cli = modesplit::cli;

  CLI::App app{"splitting, mixing and entanglement of identical two-level bosons"};
  app.set_version_flag("--version", std::string(modesplit::kVersion));
  app.require_subcommand(1);

  cli::GlobalOptions opts;
  std::string format = "tree";
  std::string output;
  app.add_option("--seed", opts.seed, "RNG seed for sampling commands")
      ->capture_default_str();
  app.add_option("--tolerance", opts.tolerance, "numerical tolerance for checks")
      ->capture_default_str();
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"tree", "csv"}))
      ->capture_default_str();
  app.add_option("--output", output, "write the document to a file instead of stdout");

  std::function<RunRecord()> run;

  {
    CLI::App* sub = app.add_subcommand("split", "beamsplit a state into two modes");
    sub->fallthrough();
    auto state = std::make_shared<std::string>();
    auto r = std::make_shared<std::string>("0.7071067811865476");
    auto t = std::make_shared<std::string>("0.7071067811865476");
    auto filters = std::make_shared<std::vector<std::string>>();
    sub->add_option("--state", *state, "input state spec")->required();
    sub->add_option("--r", *r, "straight amplitude re[,im]")->capture_default_str();
    sub->add_option("--t", *t, "crossed amplitude re[,im]")->capture_default_str();
    sub->add_option("--sector", *filters, "restrict output to sectors 'k,l'");
    sub->callback([&run, state, r, t, filters, &opts] {
      run = [=, &opts] { return cli::cmd_split(*state, *r, *t, *filters, opts); };
    });
  }
  {
    CLI::App* sub = app.add_subcommand("schmidt", "mode and particle Schmidt spectra");
    sub->fallthrough();
    auto state = std::make_shared<std::string>();
    auto partition = std::make_shared<int>(1);
    sub->add_option("--state", *state, "input state spec")->required();
    sub->add_option("--partition", *partition, "particles on the left side")
        ->required();
    sub->callback([&run, state, partition, &opts] {
      run = [=, &opts] { return cli::cmd_schmidt(*state, *partition, opts); };
    });
  }
  {
    CLI::App* sub = app.add_subcommand(
        "extract", "repeat mixing and counting until the target split comes up");
    sub->fallthrough();
    auto state = std::make_shared<std::string>();
    auto target = std::make_shared<std::string>();
    auto r = std::make_shared<std::string>("0.7071067811865476");
    auto t = std::make_shared<std::string>("0.7071067811865476");
    auto trials = std::make_shared<long>(10000);
    auto max_iters = std::make_shared<int>(50);
    sub->add_option("--state", *state, "input state spec")->required();
    sub->add_option("--target", *target, "target split 'x,y'")->required();
    sub->add_option("--r", *r, "straight amplitude re[,im]")->capture_default_str();
    sub->add_option("--t", *t, "crossed amplitude re[,im]")->capture_default_str();
    sub->add_option("--trials", *trials, "ensemble size")->capture_default_str();
    sub->add_option("--max-iters", *max_iters, "iteration cap per trial")
        ->capture_default_str();
    sub->callback([&run, state, target, r, t, trials, max_iters, &opts] {
      run = [=, &opts] {
        return cli::cmd_extract(*state, *target, *r, *t, *trials, *max_iters, opts);
      };
    });
  }
  {
    CLI::App* sub = app.add_subcommand("verify-mixing",
                                       "check a mixing map file block by block");
    sub->fallthrough();
    auto map = std::make_shared<std::string>();
    sub->add_option("--map", *map, "mixing map file")->required();
    sub->callback([&run, map, &opts] {
      run = [=, &opts] { return cli::cmd_verify_mixing(*map, opts); };
    });
  }
  {
    CLI::App* sub = app.add_subcommand("bounds",
                                       "entanglement bounds from pair state and squeezing");
    sub->fallthrough();
    auto state = std::make_shared<std::string>();
    auto split = std::make_shared<std::string>();
    auto sweep = std::make_shared<std::string>();
    sub->add_option("--state", *state, "input state spec")->required();
    sub->add_option("--split", *split, "mode sizes 'c,d'")->required();
    sub->add_option("--sweep", *sweep, "theta sweep 'start:stop:count' (oat specs)");
    sub->callback([&run, state, split, sweep, &opts] {
      run = [=, &opts] { return cli::cmd_bounds(*state, *split, *sweep, opts); };
    });
  }
  {
    CLI::App* sub = app.add_subcommand("multimode-split",
                                       "split a state across a network column");
    sub->fallthrough();
    auto state = std::make_shared<std::string>();
    auto alphas = std::make_shared<std::vector<std::string>>();
    sub->add_option("--state", *state, "input state spec")->required();
    sub->add_option("--alpha", *alphas, "column amplitude re[,im] (repeatable)")
        ->required();
    sub->callback([&run, state, alphas, &opts] {
      run = [=, &opts] { return cli::cmd_multimode_split(*state, *alphas, opts); };
    });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const auto start = std::chrono::steady_clock::now();
    const RunRecord record = run();
    const std::string text =
        format == "csv" ? record.csv_text() : record.tree_text();
    const std::chrono::duration<double, std::milli> elapsed =
        std::chrono::steady_clock::now() - start;
    std::fprintf(stderr, "wall_ms %.3f\n", elapsed.count());
    return write_output(text, output);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
