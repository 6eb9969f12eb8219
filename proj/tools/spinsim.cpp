// spinsim: run spin-chain decoupling experiments from JSON configs.
//
// Exit codes: 0 success, 1 config error, 2 constraint violation,
// 3 numerical failure.

#include <cstdio>
#include <exception>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "spinchain/experiment.hpp"

using namespace spinchain;

namespace {

int run_command(const std::string& config_path, int jobs, const std::string& out_dir,
                std::uint64_t seed, bool seed_set, bool svg) {
  ExperimentConfig cfg = parse_config_file(config_path);
  if (seed_set) cfg.noise.seed = seed;
  validate_config(cfg);
  for (const auto& w : cfg.control.build().validity_warnings())
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (jobs <= 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
  RunResult result = run_experiment(cfg, jobs);
  for (const auto& path : write_outputs(result, dir, cfg.name, svg))
    std::printf("wrote %s\n", path.c_str());
  return 0;
}

int validate_command(const std::string& config_path) {
  ExperimentConfig cfg = parse_config_file(config_path);
  validate_config(cfg);
  for (const auto& w : cfg.control.build().validity_warnings())
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("%s: ok\n", cfg.name.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-chain dynamics under continuous decoupling fields"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 0;
  std::uint64_t seed = 0;
  bool svg = false;

  auto* run = app.add_subcommand("run", "run a config or preset file");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--jobs", jobs, "parallel noise realizations (0 = all cores)");
  run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "override the base noise seed");
  run->add_flag("--svg", svg, "also write SVG plots");

  auto* list = app.add_subcommand("list-presets", "list shipped presets");

  auto* validate = app.add_subcommand("validate", "parse and validate a config");
  validate->add_option("config", config_path, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run))
      return run_command(config_path, jobs, out_dir, seed, seed_opt->count() > 0, svg);
    if (app.got_subcommand(list)) {
      for (const auto& name : preset_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
    if (app.got_subcommand(validate)) return validate_command(config_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const ConstraintError& e) {
    std::fprintf(stderr, "constraint violation: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
