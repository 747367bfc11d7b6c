#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "rankdiff/commands.hpp"
#include "rankdiff/config.hpp"

namespace {

int dispatch(const std::string& command, rankdiff::ExperimentConfig cfg,
             const rankdiff::RunOptions& opt) {
  using namespace rankdiff;
  if (command == "validate") return cmd_validate(cfg, std::cout);
  if (command == "laplace-table") return cmd_laplace_table(cfg, opt, std::cout);
  if (command == "chaoticity-scan")
    return cmd_chaoticity_scan(cfg, opt, std::cout);
  if (command == "sample") return cmd_sample(cfg, opt, std::cout);
  if (command == "simulate") return cmd_simulate(cfg, opt, std::cout);
  if (command == "wasserstein-report")
    return cmd_wasserstein_report(cfg, opt, std::cout);
  if (command == "selfcheck") return cmd_selfcheck(cfg, std::cout);
  std::cerr << "unknown command: " << command << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationary laws of rank-based particle systems: closed-form "
               "Laplace transforms, exact samplers, SDE simulation and "
               "Wasserstein diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global flags after the subcommand too

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  rankdiff::RunOptions opt;

  app.add_option("--config", config_path, "JSON experiment configuration");
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_flag("--strict", opt.strict,
               "exit 3 when a grid point leaves the admissible domain");
  app.add_option("--workers", opt.workers, "worker threads for scans")
      ->check(CLI::Range(1, 256));

  for (const char* name :
       {"validate", "laplace-table", "chaoticity-scan", "sample", "simulate",
        "wasserstein-report", "selfcheck"})
    app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);

  try {
    rankdiff::ExperimentConfig cfg = config_path.empty()
                                         ? rankdiff::default_config()
                                         : rankdiff::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    const std::string command = app.get_subcommands().front()->get_name();
    return dispatch(command, std::move(cfg), opt);
  } catch (const rankdiff::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
}
