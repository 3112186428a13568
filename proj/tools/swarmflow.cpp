#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "swarmflow/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"swarmflow: 1D nonlocal compressible swarming solver"};
  std::string config;
  std::string out;
  int threads = 1;
  unsigned long seed = 0;
  app.add_option("--config", config, "configuration file")->required();
  app.add_option("--out", out, "output directory (overridden by SWARMFLOW_OUT)");
  app.add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomized modes");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), swarmflow::kExitConfig);
  }

  swarmflow::ExecOptions opt;
  opt.threads = threads;
  opt.seed = seed;
  if (const char* env = std::getenv("SWARMFLOW_OUT"); env && *env) opt.out_dir = env;
  else if (!out.empty()) opt.out_dir = out;

  swarmflow::RunConfig cfg;
  try {
    cfg = swarmflow::load_config(config);
  } catch (const swarmflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return swarmflow::kExitConfig;
  }
  const auto res = swarmflow::execute(cfg, opt);
  std::cerr << swarmflow::to_string(cfg.mode) << ": " << res.message << '\n';
  for (const auto& f : res.failed_assertions) std::cerr << "  failed: " << f << '\n';
  return res.exit_code;
}
