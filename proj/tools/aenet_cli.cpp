#include <CLI11.hpp>

#include <string>
#include <vector>

#include "aenet/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"aenet: adaptive elastic net, two-stage refit estimation, "
               "simulation benchmarks, and index-tracking backtests"};
  app.require_subcommand(1);

  aenet::cli::CommonFlags flags;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "config file (key = value sections)");
    sub->add_option("--out-dir", flags.out_dir, "output directory");
    sub->add_option("--seed", flags.seed, "seed override");
    sub->add_option("--workers", flags.workers, "worker thread count");
    sub->add_option("--set", overrides, "override a config key (key=value)");
  };

  const char* commands[] = {"fit", "path", "simulate", "benchmark", "track"};
  const char* descriptions[] = {
      "fit one penalized or two-stage model to a dataset CSV",
      "write the full regularization path for a dataset CSV",
      "draw a dataset from a simulation design",
      "run the replication benchmark over designs and methods",
      "run the rolling-window index-tracking backtest",
  };
  for (std::size_t i = 0; i < 5; ++i) add_common(app.add_subcommand(commands[i], descriptions[i]));

  CLI11_PARSE(app, argc, argv);

  for (const auto& kv : overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      return 1;
    }
    flags.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }

  return aenet::cli::run_command(app.get_subcommands().front()->get_name(), flags);
}
