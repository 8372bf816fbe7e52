#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <thread>

#include "commands.hpp"
#include "version.hpp"

int main(int argc, char** argv) {
  using namespace hslab::cli;
  CLI::App app{"hslab: radial Hardy-Sobolev problems on the Poincare ball"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned workers = 1;
  std::uint64_t seed = 20240101;

  const char* names[][2] = {
      {"constants", "print exponents and regime flags as JSON"},
      {"weights", "tabulate G and V_p on a grid"},
      {"bridge", "transport stored profiles and print the h, b tables"},
      {"solve", "solve the Dirichlet problem on the reduced ball"},
      {"bubble", "compute the entire solution of the limit equation"},
      {"continue", "continuation p -> 0 along the configured schedule"},
      {"blowup", "scale detection, envelope and compactness verdict"},
      {"verify", "Pohozaev, exponent and inequality checks"},
      {"sweep", "parameter grid on a worker pool"},
  };
  for (const auto& [name, help] : names) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--workers", workers, "worker threads for sweeps")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", seed, "seed for randomized checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  CommandContext ctx;
  try {
    ctx.config = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  ctx.out = out_dir.empty() ? ctx.config.output.directory : out_dir;
  ctx.workers = workers;
  ctx.seed = seed;
  return dispatch(app.get_subcommands().front()->get_name(), ctx);
}
