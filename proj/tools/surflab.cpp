#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace surflab::cli;
  CLI::App app{"surflab: spectral and localization experiments for random surface potentials"};
  app.set_version_flag("--version", SURFLAB_VERSION);
  app.require_subcommand(1);

  RunOptions opt;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out;
  std::string chosen;
  for (const std::string& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON config file")->required();
    sub->add_option("--seed", seed, "master seed (overrides run.seed)");
    sub->add_option("--workers", workers, "worker threads, 0 = all cores (overrides run.workers)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out, "output directory (overrides output.dir)");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const CLI::App* sub = app.get_subcommand(chosen);
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--workers")) opt.workers = workers;
  if (sub->count("--out")) opt.out = out;
  return run_file(chosen, opt);
}
