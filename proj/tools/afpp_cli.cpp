#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Additional-food predator-prey toolkit"};
  app.require_subcommand(1);
  afpp::cli::Options opts;
  std::uint64_t seed = 0;

  for (const char* name : {"simulate", "analyze", "sweep", "optctl", "nullclines"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config, "run configuration (JSON)")->required();
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : afpp::cli::kConfig;
  }
  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed")) opts.seed = seed;
  return afpp::cli::run(chosen->get_name(), opts, std::cerr);
}
