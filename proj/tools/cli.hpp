#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace afpp::cli {

enum ExitCode : int { kOk = 0, kConfig = 2, kIntegration = 3, kOptimization = 4 };

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

int simulate(const Options& o, std::ostream& log);
int analyze(const Options& o, std::ostream& log);
int sweep(const Options& o, std::ostream& log);
int optctl(const Options& o, std::ostream& log);
int nullclines(const Options& o, std::ostream& log);

/// Dispatches by subcommand name; unknown names are config errors.
int run(const std::string& command, const Options& o, std::ostream& log);

}  // namespace afpp::cli
