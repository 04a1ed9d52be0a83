#ifndef SUBPOIS_CLI_HPP
#define SUBPOIS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "subpois/kernels.hpp"

namespace subpois::cli {

enum ExitCode : int { kOk = 0, kConfig = 2, kNumerical = 3 };

struct LambdaGrid {
  double start = 0.1;
  double stop = 2.0;
  int points = 6;
  std::vector<double> values() const;
};

LambdaGrid parse_lambda_grid(const std::string& text);
kernels::Interval parse_window(const std::string& text);

struct RunConfig {
  std::string command;
  std::string kernel = "sine";
  kernels::Interval window{0.0, 1.0};
  int order = 200;
  LambdaGrid lambda;
  int n_max = 64;
  int n_compare = 8;
  std::uint64_t seed = 1;
  int samples = 1000;
  int workers = 1;
  std::string format = "json";
  std::string out = ".";
  std::string q_spec;
};

// Throws ConfigError on any violated invariant.
void validate(const RunConfig& config);

int cmd_bound(const RunConfig& config, std::ostream& log);
int cmd_exact(const RunConfig& config, std::ostream& log);
int cmd_compare(const RunConfig& config, std::ostream& log);
int cmd_sample(const RunConfig& config, std::ostream& log);

// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace subpois::cli

#endif  // SUBPOIS_CLI_HPP
