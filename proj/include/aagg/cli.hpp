#ifndef AAGG_CLI_HPP
#define AAGG_CLI_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aagg::cli {

struct CliConfig {
  std::vector<std::string> inputPaths; // nonempty
  std::optional<std::string> outputPath;
  bool noRewrite = false;
  bool noPrompt = false;
  bool useAnonymousVariable = false;
  int aggregateForm = 1;
  bool debug = false;
  bool runSolver = false;
  std::string solverCommand = "clingo";
  bool selfCheck = false;
  std::size_t oracleSizeCap = 24;
};

/// Result of command-line parsing: either a config, or an exit code (help
/// requested, bad flags).
struct CommandLine {
  std::optional<CliConfig> config;
  int exitCode = 0;
};

CommandLine parseCommandLine(const std::vector<std::string> &args, std::ostream &out,
                             std::ostream &err);

/// Output path derived from the first input filename: `ham.lp` becomes
/// `ham.aagg.lp`. Never reuses an input path or an existing file; on
/// collision a numeric infix is added (`ham.aagg.1.lp`, ...).
std::string deriveOutputPath(
    const std::string &firstInput, const std::vector<std::string> &allInputs = {},
    const std::function<bool(const std::string &)> &exists = nullptr);

/// Exit status: 0 ok, 1 parse errors, 2 unwritable output, 3 solver launch
/// failure. Prompts (one per proposed rewrite) read answers from `in`.
int run(const CliConfig &config, std::istream &in, std::ostream &out, std::ostream &err);

} // namespace aagg::cli

#endif
