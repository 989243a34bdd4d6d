#include <aagg/bench.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace aagg::bench;

int main(int argc, char **argv) {
  CLI::App app{"Runs encoding families against instance sets under a timeout and reports win statistics.",
               "aagg-bench"};
  app.require_subcommand(1);

  std::string configPath;
  std::string resultsPath = "results.csv";
  CLI::App *runCmd = app.add_subcommand("run", "execute the solver matrix described by a config file");
  runCmd->add_option("config", configPath, "config file (encoding/instance/solver/time_limit/parallelism lines)")
      ->required()
      ->check(CLI::ExistingFile);
  runCmd->add_option("-o,--output", resultsPath, "CSV results file")->capture_default_str();

  std::string csvPath;
  CLI::App *statsCmd = app.add_subcommand("stats", "recompute the summary table from a CSV results file");
  statsCmd->add_option("results", csvPath, "CSV results file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (runCmd->parsed()) {
      std::ifstream configFile(configPath);
      BenchConfig config = parseConfig(configFile);
      if (config.encodings.empty() || config.instances.empty()) {
        std::cerr << "error: config must list at least one encoding and one instance\n";
        return 1;
      }
      std::vector<RunRecord> records = runMatrix(config.encodings, config.instances,
                                                 config.solverCommand, config.timeLimit,
                                                 config.parallelism, std::cerr);
      std::ofstream csv(resultsPath);
      if (!csv) {
        std::cerr << "error: cannot write " << resultsPath << "\n";
        return 2;
      }
      writeCsv(csv, records);
      std::cout << formatTable(computeStats(records));
    } else {
      std::ifstream csv(csvPath);
      std::cout << formatTable(computeStats(readCsv(csv)));
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
