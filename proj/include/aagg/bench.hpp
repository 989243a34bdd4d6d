#ifndef AAGG_BENCH_HPP
#define AAGG_BENCH_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace aagg::bench {

/// One solver run of an (encoding, instance) pair. A finished run carries the
/// measured wall-clock seconds (never above the limit); a timeout carries no
/// time.
struct RunRecord {
  std::string encoding;
  std::string instance;
  bool finished = false;
  double seconds = 0.0;
  double timeLimit = 0.0;
};

class SolverLaunchFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IncompleteMatrix : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EncodingStats {
  std::string encoding;
  int wins = 0;
  int exclusiveWins = 0; // every other encoding timed out
  int winsBy20 = 0;      // best <= 0.8 * reference
  int winsBy50 = 0;      // best <= 0.5 * reference
};

struct WinStats {
  std::vector<EncodingStats> perEncoding;
  int consideredInstances = 0; // instances where at least one encoding finished
};

/// Run `solverCommand <encoding> <instance>` for every pair, killing each
/// child at the time limit. Records come back in encoding-major order
/// regardless of scheduling. Exit status 127/126 aborts the whole matrix.
std::vector<RunRecord> runMatrix(const std::vector<std::string> &encodings,
                                 const std::vector<std::string> &instances,
                                 const std::string &solverCommand, double timeLimitSeconds,
                                 int parallelism, std::ostream &log);

/// Wins, exclusive wins and margin wins per encoding. The fastest finisher of
/// an instance wins (exact ties all win); a win is "by m" when the winning
/// time is at most (1-m) times the second-best finished time, or (1-m) times
/// the time limit for an exclusive win. Instances where nothing finished are
/// not considered. Throws IncompleteMatrix unless every pair occurs exactly
/// once.
WinStats computeStats(const std::vector<RunRecord> &records);

void writeCsv(std::ostream &os, const std::vector<RunRecord> &records);
std::vector<RunRecord> readCsv(std::istream &is);

struct BenchConfig {
  std::vector<std::string> encodings;
  std::vector<std::string> instances;
  std::string solverCommand = "clingo";
  double timeLimit = 200.0;
  int parallelism = 1;
};

/// Plain key = value lines: `encoding`, `instance`, `instance_dir` (expanded
/// to the files inside, sorted), `solver`, `time_limit`, `parallelism`.
/// `#` and `%` start comments.
BenchConfig parseConfig(std::istream &is);

/// Summary table: one row per encoding with counts and percentages.
std::string formatTable(const WinStats &stats);

} // namespace aagg::bench

#endif
