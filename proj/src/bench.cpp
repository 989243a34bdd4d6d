#include <aagg/bench.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <csignal>
#include <sys/wait.h>
#include <unistd.h>

namespace aagg::bench {

namespace {

std::string shellQuote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

struct ChildResult {
  bool finished = false;
  double seconds = 0.0;
  int exitStatus = 0;
};

ChildResult runChild(const std::string &command, double timeLimitSeconds) {
  using Clock = std::chrono::steady_clock;
  pid_t pid = fork();
  if (pid < 0) throw SolverLaunchFailure("fork failed");
  if (pid == 0) {
    setpgid(0, 0); // own process group so the whole pipeline can be killed
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);

  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(timeLimitSeconds));
  ChildResult result;
  int status = 0;
  for (;;) {
    pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) {
      result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      result.finished = true;
      result.exitStatus = WIFEXITED(status) ? WEXITSTATUS(status) : 128;
      break;
    }
    if (Clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.finished = false;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  return result;
}

} // namespace

std::vector<RunRecord> runMatrix(const std::vector<std::string> &encodings,
                                 const std::vector<std::string> &instances,
                                 const std::string &solverCommand, double timeLimitSeconds,
                                 int parallelism, std::ostream &log) {
  if (timeLimitSeconds <= 0) throw std::invalid_argument("time limit must be positive");
  if (parallelism < 1) parallelism = 1;
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  if (static_cast<unsigned>(parallelism) > hardware) {
    log << "warning: parallelism " << parallelism << " exceeds the " << hardware
        << " available cores; timings may be distorted\n";
  }

  struct Job {
    std::size_t slot;
    const std::string *encoding;
    const std::string *instance;
  };
  std::vector<Job> jobs;
  std::vector<RunRecord> records(encodings.size() * instances.size());
  std::size_t slot = 0;
  for (const std::string &enc : encodings) {
    for (const std::string &inst : instances) {
      jobs.push_back({slot++, &enc, &inst});
    }
  }

  std::mutex mx;
  std::size_t nextJob = 0;
  std::exception_ptr failure;
  bool aborted = false;

  auto worker = [&]() {
    for (;;) {
      Job job{};
      {
        std::lock_guard<std::mutex> lock(mx);
        if (aborted || nextJob >= jobs.size()) return;
        job = jobs[nextJob++];
      }
      try {
        std::string command =
            solverCommand + " " + shellQuote(*job.encoding) + " " + shellQuote(*job.instance) +
            " > /dev/null 2>&1";
        ChildResult child = runChild(command, timeLimitSeconds);
        if (child.finished && (child.exitStatus == 127 || child.exitStatus == 126)) {
          throw SolverLaunchFailure("solver command failed to launch: " + solverCommand);
        }
        RunRecord record;
        record.encoding = *job.encoding;
        record.instance = *job.instance;
        record.timeLimit = timeLimitSeconds;
        if (child.finished && child.seconds <= timeLimitSeconds) {
          record.finished = true;
          record.seconds = child.seconds;
        }
        std::lock_guard<std::mutex> lock(mx);
        records[job.slot] = std::move(record);
        log << (records[job.slot].finished ? "finished" : "timeout ") << "  "
            << *job.encoding << "  " << *job.instance;
        if (records[job.slot].finished)
          log << "  " << std::fixed << std::setprecision(3) << records[job.slot].seconds << "s";
        log << "\n";
      } catch (...) {
        std::lock_guard<std::mutex> lock(mx);
        if (!failure) failure = std::current_exception();
        aborted = true;
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int i = 0; i < parallelism; ++i) pool.emplace_back(worker);
  for (std::thread &t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

WinStats computeStats(const std::vector<RunRecord> &records) {
  std::vector<std::string> encodings;
  std::vector<std::string> instances;
  std::map<std::pair<std::string, std::string>, const RunRecord *> grid;
  for (const RunRecord &r : records) {
    if (std::find(encodings.begin(), encodings.end(), r.encoding) == encodings.end())
      encodings.push_back(r.encoding);
    if (std::find(instances.begin(), instances.end(), r.instance) == instances.end())
      instances.push_back(r.instance);
    auto [it, inserted] = grid.try_emplace({r.encoding, r.instance}, &r);
    if (!inserted) throw IncompleteMatrix("duplicate record for " + r.encoding + " / " + r.instance);
  }
  if (grid.size() != encodings.size() * instances.size())
    throw IncompleteMatrix("records do not cover the full encoding x instance grid");

  WinStats stats;
  for (const std::string &e : encodings) stats.perEncoding.push_back({e});

  for (const std::string &inst : instances) {
    std::vector<std::pair<double, std::size_t>> finished; // (seconds, encoding index)
    double timeLimit = 0.0;
    for (std::size_t e = 0; e < encodings.size(); ++e) {
      const RunRecord *r = grid.at({encodings[e], inst});
      timeLimit = r->timeLimit;
      if (r->finished) finished.emplace_back(r->seconds, e);
    }
    if (finished.empty()) continue; // nothing terminated: instance not considered
    ++stats.consideredInstances;

    std::sort(finished.begin(), finished.end());
    const double best = finished.front().first;
    const bool exclusive = finished.size() == 1;
    const double reference = exclusive ? timeLimit : finished[1].first;

    for (const auto &[seconds, e] : finished) {
      if (seconds > best) break;
      EncodingStats &enc = stats.perEncoding[e];
      ++enc.wins;
      if (exclusive) ++enc.exclusiveWins;
      if (best <= 0.8 * reference) ++enc.winsBy20;
      if (best <= 0.5 * reference) ++enc.winsBy50;
    }
  }
  return stats;
}

void writeCsv(std::ostream &os, const std::vector<RunRecord> &records) {
  os << "encoding,instance,outcome,seconds,limit\n";
  for (const RunRecord &r : records) {
    os << r.encoding << ',' << r.instance << ',' << (r.finished ? "finished" : "timeout") << ',';
    if (r.finished) os << std::fixed << std::setprecision(6) << r.seconds;
    os << ',' << std::fixed << std::setprecision(6) << r.timeLimit << "\n";
  }
}

std::vector<RunRecord> readCsv(std::istream &is) {
  std::vector<RunRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("encoding,", 0) == 0) continue; // header
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    while (fields.size() < 5) fields.emplace_back();
    RunRecord r;
    r.encoding = fields[0];
    r.instance = fields[1];
    r.finished = fields[2] == "finished";
    if (r.finished && !fields[3].empty()) r.seconds = std::stod(fields[3]);
    if (!fields[4].empty()) r.timeLimit = std::stod(fields[4]);
    out.push_back(std::move(r));
  }
  return out;
}

BenchConfig parseConfig(std::istream &is) {
  BenchConfig config;
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find_first_of("#%");
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const char *ws = " \t\r\n";
      s.erase(0, s.find_first_not_of(ws));
      auto end = s.find_last_not_of(ws);
      s.erase(end == std::string::npos ? 0 : end + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) continue;
    if (key == "encoding") {
      config.encodings.push_back(value);
    } else if (key == "instance") {
      config.instances.push_back(value);
    } else if (key == "instance_dir") {
      std::vector<std::string> files;
      for (const auto &entry : std::filesystem::directory_iterator(value)) {
        if (entry.is_regular_file()) files.push_back(entry.path().string());
      }
      std::sort(files.begin(), files.end());
      config.instances.insert(config.instances.end(), files.begin(), files.end());
    } else if (key == "solver") {
      config.solverCommand = value;
    } else if (key == "time_limit") {
      config.timeLimit = std::stod(value);
    } else if (key == "parallelism") {
      config.parallelism = std::stoi(value);
    }
  }
  return config;
}

std::string formatTable(const WinStats &stats) {
  std::ostringstream os;
  auto pct = [](int part, int whole) {
    std::ostringstream p;
    p << std::fixed << std::setprecision(1) << (whole > 0 ? 100.0 * part / whole : 0.0) << "%";
    return p.str();
  };
  std::size_t nameWidth = std::string("Encoding").size();
  for (const EncodingStats &e : stats.perEncoding) nameWidth = std::max(nameWidth, e.encoding.size());

  os << std::left << std::setw(static_cast<int>(nameWidth) + 2) << "Encoding"
     << std::setw(16) << "Wins" << std::setw(18) << "Exclusive Wins"
     << std::setw(16) << "Wins by 20%" << std::setw(16) << "Wins by 50%" << "\n";
  for (const EncodingStats &e : stats.perEncoding) {
    auto cell = [&](int count, int whole) { return std::to_string(count) + " (" + pct(count, whole) + ")"; };
    os << std::left << std::setw(static_cast<int>(nameWidth) + 2) << e.encoding
       << std::setw(16) << cell(e.wins, stats.consideredInstances)
       << std::setw(18) << cell(e.exclusiveWins, e.wins)
       << std::setw(16) << cell(e.winsBy20, e.wins)
       << std::setw(16) << cell(e.winsBy50, e.wins) << "\n";
  }
  os << "Considered instances: " << stats.consideredInstances << "\n";
  return os.str();
}

} // namespace aagg::bench
