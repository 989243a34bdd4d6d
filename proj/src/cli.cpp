#include <aagg/cli.hpp>

#include <aagg/depgraph.hpp>
#include <aagg/detector.hpp>
#include <aagg/oracle.hpp>
#include <aagg/parser.hpp>
#include <aagg/rewriter.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <sys/wait.h>

namespace aagg::cli {

CommandLine parseCommandLine(const std::vector<std::string> &args, std::ostream &out,
                             std::ostream &err) {
  CliConfig config;
  CLI::App app{"Rewrites rules that name a required number of distinct objects explicitly "
               "into counting-aggregate form.",
               "aagg"};
  app.add_option("-o,--output", config.outputPath, "output filename (derived from the first input when absent)");
  app.add_flag("--no-rewrite", config.noRewrite, "report candidate rules only; no prompts, no rewriting");
  app.add_flag("--no-prompt", config.noPrompt, "rewrite wherever possible without asking");
  app.add_flag("--use-anonymous-variable", config.useAnonymousVariable,
               "use the anonymous variable inside emitted aggregate elements");
  app.add_option("--aggregate-form", config.aggregateForm,
                 "output form: 1 = bound <= #count, 2 = not #count < bound, "
                 "3 = conjunction of not #count = i")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  app.add_flag("-d,--debug", config.debug, "print discovery traces and summary statistics");
  app.add_flag("-r,--run-clingo", config.runSolver, "run the solver on the output file");
  app.add_option("--solver-cmd", config.solverCommand, "solver command for -r")->capture_default_str();
  app.add_flag("--self-check", config.selfCheck,
               "verify answer-set equivalence of input and output with the built-in enumerator");
  app.add_option("--oracle-cap", config.oracleSizeCap, "Herbrand base cap for --self-check")
      ->capture_default_str();
  app.add_option("encodings", config.inputPaths, "input encoding files")->required();

  std::vector<const char *> argv;
  argv.push_back("aagg");
  for (const std::string &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    return {std::nullopt, app.exit(e, out, err)};
  }
  return {config, 0};
}

namespace {

std::string insertInfix(const std::string &path, const std::string &infix) {
  std::filesystem::path p(path);
  std::string ext = p.extension().string();
  std::filesystem::path result = p.parent_path() / (p.stem().string() + infix + ext);
  return result.string();
}

} // namespace

std::string deriveOutputPath(const std::string &firstInput, const std::vector<std::string> &allInputs,
                             const std::function<bool(const std::string &)> &exists) {
  auto fileExists = exists ? exists : [](const std::string &p) {
    std::error_code ec;
    return std::filesystem::exists(p, ec);
  };
  auto collides = [&](const std::string &candidate) {
    if (std::find(allInputs.begin(), allInputs.end(), candidate) != allInputs.end()) return true;
    return fileExists(candidate);
  };
  std::string candidate = insertInfix(firstInput, ".aagg");
  for (int k = 1; collides(candidate); ++k) {
    candidate = insertInfix(firstInput, ".aagg." + std::to_string(k));
  }
  return candidate;
}

namespace {

struct ProposedRewrite {
  std::size_t ruleIndex;
  RewriteResult result;
};

void printProposal(std::ostream &out, const Rule &original, const RewriteResult &result,
                   std::size_t ruleIndex) {
  out << "rule " << ruleIndex + 1 << ": " << render(original) << "\n";
  for (const Rule &r : result.replacementRules) out << "  -> " << render(r) << "\n";
}

bool promptYes(std::istream &in, std::ostream &out) {
  out << "Apply this rewriting? [y/N] " << std::flush;
  std::string answer;
  if (!std::getline(in, answer)) return false;
  return answer == "y" || answer == "Y" || answer == "yes" || answer == "Yes";
}

int streamSolver(const std::string &solverCommand, const std::string &outputPath, std::ostream &out,
                 std::ostream &err) {
  std::string command = solverCommand + " '" + outputPath + "' 2>&1";
  FILE *pipe = popen(command.c_str(), "r");
  if (!pipe) {
    err << "error: could not launch solver: " << solverCommand << "\n";
    return 3;
  }
  char buffer[4096];
  while (std::size_t got = fread(buffer, 1, sizeof buffer, pipe)) out.write(buffer, static_cast<std::streamsize>(got));
  int status = pclose(pipe);
  int exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : 128;
  if (exitCode == 127 || exitCode == 126) {
    err << "error: solver command failed to launch: " << solverCommand << "\n";
    return 3;
  }
  return 0;
}

} // namespace

int run(const CliConfig &config, std::istream &in, std::ostream &out, std::ostream &err) {
  if (config.inputPaths.empty()) {
    err << "error: at least one input encoding is required\n";
    return 1;
  }
  Program program;
  bool parseFailed = false;
  for (const std::string &path : config.inputPaths) {
    std::ifstream file(path);
    if (!file) {
      err << "error: cannot read input file " << path << "\n";
      return 1;
    }
    std::ostringstream text;
    text << file.rdbuf();
    ParseResult parsed = parse(text.str());
    for (const ParseDiagnostic &d : parsed.diagnostics) {
      const bool isError = d.severity == ParseDiagnostic::Severity::Error;
      if (isError || config.debug) {
        (isError ? err : out) << path << ":" << d.line << ":" << d.column << ": "
                              << (isError ? "error: " : "note: ") << d.message << "\n";
      }
      parseFailed = parseFailed || isError;
    }
    for (Rule &rule : parsed.program.statements) program.statements.push_back(std::move(rule));
  }
  if (parseFailed) return 1;

  const Program original = program;
  const std::vector<RewriteCandidate> candidates = findAllCandidates(program);
  const OutputForm form = outputFormFromId(config.aggregateForm);

  if (config.debug) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < program.statements.size(); ++i) {
      bool isCandidate = c < candidates.size() && candidates[c].ruleIndex == i;
      if (isCandidate) {
        const RewriteCandidate &cand = candidates[c++];
        out << "rule " << i + 1 << ": counting pattern over " << cand.predicate.name << "/"
            << cand.predicate.arity << ", bound " << cand.bound << ", variables";
        for (const std::string &v : cand.countingVars) out << " " << v;
        out << "\n";
      } else if (!program.statements[i].isRaw()) {
        out << "rule " << i + 1 << ": no counting pattern\n";
      } else {
        out << "rule " << i + 1 << ": passthrough statement\n";
      }
    }
    out << toDot(buildDependencyGraph(program));
  }

  std::vector<ProposedRewrite> accepted;
  std::set<Signature> freshPredicates;
  std::size_t refused = 0, declined = 0;

  if (config.noRewrite) {
    for (const RewriteCandidate &cand : candidates) {
      out << "candidate (rule " << cand.ruleIndex + 1 << "): "
          << render(program.statements[cand.ruleIndex]) << "\n";
    }
  } else {
    FreshNameIssuer issuer = makeIssuer(program);
    for (const RewriteCandidate &cand : candidates) {
      if (form != OutputForm::LowerBound) {
        SplitVerdict verdict = checkSplittable(program, cand);
        if (!verdict.splittable) {
          out << "rule " << cand.ruleIndex + 1 << ": aggregate form " << config.aggregateForm
              << " refused (" << verdict.reason << "); rule kept unchanged\n";
          ++refused;
          continue;
        }
      }
      FreshNameIssuer snapshot = issuer;
      RewriteResult result = rewrite(program, cand, form, config.useAnonymousVariable, issuer);
      printProposal(out, program.statements[cand.ruleIndex], result, cand.ruleIndex);
      if (!config.noPrompt && !promptYes(in, out)) {
        issuer = snapshot; // declined proposals release their fresh names
        ++declined;
        continue;
      }
      for (const Signature &s : result.freshPredicates) freshPredicates.insert(s);
      accepted.push_back({cand.ruleIndex, std::move(result)});
    }
  }

  std::vector<std::pair<std::size_t, RewriteResult>> batch;
  for (ProposedRewrite &p : accepted) batch.emplace_back(p.ruleIndex, std::move(p.result));
  const Program rewritten = applyRewrites(program, batch);

  if (config.debug) {
    out << "candidates: " << candidates.size() << ", rewritten: " << batch.size()
        << ", refused: " << refused << ", declined: " << declined << "\n";
  }

  if (config.selfCheck) {
    try {
      EquivalenceResult eq = equivalentModulo(original, rewritten, freshPredicates, config.oracleSizeCap);
      if (eq.equivalent) {
        out << "self-check: PASS\n";
      } else {
        out << "self-check: FAIL (answer set on the " << eq.witnessSide << " program only:";
        for (const Atom &a : *eq.witness) out << " " << render(a);
        out << ")\n";
      }
    } catch (const GroundingError &e) {
      out << "self-check: SKIPPED (" << e.what() << ")\n";
    }
  }

  const std::string outputPath =
      config.outputPath ? *config.outputPath : deriveOutputPath(config.inputPaths.front(), config.inputPaths);
  {
    std::ofstream file(outputPath);
    if (!file) {
      err << "error: cannot write output file " << outputPath << "\n";
      return 2;
    }
    file << render(rewritten);
    if (!file.flush()) {
      err << "error: cannot write output file " << outputPath << "\n";
      return 2;
    }
  }
  out << "output written to " << outputPath << "\n";

  if (config.runSolver) {
    int status = streamSolver(config.solverCommand, outputPath, out, err);
    if (status != 0) return status;
  }
  return 0;
}

} // namespace aagg::cli
