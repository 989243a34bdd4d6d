// Acceptance suite: end-to-end checks of the rewriting pipeline, the
// equivalence oracle, the splittability gate, the CLI surface and the
// benchmark statistics. Prints one line per criterion.

#include <aagg/bench.hpp>
#include <aagg/cli.hpp>
#include <aagg/depgraph.hpp>
#include <aagg/detector.hpp>
#include <aagg/oracle.hpp>
#include <aagg/parser.hpp>
#include <aagg/rewriter.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <unistd.h>

using namespace aagg;

namespace {

struct Checker {
  std::vector<std::string> failures;

  void check(bool condition, const std::string &what) {
    if (!condition) failures.push_back(what);
  }
};

std::string readFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string corpus(const std::string &name) { return std::string(CORPUS_DIR) + "/" + name; }

Program parseChecked(const std::string &text, Checker &c, const std::string &what) {
  ParseResult r = parse(text);
  c.check(!r.hasErrors(), what + ": parse errors");
  return r.program;
}

// ---------------------------------------------------------------------------
// Predicate renaming, for comparisons modulo fresh-name choice.

Atom renameAtom(const Atom &a, const std::map<std::string, std::string> &names) {
  Atom out = a;
  auto it = names.find(out.predicate);
  if (it != names.end()) out.predicate = it->second;
  return out;
}

Literal renameLiteral(const Literal &lit, const std::map<std::string, std::string> &names) {
  switch (lit.kind()) {
    case Literal::Kind::Plain:
      return Literal::plain(lit.positive(), renameAtom(lit.atom(), names));
    case Literal::Kind::Comparison:
      return lit;
    case Literal::Kind::Aggregate: {
      CountAggregate agg = lit.aggregate();
      for (AggregateElement &el : agg.elements) {
        for (Literal &c : el.condition) c = renameLiteral(c, names);
      }
      return Literal::aggregate(lit.positive(), std::move(agg));
    }
  }
  return lit;
}

Program renamePredicates(const Program &p, const std::map<std::string, std::string> &names) {
  Program out;
  for (const Rule &rule : p.statements) {
    if (rule.isRaw()) {
      out.statements.push_back(rule);
      continue;
    }
    Rule r;
    if (rule.head) {
      Head h;
      h.kind = rule.head->kind;
      for (const Atom &a : rule.head->atoms) h.atoms.push_back(renameAtom(a, names));
      r.head = std::move(h);
    }
    for (const Literal &lit : rule.body) r.body.push_back(renameLiteral(lit, names));
    out.statements.push_back(std::move(r));
  }
  return out;
}

// Form-1 rewrite of every candidate in one pass.
struct BatchRewrite {
  Program rewritten;
  std::set<Signature> fresh;
  std::size_t candidateCount = 0;
};

BatchRewrite rewriteAll(const Program &p, OutputForm form, bool anonymous) {
  BatchRewrite out;
  FreshNameIssuer issuer = makeIssuer(p);
  std::vector<std::pair<std::size_t, RewriteResult>> batch;
  for (const RewriteCandidate &cand : findAllCandidates(p)) {
    ++out.candidateCount;
    RewriteResult result = rewrite(p, cand, form, anonymous, issuer);
    for (const Signature &s : result.freshPredicates) out.fresh.insert(s);
    batch.emplace_back(cand.ruleIndex, std::move(result));
  }
  out.rewritten = applyRewrites(p, batch);
  return out;
}

// Corpus programs with counting patterns whose Herbrand base stays inside the
// default oracle cap; the Hamiltonian entry is paired with its instance file.
const std::vector<std::vector<std::string>> kEquivalenceCorpus = {
    {"count_b2_distinct_nocontext.lp"},
    {"count_b3_distinct_nocontext.lp"},
    {"count_b2_distinct_context1.lp"},
    {"count_b2_distinct_context2.lp"},
    {"count_b3_chain_less.lp"},
    {"count_b2_chain_greater_head.lp"},
    {"count_b2_offset.lp"},
    {"count_b3_chain_greater_context.lp"},
    {"count_b2_constant_context.lp"},
    {"count_b3_redundant_chain.lp"},
    {"count_b2_context_rest.lp"},
    {"count_two_rewrites.lp"},
    {"count_tie_break_size.lp"},
    {"count_tie_break_order.lp"},
    {"count_negation_context.lp"},
    {"gate_head_in_closure.lp"},
    {"hamiltonian.lp", "instance_two_cycle.lp"},
};

Program loadCombined(const std::vector<std::string> &files, Checker &c) {
  std::string text;
  for (const std::string &f : files) text += readFile(corpus(f));
  return parseChecked(text, c, files.front());
}

std::string corpusLabel(const std::vector<std::string> &files) {
  std::string label = files.front();
  for (std::size_t i = 1; i < files.size(); ++i) label += "+" + files[i];
  return label;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("aagg_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

struct CliOutcome {
  int exitCode = 0;
  std::string out;
  Program program; // parsed output file
};

CliOutcome runCli(const std::vector<std::string> &args, const std::string &outputPath,
                  const std::string &answers, Checker &c) {
  std::ostringstream parseOut, parseErr;
  cli::CommandLine cmd = cli::parseCommandLine(args, parseOut, parseErr);
  CliOutcome outcome;
  if (!cmd.config) {
    c.check(false, "command line rejected: " + parseErr.str());
    return outcome;
  }
  std::istringstream in(answers);
  std::ostringstream out, err;
  outcome.exitCode = cli::run(*cmd.config, in, out, err);
  outcome.out = out.str();
  c.check(outcome.exitCode == 0, "cli exit code " + std::to_string(outcome.exitCode) + ": " + err.str());
  if (outcome.exitCode == 0) {
    ParseResult written = parse(readFile(outputPath));
    c.check(!written.hasErrors(), "output file has parse errors");
    outcome.program = std::move(written.program);
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// The criteria.

void criterion1(Checker &c) {
  TempDir dir;
  std::string outPath = (dir.path / "ham.aagg.lp").string();
  CliOutcome outcome = runCli({"--no-prompt", "--aggregate-form", "1", "-o", outPath,
                               corpus("hamiltonian.lp")},
                              outPath, "", c);
  if (outcome.exitCode != 0) return;

  c.check(outcome.program.statements.size() == 10,
          "expected 10 statements, got " + std::to_string(outcome.program.statements.size()));

  std::string rendered = render(outcome.program);
  c.check(rendered.find("2 <= #count{ Y : hc(X,Y) }") != std::string::npos,
          "first aggregate body missing");
  c.check(rendered.find("2 <= #count{ X : hc(X,Y) }") != std::string::npos,
          "second aggregate body missing");

  Program expected = parseChecked(readFile(corpus("hamiltonian_rewritten.lp")), c, "expected rewrite");
  Program oursCanonical =
      renamePredicates(outcome.program, {{"hc_project", "fresh0"}, {"hc_project_1", "fresh1"}});
  Program expectedCanonical =
      renamePredicates(expected, {{"hc_project_Z", "fresh0"}, {"hc_project_Z1", "fresh1"}});
  c.check(oursCanonical == expectedCanonical,
          "output differs from the reference rewrite beyond fresh-name choice");
}

void criterion2(Checker &c) {
  int programs = 0;
  for (const auto &files : kEquivalenceCorpus) {
    Program original = loadCombined(files, c);
    BatchRewrite batch = rewriteAll(original, OutputForm::LowerBound, false);
    if (batch.candidateCount == 0) {
      c.check(false, corpusLabel(files) + ": no counting pattern found");
      continue;
    }
    ++programs;
    try {
      GroundProgram g = ground(original); // default cap: 24 atoms
      c.check(g.herbrandBase.size() <= 24, corpusLabel(files) + ": base exceeds 24");
      EquivalenceResult eq = equivalentModulo(original, batch.rewritten, batch.fresh);
      c.check(eq.equivalent, corpusLabel(files) + ": form-1 rewrite is not answer-set equivalent");
    } catch (const GroundingError &e) {
      c.check(false, corpusLabel(files) + ": " + e.what());
    }
  }
  c.check(programs >= 10, "fewer than 10 corpus programs with counting patterns");
}

void criterion3(Checker &c) {
  // (a) wherever the gate passes, the negated forms preserve answer sets
  int gatePasses = 0;
  for (const auto &files : kEquivalenceCorpus) {
    Program original = loadCombined(files, c);
    std::vector<RewriteCandidate> candidates = findAllCandidates(original);
    bool allPass = !candidates.empty();
    for (const RewriteCandidate &cand : candidates)
      allPass = allPass && checkSplittable(original, cand).splittable;
    if (!allPass) continue;
    ++gatePasses;
    for (OutputForm form : {OutputForm::NegatedStrictUpper, OutputForm::NegatedEqualities}) {
      try {
        BatchRewrite batch = rewriteAll(original, form, false);
        EquivalenceResult eq = equivalentModulo(original, batch.rewritten, batch.fresh);
        c.check(eq.equivalent, corpusLabel(files) + ": form " + std::to_string(outputFormId(form)) +
                                   " not answer-set equivalent");
      } catch (const GroundingError &e) {
        c.check(false, corpusLabel(files) + ": " + e.what());
      }
    }
  }
  c.check(gatePasses >= 5, "too few gate-passing corpus programs: " + std::to_string(gatePasses));

  // (b) the non-splittable program is refused for forms 2 and 3 and still
  // rewritten under form 1
  Program bad = parseChecked(readFile(corpus("gate_not_splittable.lp")), c, "gate_not_splittable");
  std::vector<RewriteCandidate> candidates = findAllCandidates(bad);
  c.check(candidates.size() == 1, "expected one candidate in the non-splittable program");
  if (candidates.size() == 1) {
    for (OutputForm form : {OutputForm::NegatedStrictUpper, OutputForm::NegatedEqualities}) {
      bool refused = false;
      try {
        rewrite(bad, candidates.front(), form, false);
      } catch (const SplittabilityViolation &) {
        refused = true;
      }
      c.check(refused, "form " + std::to_string(outputFormId(form)) + " was not refused");
    }
    BatchRewrite form1 = rewriteAll(bad, OutputForm::LowerBound, false);
    c.check(form1.candidateCount == 1, "form 1 did not rewrite the rule");
    EquivalenceResult eq = equivalentModulo(bad, form1.rewritten, form1.fresh);
    c.check(eq.equivalent, "form-1 rewrite of the non-splittable program changed answer sets");
  }
}

void criterion4(Checker &c) {
  struct Case {
    std::string file;
    int bound;
  };
  for (const Case &test : {Case{"count_b2_distinct_nocontext.lp", 2},
                           Case{"count_b3_distinct_nocontext.lp", 3},
                           Case{"count_b3_chain_less.lp", 3}}) {
    Program p = parseChecked(readFile(corpus(test.file)), c, test.file);
    std::vector<RewriteCandidate> candidates = findAllCandidates(p);
    if (candidates.size() != 1) {
      c.check(false, test.file + ": expected one candidate");
      continue;
    }
    const RewriteCandidate &cand = candidates.front();
    c.check(cand.bound == test.bound, test.file + ": unexpected bound");
    std::vector<Literal> lits =
        buildAggregateLiteral(cand, OutputForm::NegatedEqualities, cand.countingVars.front());
    c.check(static_cast<int>(lits.size()) == test.bound,
            test.file + ": form 3 must emit exactly b literals");
    for (int i = 0; i < static_cast<int>(lits.size()); ++i) {
      const Literal &lit = lits[i];
      bool shape = lit.kind() == Literal::Kind::Aggregate && !lit.positive() &&
                   !lit.aggregate().lower.has_value() && lit.aggregate().upper.has_value() &&
                   lit.aggregate().upper->op == ComparisonOp::Equal &&
                   lit.aggregate().upper->bound == Term::integer(i);
      c.check(shape, test.file + ": literal " + std::to_string(i) + " has the wrong shape: " +
                         render(lit));
    }
  }
}

void criterion5(Checker &c) {
  const std::vector<std::string> fixtures = {
      "detect_none_leaked_variable.lp",  "detect_none_context_mismatch.lp",
      "detect_none_negative_occurrences.lp", "detect_none_incomplete_clique.lp",
      "detect_none_single_literal.lp",
  };
  for (const std::string &file : fixtures) {
    Program p = parseChecked(readFile(corpus(file)), c, file);
    c.check(findAllCandidates(p).empty(), file + ": unexpectedly produced a candidate");
  }
}

void criterion6(Checker &c) {
  int files = 0;
  bool sawRaw = false;
  for (const auto &entry : std::filesystem::directory_iterator(CORPUS_DIR)) {
    if (entry.path().extension() != ".lp") continue;
    ++files;
    std::string name = entry.path().filename().string();
    ParseResult first = parse(readFile(entry.path().string()));
    c.check(!first.hasErrors(), name + ": parse errors");
    std::string once = render(first.program);
    ParseResult second = parse(once);
    c.check(second.program == first.program, name + ": reparse differs");
    c.check(render(second.program) == once, name + ": rendering is not idempotent");
    for (std::size_t i = 0; i < first.program.statements.size(); ++i) {
      if (!first.program.statements[i].isRaw()) continue;
      sawRaw = true;
      c.check(i < second.program.statements.size() &&
                  second.program.statements[i].raw == first.program.statements[i].raw,
              name + ": raw statement " + std::to_string(i) + " not byte-identical");
    }
  }
  c.check(files >= 25, "corpus has fewer than 25 files");
  c.check(sawRaw, "corpus has no raw passthrough statements");
}

void criterion7(Checker &c) {
  Program input = parseChecked(readFile(corpus("hamiltonian.lp")), c, "fig");
  TempDir dir;

  std::string out1 = (dir.path / "norewrite.lp").string();
  CliOutcome noRewrite =
      runCli({"--no-rewrite", "-o", out1, corpus("hamiltonian.lp")}, out1, "", c);
  c.check(noRewrite.out.find("Apply this rewriting?") == std::string::npos,
          "--no-rewrite still prompted");
  c.check(noRewrite.program == input, "--no-rewrite changed the program");

  std::string out2 = (dir.path / "declined.lp").string();
  CliOutcome declined = runCli({"-o", out2, corpus("hamiltonian.lp")}, out2, "n\nn\n", c);
  c.check(declined.out.find("Apply this rewriting?") != std::string::npos, "default mode did not prompt");
  c.check(declined.program == input, "declining all prompts changed the program");

  std::ostringstream sink;
  cli::CommandLine defaults = cli::parseCommandLine({"enc.lp"}, sink, sink);
  c.check(defaults.config && defaults.config->aggregateForm == 1, "default form is not 1");

  auto never = [](const std::string &) { return false; };
  c.check(cli::deriveOutputPath("ham.lp", {}, never) == "ham.aagg.lp", "derived name scheme");
  c.check(cli::deriveOutputPath("enc", {}, never) == "enc.aagg", "extension-less derived name");
  auto taken = [](const std::string &p) { return p == "ham.aagg.lp"; };
  c.check(cli::deriveOutputPath("ham.lp", {}, taken) == "ham.aagg.1.lp", "collision suffix");
}

void criterion8(Checker &c) {
  using namespace aagg::bench;
  auto fin = [](std::string e, std::string i, double s, double l) {
    return RunRecord{std::move(e), std::move(i), true, s, l};
  };
  auto out = [](std::string e, std::string i, double l) {
    return RunRecord{std::move(e), std::move(i), false, 0.0, l};
  };
  auto byName = [](const WinStats &stats, const std::string &name) -> const EncodingStats & {
    for (const EncodingStats &e : stats.perEncoding)
      if (e.encoding == name) return e;
    throw std::runtime_error("missing encoding " + name);
  };

  WinStats margin = computeStats({fin("e1", "i", 10, 200), fin("e2", "i", 30, 200), out("e3", "i", 200)});
  c.check(byName(margin, "e1").wins == 1 && byName(margin, "e1").exclusiveWins == 0 &&
              byName(margin, "e1").winsBy20 == 1 && byName(margin, "e1").winsBy50 == 1,
          "margin example misclassified");

  WinStats exclusive =
      computeStats({fin("e1", "i", 150, 200), out("e2", "i", 200), out("e3", "i", 200)});
  c.check(byName(exclusive, "e1").wins == 1 && byName(exclusive, "e1").exclusiveWins == 1 &&
              byName(exclusive, "e1").winsBy20 == 1 && byName(exclusive, "e1").winsBy50 == 0,
          "exclusive example misclassified");

  WinStats excluded = computeStats({out("e1", "i", 200), out("e2", "i", 200), out("e3", "i", 200)});
  c.check(excluded.consideredInstances == 0, "all-timeout instance was considered");

  std::mt19937 rng(20240819);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  for (int iteration = 0; iteration < 100; ++iteration) {
    std::vector<RunRecord> records;
    for (int e = 0; e < 3; ++e)
      for (int i = 0; i < 4; ++i) {
        std::string enc = "e" + std::to_string(e), inst = "i" + std::to_string(i);
        if (pick(4) == 0)
          records.push_back(out(enc, inst, 64));
        else
          records.push_back(fin(enc, inst, 1 + pick(60), 64));
      }
    WinStats base = computeStats(records);
    for (double scale : {0.5, 7.0}) {
      std::vector<RunRecord> scaled = records;
      for (RunRecord &r : scaled) {
        r.seconds *= scale;
        r.timeLimit *= scale;
      }
      WinStats other = computeStats(scaled);
      bool same = other.consideredInstances == base.consideredInstances;
      for (std::size_t k = 0; k < base.perEncoding.size() && same; ++k) {
        same = other.perEncoding[k].wins == base.perEncoding[k].wins &&
               other.perEncoding[k].exclusiveWins == base.perEncoding[k].exclusiveWins &&
               other.perEncoding[k].winsBy20 == base.perEncoding[k].winsBy20 &&
               other.perEncoding[k].winsBy50 == base.perEncoding[k].winsBy50;
      }
      c.check(same, "scaling by " + std::to_string(scale) + " changed a classification (iteration " +
                        std::to_string(iteration) + ")");
    }
  }
}

void criterion9(Checker &c) {
  // Competition-scale timing results need the original instance sets and
  // 200-400 s timeouts; criteria 2, 3 and 8 stand in for them here. What is
  // checked directly: the anonymous-variable output grounds identically to
  // the named output.
  for (const auto &files : kEquivalenceCorpus) {
    Program original = loadCombined(files, c);
    BatchRewrite named = rewriteAll(original, OutputForm::LowerBound, false);
    BatchRewrite anonymous = rewriteAll(original, OutputForm::LowerBound, true);
    if (named.candidateCount == 0) continue;
    try {
      GroundProgram g1 = ground(named.rewritten);
      GroundProgram g2 = ground(anonymous.rewritten);
      c.check(sameGroundingModuloTupleNames(g1, g2),
              corpusLabel(files) + ": named and anonymous outputs ground differently");
      c.check(answerSets(g1) == answerSets(g2),
              corpusLabel(files) + ": named and anonymous outputs differ in answer sets");
    } catch (const GroundingError &e) {
      c.check(false, corpusLabel(files) + ": " + e.what());
    }
  }
}

struct Criterion {
  int id;
  std::string label;
  double limitSeconds;
  std::function<void(Checker &)> body;
};

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Hamiltonian rewrite matches the reference output via the CLI", 1.0, criterion1},
      {2, "form-1 rewrites preserve answer sets across the corpus", 60.0, criterion2},
      {3, "splittability gate: negated forms verified or refused", 60.0, criterion3},
      {4, "form 3 emits exactly b negated equality literals", 0.0, criterion4},
      {5, "violated side conditions produce no candidates", 0.0, criterion5},
      {6, "parser round-trip is idempotent over the corpus", 0.0, criterion6},
      {7, "CLI surface: no-rewrite, prompts, defaults, output naming", 0.0, criterion7},
      {8, "win statistics match their definitions and scale invariance", 0.0, criterion8},
      {9, "anonymous and named outputs ground identically", 0.0, criterion9},
  };

  bool allPassed = true;
  for (const Criterion &criterion : criteria) {
    Checker checker;
    auto start = std::chrono::steady_clock::now();
    try {
      criterion.body(checker);
    } catch (const std::exception &e) {
      checker.check(false, std::string("exception: ") + e.what());
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criterion.limitSeconds > 0 && elapsed > criterion.limitSeconds) {
      checker.check(false, "exceeded the " + std::to_string(criterion.limitSeconds) + " s budget");
    }
    std::ostringstream line;
    line << "criterion " << criterion.id << " (" << criterion.label << "): "
         << (checker.failures.empty() ? "PASS" : "FAIL");
    line.setf(std::ios::fixed);
    line.precision(2);
    line << " [" << elapsed << " s]";
    std::cout << line.str() << "\n";
    for (const std::string &failure : checker.failures) std::cout << "    - " << failure << "\n";
    allPassed = allPassed && checker.failures.empty();
  }
  std::cout << (allPassed ? "acceptance: all criteria passed" : "acceptance: FAILURES present")
            << "\n";
  return allPassed ? 0 : 1;
}
