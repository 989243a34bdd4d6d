#include <aagg/depgraph.hpp>

#include <deque>
#include <sstream>

namespace aagg {

DependencyGraph buildDependencyGraph(const Program &program) {
  DependencyGraph graph;
  for (const Rule &rule : program.statements) {
    if (rule.isRaw()) {
      graph.conservativeFailure = true;
      continue;
    }
    std::set<Signature> bodyPreds;
    for (const Literal &lit : rule.body) {
      forEachAtom(lit, [&](const Atom &a, bool) {
        bodyPreds.insert(a.signature());
        graph.nodes.insert(a.signature());
      });
    }
    if (rule.head) {
      for (const Atom &headAtom : rule.head->atoms) {
        Signature h = headAtom.signature();
        graph.nodes.insert(h);
        for (const Signature &b : bodyPreds) graph.edges[h].insert(b);
      }
    }
  }
  return graph;
}

std::string toDot(const DependencyGraph &graph) {
  std::ostringstream os;
  os << "digraph dependencies {\n";
  for (const Signature &n : graph.nodes)
    os << "  \"" << n.name << "/" << n.arity << "\";\n";
  for (const auto &[from, tos] : graph.edges)
    for (const Signature &to : tos)
      os << "  \"" << from.name << "/" << from.arity << "\" -> \"" << to.name << "/" << to.arity << "\";\n";
  os << "}\n";
  return os.str();
}

namespace {

std::set<Signature> reachableFrom(const DependencyGraph &graph, const Signature &start) {
  std::set<Signature> seen{start};
  std::deque<Signature> queue{start};
  while (!queue.empty()) {
    Signature cur = queue.front();
    queue.pop_front();
    auto it = graph.edges.find(cur);
    if (it == graph.edges.end()) continue;
    for (const Signature &next : it->second) {
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen;
}

std::set<Signature> mentionedPredicates(const Rule &rule) {
  std::set<Signature> out;
  if (rule.head) {
    for (const Atom &a : rule.head->atoms) out.insert(a.signature());
  }
  for (const Literal &lit : rule.body)
    forEachAtom(lit, [&](const Atom &a, bool) { out.insert(a.signature()); });
  return out;
}

} // namespace

SplitVerdict checkSplittable(const Program &program, const RewriteCandidate &candidate) {
  SplitVerdict verdict;
  DependencyGraph graph = buildDependencyGraph(program);
  if (graph.conservativeFailure) {
    verdict.reason = "program contains statements outside the supported subset; their dependencies are unknown";
    return verdict;
  }

  const std::set<Signature> bottom = reachableFrom(graph, candidate.predicate);
  verdict.bottomPredicates = bottom;

  // (i) the candidate rule itself must land in the top part.
  if (candidate.head) {
    for (const Atom &a : candidate.head->atoms) {
      if (bottom.count(a.signature())) {
        verdict.reason = "head predicate " + a.signature().name + "/" +
                         std::to_string(a.signature().arity) +
                         " depends on the counted predicate; the rule cannot be placed in the top part";
        return verdict;
      }
    }
  }

  // Partition: bottom part = rules headed by a predicate in B, top part = rest.
  std::set<Signature> topHeads;
  std::vector<const Rule *> bottomRules;
  for (const Rule &rule : program.statements) {
    bool inBottom = false;
    if (rule.head) {
      for (const Atom &a : rule.head->atoms)
        if (bottom.count(a.signature())) inBottom = true;
    }
    if (inBottom) {
      bottomRules.push_back(&rule);
    } else if (rule.head) {
      for (const Atom &a : rule.head->atoms) topHeads.insert(a.signature());
    }
  }

  // The counted predicate must actually be defined in the bottom part.
  bool fInBottom = false;
  for (const Rule *rule : bottomRules)
    if (mentionedPredicates(*rule).count(candidate.predicate)) fInBottom = true;
  if (!fInBottom) {
    verdict.reason = "counted predicate " + candidate.predicate.name + "/" +
                     std::to_string(candidate.predicate.arity) + " does not occur in the bottom part";
    return verdict;
  }

  // (ii) no predicate heading a top-part rule may occur anywhere in the
  // bottom part.
  for (const Rule *rule : bottomRules) {
    for (const Signature &sig : mentionedPredicates(*rule)) {
      if (topHeads.count(sig)) {
        verdict.reason = "predicate " + sig.name + "/" + std::to_string(sig.arity) +
                         " heads a top-part rule but occurs in the bottom part";
        return verdict;
      }
    }
  }

  verdict.splittable = true;
  return verdict;
}

} // namespace aagg
