#ifndef AAGG_DEPGRAPH_HPP
#define AAGG_DEPGRAPH_HPP

#include <aagg/ast.hpp>
#include <aagg/detector.hpp>

#include <map>
#include <set>
#include <string>

namespace aagg {

/// Predicate-level dependency relation: one edge head -> bodyPredicate per
/// structured rule, covering plain body literals and the literals inside
/// aggregate element conditions; negation signs are ignored.
struct DependencyGraph {
  std::set<Signature> nodes;
  std::map<Signature, std::set<Signature>> edges;
  /// Set when the program contains raw statements, whose dependencies are
  /// unknown.
  bool conservativeFailure = false;
};

DependencyGraph buildDependencyGraph(const Program &program);

/// DOT rendering of the graph, for the debug flag.
std::string toDot(const DependencyGraph &graph);

struct SplitVerdict {
  bool splittable = false;
  /// Bottom closure B: every predicate reachable from the counted predicate,
  /// itself included. The bottom program consists of all rules headed by a
  /// predicate in B.
  std::set<Signature> bottomPredicates;
  std::string reason; // set when not splittable
};

/// Decide whether the program splits into (bottom, top) with the candidate
/// rule in the top part and the counted predicate F defined entirely in the
/// bottom part; this is the precondition for the negated output forms.
/// The verdict is conservative: raw statements force "not splittable".
SplitVerdict checkSplittable(const Program &program, const RewriteCandidate &candidate);

} // namespace aagg

#endif
