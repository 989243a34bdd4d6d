#ifndef AAGG_DETECTOR_HPP
#define AAGG_DETECTOR_HPP

#include <aagg/ast.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace aagg {

/// A comparison literal normalized to a relation between two named variables.
struct ComparisonFact {
  enum class Relation { Distinct, LessThan };

  std::string varA;
  std::string varB;
  Relation relation = Relation::Distinct;
  std::size_t sourceLiteral = 0; // body index of the originating literal
};

/// Normalize a comparison literal. Recognized shapes, with equal integer
/// offsets on both sides (offset 0, `V + k`, or `V - k`):
///   X != Y  -> Distinct(X, Y)
///   X <  Y  -> LessThan(X, Y)
///   X >  Y  -> LessThan(Y, X)
/// Anything else (non-variable sides, unequal offsets, <=, >=, =, anonymous
/// variables) yields no fact.
std::optional<ComparisonFact> normalizeComparison(const Literal &lit, std::size_t bodyIndex = 0);

/// A detected counting pattern: `b` positive occurrences of predicate F over
/// pairwise-distinct variables at one argument position, licensed by a
/// complete disequality clique or a monotone `<`/`>` chain.
struct RewriteCandidate {
  std::size_t ruleIndex = 0;
  Signature predicate;                   // F
  int bound = 0;                         // b
  std::vector<std::string> countingVars; // X_1..X_b, in body/chain order
  std::size_t countingPosition = 0;      // argument index of X_i within F
  std::vector<Term> context;             // Y: the remaining arguments of F
  std::vector<std::size_t> countingFLiterals;   // body indices, aligned with countingVars
  std::vector<std::size_t> consumedComparisons; // body indices, sorted
  std::vector<std::size_t> residualBody;        // G: remaining body indices, sorted
  std::optional<Head> head;

  /// All consumed body indices (F literals plus comparisons), sorted.
  std::vector<std::size_t> countingLiterals() const;
};

/// Analyze one rule. Returns at most one candidate; when several qualify the
/// one with the most counting variables wins, ties broken by the earliest
/// consumed comparison literal.
std::optional<RewriteCandidate> findCandidate(const Rule &rule, std::size_t ruleIndex);

/// findCandidate over every structured rule, in statement order.
std::vector<RewriteCandidate> findAllCandidates(const Program &program);

} // namespace aagg

#endif
