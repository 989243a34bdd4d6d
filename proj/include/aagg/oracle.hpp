#ifndef AAGG_ORACLE_HPP
#define AAGG_ORACLE_HPP

#include <aagg/ast.hpp>

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace aagg {

/// Default bound on the Herbrand base for grounding; callers may raise it.
inline constexpr std::size_t kDefaultOracleCap = 24;

class GroundingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SizeExceeded : public GroundingError {
public:
  SizeExceeded(std::size_t baseSize, std::size_t cap)
      : GroundingError("Herbrand base has " + std::to_string(baseSize) +
                       " atoms, exceeding the cap of " + std::to_string(cap)),
        baseSize(baseSize), cap(cap) {}

  std::size_t baseSize;
  std::size_t cap;
};

class UnsafeRule : public GroundingError {
public:
  UnsafeRule(std::size_t ruleIndex, const std::string &variable)
      : GroundingError("unsafe variable " + variable + " in rule " + std::to_string(ruleIndex)),
        ruleIndex(ruleIndex) {}

  std::size_t ruleIndex;
};

class UnsupportedTerm : public GroundingError {
public:
  using GroundingError::GroundingError;
};

/// A set of ground atoms.
using Interpretation = std::set<Atom>;

/// Variable-free program: comparisons are evaluated away, aggregate elements
/// are instantiated, and every atom of every rule occurs in the base.
struct GroundProgram {
  std::vector<Rule> rules;
  std::vector<Atom> herbrandBase; // sorted
};

/// Instantiate the program over the constants it mentions. Rules must be
/// structured and safe; atom arguments may hold only constants, variables and
/// integer arithmetic (function terms are fine inside aggregate tuples).
/// Throws SizeExceeded when the base outgrows `sizeCap`.
GroundProgram ground(const Program &program, std::size_t sizeCap = kDefaultOracleCap);

/// Every stable model of the ground program, by exhaustive search: a stable
/// model is a model that is subset-minimal among the models of its reduct
/// (the rules whose bodies it satisfies, bodies kept intact, aggregates
/// re-evaluated under each candidate subset). An applicable choice rule
/// permits but does not force its head atom.
std::set<Interpretation> answerSets(const GroundProgram &ground);

struct EquivalenceResult {
  bool equivalent = false;
  std::optional<Interpretation> witness; // projected answer set present on one side only
  std::string witnessSide;               // "first" or "second"

  explicit operator bool() const { return equivalent; }
};

/// Compare the answer sets of two programs after hiding the given predicates.
EquivalenceResult equivalentModulo(const Program &first, const Program &second,
                                   const std::set<Signature> &hidden,
                                   std::size_t sizeCap = kDefaultOracleCap);

/// Structural equality of two ground programs with aggregate element tuples
/// treated as opaque labels: each aggregate is reduced to the family of
/// condition sets its distinct tuples carry. Used to confirm that two
/// spellings of the same aggregate ground identically.
bool sameGroundingModuloTupleNames(const GroundProgram &a, const GroundProgram &b);

} // namespace aagg

#endif
