#ifndef AAGG_REWRITER_HPP
#define AAGG_REWRITER_HPP

#include <aagg/ast.hpp>
#include <aagg/detector.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace aagg {

/// The three output shapes for a detected counting pattern.
enum class OutputForm {
  LowerBound = 1,        // b <= #count{ X : F(..X..,Y) }, with projection when |Y| > 0
  NegatedStrictUpper = 2, // not #count{ ... } < b
  NegatedEqualities = 3,  // not #count{ ... } = 0, ..., not #count{ ... } = b-1
};

OutputForm outputFormFromId(int id);
int outputFormId(OutputForm form);

/// Raised when a negated form is requested but the splittability check fails.
class SplittabilityViolation : public std::runtime_error {
public:
  explicit SplittabilityViolation(const std::string &reason)
      : std::runtime_error("rewrite refused: " + reason) {}
};

struct RewriteResult {
  std::vector<Rule> replacementRules; // 1 rule, or 2 when a projection is emitted
  std::vector<Signature> freshPredicates;
  OutputForm formUsed = OutputForm::LowerBound;
  bool usedAnonymousVariable = false;
};

/// Smallest fresh predicate name of the shape `<F>_project` / `<F>_project_<k>`
/// that collides neither with `existing` at the given arity nor with itself.
std::string freshPredicateName(const std::string &predicate, const std::set<Signature> &existing,
                               int arity);

/// Tracks names issued during one run so successive rewrites stay collision
/// free. `blockedNames` are avoided at every arity (used for identifiers seen
/// in raw passthrough statements, whose arities are unknown).
class FreshNameIssuer {
public:
  explicit FreshNameIssuer(std::set<Signature> existing, std::set<std::string> blockedNames = {})
      : taken_(std::move(existing)), blocked_(std::move(blockedNames)) {}

  std::string issue(const std::string &predicate, int arity) {
    std::set<Signature> avoid = taken_;
    for (const std::string &name : blocked_) avoid.insert({name, arity});
    std::string name = freshPredicateName(predicate, avoid, arity);
    taken_.insert({name, arity});
    return name;
  }

private:
  std::set<Signature> taken_;
  std::set<std::string> blocked_;
};

/// Issuer seeded with the program's predicate signatures plus every
/// identifier occurring in raw passthrough statements.
FreshNameIssuer makeIssuer(const Program &program);

/// The aggregate literal(s) replacing the counting literals: one literal for
/// forms 1 and 2, exactly b literals covering counts 0..b-1 for form 3.
std::vector<Literal> buildAggregateLiteral(const RewriteCandidate &candidate, OutputForm form,
                                           const std::string &countingVarName,
                                           bool anonymous = false);

/// Rewrite one candidate. The counting literals are removed, the aggregate
/// literal(s) take the position of the earliest removed literal, and when the
/// context tuple Y is nonempty a projection predicate F'(Y) plus its defining
/// rule are added. Throws SplittabilityViolation for forms 2/3 when the gate
/// fails.
RewriteResult rewrite(const Program &program, const RewriteCandidate &candidate, OutputForm form,
                      bool anonymous, FreshNameIssuer &names);
RewriteResult rewrite(const Program &program, const RewriteCandidate &candidate, OutputForm form,
                      bool anonymous = false);

/// Replace statement `ruleIndex` of the program by the replacement rules.
/// Indices refer to the original program; apply a batch via applyRewrites.
Program applyRewrite(const Program &program, std::size_t ruleIndex, const RewriteResult &result);
Program applyRewrites(const Program &program,
                      const std::vector<std::pair<std::size_t, RewriteResult>> &rewrites);

} // namespace aagg

#endif
