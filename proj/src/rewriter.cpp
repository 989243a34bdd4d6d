#include <aagg/rewriter.hpp>

#include <aagg/depgraph.hpp>

#include <algorithm>
#include <cassert>
#include <cctype>

namespace aagg {

OutputForm outputFormFromId(int id) {
  switch (id) {
    case 1: return OutputForm::LowerBound;
    case 2: return OutputForm::NegatedStrictUpper;
    case 3: return OutputForm::NegatedEqualities;
    default: throw std::invalid_argument("aggregate form must be 1, 2, or 3");
  }
}

int outputFormId(OutputForm form) { return static_cast<int>(form); }

std::string freshPredicateName(const std::string &predicate, const std::set<Signature> &existing,
                               int arity) {
  std::string base = predicate + "_project";
  if (!existing.count({base, arity})) return base;
  for (int k = 1;; ++k) {
    std::string name = base + "_" + std::to_string(k);
    if (!existing.count({name, arity})) return name;
  }
}

namespace {

// Rebuild the argument list of F with the given term at the counting
// position.
std::vector<Term> argsWithCountingSlot(const RewriteCandidate &c, Term slot) {
  std::vector<Term> args = c.context;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(c.countingPosition), std::move(slot));
  return args;
}

AggregateElement makeElement(const RewriteCandidate &c, const std::string &countingVarName,
                             bool anonymous) {
  AggregateElement el;
  if (anonymous) {
    // F(..,_,..) : F(..,_,..) — the element term mirrors the condition atom,
    // since a bare `_` term is not valid gringo syntax.
    std::vector<Term> args = argsWithCountingSlot(c, Term::variable("_"));
    el.terms.push_back(Term::function(c.predicate.name, args));
    el.condition.push_back(Literal::plain(true, Atom{c.predicate.name, std::move(args)}));
  } else {
    el.terms.push_back(Term::variable(countingVarName));
    el.condition.push_back(
        Literal::plain(true, Atom{c.predicate.name, argsWithCountingSlot(c, Term::variable(countingVarName))}));
  }
  return el;
}

} // namespace

std::vector<Literal> buildAggregateLiteral(const RewriteCandidate &candidate, OutputForm form,
                                           const std::string &countingVarName, bool anonymous) {
  AggregateElement element = makeElement(candidate, countingVarName, anonymous);
  std::vector<Literal> out;
  switch (form) {
    case OutputForm::LowerBound: {
      CountAggregate agg;
      agg.lower = AggregateGuard{Term::integer(candidate.bound), ComparisonOp::LessEqual};
      agg.elements.push_back(std::move(element));
      out.push_back(Literal::aggregate(true, std::move(agg)));
      break;
    }
    case OutputForm::NegatedStrictUpper: {
      CountAggregate agg;
      agg.elements.push_back(std::move(element));
      agg.upper = AggregateGuard{Term::integer(candidate.bound), ComparisonOp::Less};
      out.push_back(Literal::aggregate(false, std::move(agg)));
      break;
    }
    case OutputForm::NegatedEqualities: {
      for (int i = 0; i < candidate.bound; ++i) {
        CountAggregate agg;
        agg.elements.push_back(element);
        agg.upper = AggregateGuard{Term::integer(i), ComparisonOp::Equal};
        out.push_back(Literal::aggregate(false, std::move(agg)));
      }
      break;
    }
  }
  return out;
}

RewriteResult rewrite(const Program &program, const RewriteCandidate &candidate, OutputForm form,
                      bool anonymous, FreshNameIssuer &names) {
  if (form != OutputForm::LowerBound) {
    SplitVerdict verdict = checkSplittable(program, candidate);
    if (!verdict.splittable) throw SplittabilityViolation(verdict.reason);
  }

  const Rule &rule = program.statements.at(candidate.ruleIndex);
  assert(!rule.isRaw());

  const std::string &countingVar = candidate.countingVars.front();
  std::vector<Literal> aggregateLits = buildAggregateLiteral(candidate, form, countingVar, anonymous);

  RewriteResult result;
  result.formUsed = form;
  result.usedAnonymousVariable = anonymous;

  std::optional<Literal> projectionLiteral;
  std::optional<Rule> projectionRule;
  if (!candidate.context.empty()) {
    int arity = static_cast<int>(candidate.context.size());
    std::string fresh = names.issue(candidate.predicate.name, arity);
    result.freshPredicates.push_back({fresh, arity});
    projectionLiteral = Literal::plain(true, Atom{fresh, candidate.context});
    // F'(Y) :- F(X, Y) with the first counting variable's name as X; it no
    // longer occurs anywhere else in the rewritten rule.
    Rule defining;
    defining.head = Head::atom(Atom{fresh, candidate.context});
    defining.body.push_back(
        Literal::plain(true, Atom{candidate.predicate.name,
                                  argsWithCountingSlot(candidate, Term::variable(countingVar))}));
    projectionRule = std::move(defining);
  }

  const std::vector<std::size_t> consumed = candidate.countingLiterals();
  const std::size_t insertAt = *std::min_element(consumed.begin(), consumed.end());
  const std::set<std::size_t> consumedSet(consumed.begin(), consumed.end());

  Rule rewritten;
  rewritten.head = rule.head;
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    if (i == insertAt) {
      for (Literal &lit : aggregateLits) rewritten.body.push_back(lit);
      if (projectionLiteral) rewritten.body.push_back(*projectionLiteral);
    }
    if (!consumedSet.count(i)) rewritten.body.push_back(rule.body[i]);
  }

  result.replacementRules.push_back(std::move(rewritten));
  if (projectionRule) result.replacementRules.push_back(std::move(*projectionRule));
  return result;
}

FreshNameIssuer makeIssuer(const Program &program) {
  std::set<std::string> blocked;
  for (const Rule &rule : program.statements) {
    if (!rule.isRaw()) continue;
    const std::string &text = *rule.raw;
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (std::islower(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
          ++j;
        blocked.insert(text.substr(i, j - i));
        i = j;
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
          ++j;
        i = j;
      } else {
        ++i;
      }
    }
  }
  return FreshNameIssuer(predicateSignatures(program), std::move(blocked));
}

RewriteResult rewrite(const Program &program, const RewriteCandidate &candidate, OutputForm form,
                      bool anonymous) {
  FreshNameIssuer names = makeIssuer(program);
  return rewrite(program, candidate, form, anonymous, names);
}

Program applyRewrite(const Program &program, std::size_t ruleIndex, const RewriteResult &result) {
  return applyRewrites(program, {{ruleIndex, result}});
}

Program applyRewrites(const Program &program,
                      const std::vector<std::pair<std::size_t, RewriteResult>> &rewrites) {
  Program out;
  for (std::size_t i = 0; i < program.statements.size(); ++i) {
    const RewriteResult *replacement = nullptr;
    for (const auto &[index, result] : rewrites) {
      if (index == i) replacement = &result;
    }
    if (replacement) {
      for (const Rule &r : replacement->replacementRules) out.statements.push_back(r);
    } else {
      out.statements.push_back(program.statements[i]);
    }
  }
  return out;
}

} // namespace aagg
