#include <aagg/oracle.hpp>

#include <aagg/parser.hpp>

#include <algorithm>
#include <cstdint>
#include <map>

namespace aagg {

namespace {

constexpr std::size_t kInstanceLimit = 2'000'000;
constexpr int kEnumerationLimit = 64; // base atoms representable in one mask

// ---------------------------------------------------------------------------
// Ground term evaluation and ordering (integers before symbols, symbols
// before function terms).

int orderRank(const Term &t) {
  switch (t.kind()) {
    case Term::Kind::Integer: return 0;
    case Term::Kind::Symbol: return 1;
    default: return 2;
  }
}

int compareGround(const Term &a, const Term &b) {
  if (orderRank(a) != orderRank(b)) return orderRank(a) < orderRank(b) ? -1 : 1;
  switch (a.kind()) {
    case Term::Kind::Integer:
      return a.value() < b.value() ? -1 : a.value() > b.value() ? 1 : 0;
    case Term::Kind::Symbol:
      return a.name().compare(b.name());
    default: {
      if (int c = a.name().compare(b.name()); c != 0) return c;
      if (a.args().size() != b.args().size()) return a.args().size() < b.args().size() ? -1 : 1;
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (int c = compareGround(a.args()[i], b.args()[i]); c != 0) return c;
      }
      return 0;
    }
  }
}

bool holds(int cmp, ComparisonOp op) {
  switch (op) {
    case ComparisonOp::Less: return cmp < 0;
    case ComparisonOp::LessEqual: return cmp <= 0;
    case ComparisonOp::Equal: return cmp == 0;
    case ComparisonOp::NotEqual: return cmp != 0;
    case ComparisonOp::Greater: return cmp > 0;
    case ComparisonOp::GreaterEqual: return cmp >= 0;
  }
  return false;
}

using Substitution = std::map<std::string, Term>;

Term evalTerm(const Term &t, const Substitution &sub) {
  switch (t.kind()) {
    case Term::Kind::Symbol:
    case Term::Kind::Integer:
      return t;
    case Term::Kind::Variable: {
      auto it = sub.find(t.name());
      if (it == sub.end()) throw UnsupportedTerm("unbound variable " + t.name() + " during grounding");
      return it->second;
    }
    case Term::Kind::Function: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term &arg : t.args()) args.push_back(evalTerm(arg, sub));
      return Term::function(t.name(), std::move(args));
    }
    case Term::Kind::Arithmetic: {
      Term l = evalTerm(t.lhs(), sub);
      Term r = evalTerm(t.rhs(), sub);
      if (l.kind() != Term::Kind::Integer || r.kind() != Term::Kind::Integer)
        throw UnsupportedTerm("arithmetic over non-integer term '" + render(t) + "'");
      switch (t.arithOp()) {
        case ArithOp::Add: return Term::integer(l.value() + r.value());
        case ArithOp::Sub: return Term::integer(l.value() - r.value());
        case ArithOp::Mul: return Term::integer(l.value() * r.value());
      }
      throw UnsupportedTerm("unknown arithmetic operator");
    }
  }
  throw UnsupportedTerm("unknown term kind");
}

Atom evalAtom(const Atom &a, const Substitution &sub) {
  Atom out;
  out.predicate = a.predicate;
  out.args.reserve(a.args.size());
  for (const Term &arg : a.args) out.args.push_back(evalTerm(arg, sub));
  return out;
}

// ---------------------------------------------------------------------------
// Anonymous-variable renaming. Each `_` becomes a fresh variable, except that
// an aggregate element tuple term mirroring one of its own condition atoms
// shares that atom's variables (the `F(_,Y) : F(_,Y)` spelling counts the
// atoms themselves).

class AnonymousRenamer {
public:
  Term freshen(const Term &t) {
    switch (t.kind()) {
      case Term::Kind::Variable:
        if (t.isAnonymous()) return Term::variable("_Anon" + std::to_string(counter_++));
        return t;
      case Term::Kind::Function:
      case Term::Kind::Arithmetic: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const Term &arg : t.args()) args.push_back(freshen(arg));
        if (t.kind() == Term::Kind::Function) return Term::function(t.name(), std::move(args));
        return Term::arithmetic(t.arithOp(), std::move(args[0]), std::move(args[1]));
      }
      default:
        return t;
    }
  }

  Atom freshen(const Atom &a) {
    Atom out;
    out.predicate = a.predicate;
    out.args.reserve(a.args.size());
    for (const Term &arg : a.args) out.args.push_back(freshen(arg));
    return out;
  }

  Literal freshen(const Literal &lit) {
    switch (lit.kind()) {
      case Literal::Kind::Plain:
        return Literal::plain(lit.positive(), freshen(lit.atom()));
      case Literal::Kind::Comparison:
        return Literal::comparison(freshen(lit.lhs()), lit.comparisonOp(), freshen(lit.rhs()));
      case Literal::Kind::Aggregate: {
        CountAggregate agg;
        const CountAggregate &src = lit.aggregate();
        if (src.lower) agg.lower = AggregateGuard{freshen(src.lower->bound), src.lower->op};
        if (src.upper) agg.upper = AggregateGuard{freshen(src.upper->bound), src.upper->op};
        for (const AggregateElement &el : src.elements) agg.elements.push_back(freshenElement(el));
        return Literal::aggregate(lit.positive(), std::move(agg));
      }
    }
    throw UnsupportedTerm("unknown literal kind");
  }

  Rule freshen(const Rule &rule) {
    Rule out;
    if (rule.head) {
      Head h;
      h.kind = rule.head->kind;
      for (const Atom &a : rule.head->atoms) h.atoms.push_back(freshen(a));
      out.head = std::move(h);
    }
    for (const Literal &lit : rule.body) out.body.push_back(freshen(lit));
    return out;
  }

private:
  AggregateElement freshenElement(const AggregateElement &el) {
    AggregateElement out;
    std::vector<std::pair<Term, Term>> conditionAtoms; // original atom-as-term -> freshened
    for (const Literal &c : el.condition) {
      Literal f = freshen(c);
      if (c.kind() == Literal::Kind::Plain && !c.atom().args.empty()) {
        conditionAtoms.emplace_back(Term::function(c.atom().predicate, c.atom().args),
                                    Term::function(f.atom().predicate, f.atom().args));
      }
      out.condition.push_back(std::move(f));
    }
    for (const Term &t : el.terms) {
      auto mirror = std::find_if(conditionAtoms.begin(), conditionAtoms.end(),
                                 [&](const auto &pair) { return pair.first == t; });
      if (mirror != conditionAtoms.end()) {
        out.terms.push_back(mirror->second);
      } else {
        out.terms.push_back(freshen(t));
      }
    }
    return out;
  }

  int counter_ = 0;
};

// ---------------------------------------------------------------------------
// Safety and shape checks.

void requireSupportedAtoms(const Rule &rule, std::size_t index) {
  auto checkAtomArgs = [&](const Atom &a, bool inHead) {
    for (const Term &arg : a.args) {
      bool bad = false;
      std::function<void(const Term &)> walk = [&](const Term &t) {
        if (t.kind() == Term::Kind::Function) bad = true;
        if (inHead && t.kind() == Term::Kind::Arithmetic) bad = true;
        for (const Term &child : t.args()) walk(child);
      };
      walk(arg);
      if (bad)
        throw UnsupportedTerm("rule " + std::to_string(index) +
                              (inHead ? ": arithmetic or function term in head atom"
                                      : ": function term of depth >= 1 in atom argument"));
    }
  };
  if (rule.head) {
    for (const Atom &a : rule.head->atoms) checkAtomArgs(a, true);
  }
  for (const Literal &lit : rule.body) {
    forEachAtom(lit, [&](const Atom &a, bool) { checkAtomArgs(a, false); });
  }
}

void addTermVars(const Term &t, std::set<std::string> &out) {
  forEachVariable(t, [&](const std::string &v) { out.insert(v); });
}

void requireSafe(const Rule &rule, std::size_t index) {
  std::set<std::string> binding; // variables of positive plain body literals
  for (const Literal &lit : rule.body) {
    if (lit.kind() == Literal::Kind::Plain && lit.positive()) {
      for (const Term &arg : lit.atom().args) addTermVars(arg, binding);
    }
  }
  auto require = [&](const std::set<std::string> &vars) {
    for (const std::string &v : vars) {
      if (!binding.count(v)) throw UnsafeRule(index, v);
    }
  };
  std::set<std::string> needed;
  if (rule.head) {
    for (const Atom &a : rule.head->atoms)
      for (const Term &t : a.args) addTermVars(t, needed);
  }
  for (const Literal &lit : rule.body) {
    switch (lit.kind()) {
      case Literal::Kind::Plain:
        if (!lit.positive())
          for (const Term &t : lit.atom().args) addTermVars(t, needed);
        break;
      case Literal::Kind::Comparison:
        addTermVars(lit.lhs(), needed);
        addTermVars(lit.rhs(), needed);
        break;
      case Literal::Kind::Aggregate: {
        const CountAggregate &agg = lit.aggregate();
        if (agg.lower) addTermVars(agg.lower->bound, needed);
        if (agg.upper) addTermVars(agg.upper->bound, needed);
        for (const AggregateElement &el : agg.elements) {
          std::set<std::string> elementBinding = binding;
          for (const Literal &c : el.condition) {
            if (c.kind() == Literal::Kind::Plain && c.positive())
              for (const Term &t : c.atom().args) addTermVars(t, elementBinding);
          }
          std::set<std::string> elementVars;
          for (const Term &t : el.terms) addTermVars(t, elementVars);
          for (const Literal &c : el.condition)
            forEachVariable(c, [&](const std::string &v) { elementVars.insert(v); });
          for (const std::string &v : elementVars) {
            if (!elementBinding.count(v)) throw UnsafeRule(index, v);
          }
        }
        break;
      }
    }
  }
  require(needed);
}

// ---------------------------------------------------------------------------

std::vector<Term> collectUniverse(const Program &program) {
  std::set<Term> constants;
  std::function<void(const Term &)> walkTerm = [&](const Term &t) {
    switch (t.kind()) {
      case Term::Kind::Symbol:
      case Term::Kind::Integer:
        constants.insert(t);
        break;
      case Term::Kind::Function:
      case Term::Kind::Arithmetic:
        for (const Term &child : t.args()) walkTerm(child);
        break;
      default:
        break;
    }
  };
  auto walkLiteral = [&](const Literal &lit) {
    switch (lit.kind()) {
      case Literal::Kind::Plain:
        for (const Term &t : lit.atom().args) walkTerm(t);
        break;
      case Literal::Kind::Comparison:
        walkTerm(lit.lhs());
        walkTerm(lit.rhs());
        break;
      case Literal::Kind::Aggregate: {
        // Guard bounds compare against the count and never generate atoms;
        // they do not join the instantiation universe.
        const CountAggregate &agg = lit.aggregate();
        for (const AggregateElement &el : agg.elements) {
          for (const Term &t : el.terms) walkTerm(t);
          for (const Literal &c : el.condition) {
            if (c.kind() == Literal::Kind::Plain) {
              for (const Term &t : c.atom().args) walkTerm(t);
            } else if (c.kind() == Literal::Kind::Comparison) {
              walkTerm(c.lhs());
              walkTerm(c.rhs());
            }
          }
        }
        break;
      }
    }
  };
  for (const Rule &rule : program.statements) {
    if (rule.head) {
      for (const Atom &a : rule.head->atoms)
        for (const Term &t : a.args) walkTerm(t);
    }
    for (const Literal &lit : rule.body) walkLiteral(lit);
  }
  std::vector<Term> universe(constants.begin(), constants.end());
  std::sort(universe.begin(), universe.end(),
            [](const Term &a, const Term &b) { return compareGround(a, b) < 0; });
  return universe;
}

// Iterate all assignments of `vars` to universe constants.
class SubstitutionSpace {
public:
  SubstitutionSpace(std::vector<std::string> vars, const std::vector<Term> &universe)
      : vars_(std::move(vars)), universe_(universe), indices_(vars_.size(), 0) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      total *= std::max<std::size_t>(universe_.size(), 1);
      if (total > kInstanceLimit)
        throw GroundingError("instantiation space too large for the grounding oracle");
    }
    exhausted_ = !vars_.empty() && universe_.empty();
  }

  bool next(Substitution &sub) {
    if (exhausted_) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i) sub[vars_[i]] = universe_[indices_[i]];
    // advance
    std::size_t pos = 0;
    for (; pos < indices_.size(); ++pos) {
      if (++indices_[pos] < universe_.size()) break;
      indices_[pos] = 0;
    }
    if (pos == indices_.size()) exhausted_ = true;
    if (vars_.empty()) exhausted_ = true;
    return true;
  }

private:
  std::vector<std::string> vars_;
  const std::vector<Term> &universe_;
  std::vector<std::size_t> indices_;
  bool exhausted_ = false;
};

bool evalComparison(const Literal &lit, const Substitution &sub) {
  Term l = evalTerm(lit.lhs(), sub);
  Term r = evalTerm(lit.rhs(), sub);
  return holds(compareGround(l, r), lit.comparisonOp());
}

} // namespace

GroundProgram ground(const Program &program, std::size_t sizeCap) {
  for (std::size_t i = 0; i < program.statements.size(); ++i) {
    if (program.statements[i].isRaw())
      throw GroundingError("cannot ground statement " + std::to_string(i) +
                           ": outside the supported subset");
  }

  const std::vector<Term> universe = collectUniverse(program);

  GroundProgram out;
  std::set<Atom> base;

  for (std::size_t index = 0; index < program.statements.size(); ++index) {
    AnonymousRenamer renamer;
    Rule rule = renamer.freshen(program.statements[index]);
    requireSupportedAtoms(rule, index);
    requireSafe(rule, index);

    // Global variables: everything outside aggregate elements.
    std::set<std::string> globals;
    if (rule.head) {
      for (const Atom &a : rule.head->atoms)
        for (const Term &t : a.args) addTermVars(t, globals);
    }
    for (const Literal &lit : rule.body) {
      switch (lit.kind()) {
        case Literal::Kind::Plain:
          for (const Term &t : lit.atom().args) addTermVars(t, globals);
          break;
        case Literal::Kind::Comparison:
          addTermVars(lit.lhs(), globals);
          addTermVars(lit.rhs(), globals);
          break;
        case Literal::Kind::Aggregate: {
          const CountAggregate &agg = lit.aggregate();
          if (agg.lower) addTermVars(agg.lower->bound, globals);
          if (agg.upper) addTermVars(agg.upper->bound, globals);
          break;
        }
      }
    }

    SubstitutionSpace space(std::vector<std::string>(globals.begin(), globals.end()), universe);
    Substitution sub;
    while (space.next(sub)) {
      bool dropped = false;
      Rule groundRule;
      if (rule.head) {
        Head h;
        h.kind = rule.head->kind;
        for (const Atom &a : rule.head->atoms) h.atoms.push_back(evalAtom(a, sub));
        groundRule.head = std::move(h);
      }
      for (const Literal &lit : rule.body) {
        if (dropped) break;
        switch (lit.kind()) {
          case Literal::Kind::Plain:
            groundRule.body.push_back(Literal::plain(lit.positive(), evalAtom(lit.atom(), sub)));
            break;
          case Literal::Kind::Comparison:
            if (!evalComparison(lit, sub)) dropped = true; // conjunct false: instance vacuous
            break;
          case Literal::Kind::Aggregate: {
            const CountAggregate &agg = lit.aggregate();
            CountAggregate groundAgg;
            if (agg.lower) groundAgg.lower = AggregateGuard{evalTerm(agg.lower->bound, sub), agg.lower->op};
            if (agg.upper) groundAgg.upper = AggregateGuard{evalTerm(agg.upper->bound, sub), agg.upper->op};
            std::set<AggregateElement> seen;
            for (const AggregateElement &el : agg.elements) {
              std::set<std::string> locals;
              for (const Term &t : el.terms) addTermVars(t, locals);
              for (const Literal &c : el.condition)
                forEachVariable(c, [&](const std::string &v) { locals.insert(v); });
              std::vector<std::string> freeLocals;
              for (const std::string &v : locals)
                if (!sub.count(v)) freeLocals.push_back(v);

              SubstitutionSpace localSpace(freeLocals, universe);
              Substitution localSub = sub;
              while (localSpace.next(localSub)) {
                AggregateElement groundEl;
                bool elementDropped = false;
                for (const Literal &c : el.condition) {
                  if (c.kind() == Literal::Kind::Comparison) {
                    if (!evalComparison(c, localSub)) {
                      elementDropped = true;
                      break;
                    }
                  } else {
                    groundEl.condition.push_back(Literal::plain(c.positive(), evalAtom(c.atom(), localSub)));
                  }
                }
                if (elementDropped) continue;
                for (const Term &t : el.terms) groundEl.terms.push_back(evalTerm(t, localSub));
                if (seen.insert(groundEl).second) groundAgg.elements.push_back(std::move(groundEl));
              }
            }
            groundRule.body.push_back(Literal::aggregate(lit.positive(), std::move(groundAgg)));
            break;
          }
        }
      }
      if (dropped) continue;
      if (groundRule.head) {
        for (const Atom &a : groundRule.head->atoms) base.insert(a);
      }
      for (const Literal &lit : groundRule.body)
        forEachAtom(lit, [&](const Atom &a, bool) { base.insert(a); });
      out.rules.push_back(std::move(groundRule));
    }
  }

  out.herbrandBase.assign(base.begin(), base.end());
  if (out.herbrandBase.size() > sizeCap) throw SizeExceeded(out.herbrandBase.size(), sizeCap);
  return out;
}

// ---------------------------------------------------------------------------
// Stable-model enumeration.

namespace {

using Mask = std::uint64_t;

struct CompiledElement {
  int tuple = 0; // index into a per-aggregate tuple table
  Mask positive = 0;
  Mask negative = 0;
};

struct CompiledAggregate {
  bool positive = true;
  std::optional<AggregateGuard> lower;
  std::optional<AggregateGuard> upper;
  std::vector<CompiledElement> elements; // sorted by tuple index
  int tupleCount = 0;
};

struct CompiledRule {
  enum class HeadKind { Atom, Choice, None };
  HeadKind headKind = HeadKind::None;
  std::vector<int> heads;
  Mask positive = 0;
  Mask negative = 0;
  std::vector<CompiledAggregate> aggregates;
};

// Dedup-aware grouping: elements sharing a ground tuple count once.
CompiledAggregate compileAggregate(const Literal &lit, const std::map<Atom, int> &atomIds) {
  const CountAggregate &agg = lit.aggregate();
  CompiledAggregate out;
  out.positive = lit.positive();
  out.lower = agg.lower;
  out.upper = agg.upper;
  std::map<std::vector<Term>, int> tupleIds;
  for (const AggregateElement &el : agg.elements) {
    CompiledElement cel;
    auto [it, inserted] = tupleIds.try_emplace(el.terms, static_cast<int>(tupleIds.size()));
    cel.tuple = it->second;
    for (const Literal &c : el.condition) {
      int id = atomIds.at(c.atom());
      if (c.positive())
        cel.positive |= Mask(1) << id;
      else
        cel.negative |= Mask(1) << id;
    }
    out.elements.push_back(cel);
  }
  std::sort(out.elements.begin(), out.elements.end(),
            [](const CompiledElement &a, const CompiledElement &b) { return a.tuple < b.tuple; });
  out.tupleCount = static_cast<int>(tupleIds.size());
  return out;
}

// An aggregate counts tuples once even when several of its elements carry the
// same tuple, so satisfaction needs per-tuple "any condition holds".
bool aggregateHoldsGrouped(const CompiledAggregate &agg, Mask interpretation) {
  int count = 0;
  for (int tuple = 0, i = 0; tuple < agg.tupleCount; ++tuple) {
    bool sat = false;
    while (i < static_cast<int>(agg.elements.size()) && agg.elements[i].tuple == tuple) {
      const CompiledElement &el = agg.elements[i];
      if (!sat && (el.positive & interpretation) == el.positive && (el.negative & interpretation) == 0)
        sat = true;
      ++i;
    }
    if (sat) ++count;
  }
  Term countTerm = Term::integer(count);
  bool ok = true;
  if (agg.lower) ok = ok && holds(compareGround(agg.lower->bound, countTerm), agg.lower->op);
  if (agg.upper) ok = ok && holds(compareGround(countTerm, agg.upper->bound), agg.upper->op);
  return agg.positive ? ok : !ok;
}

} // namespace

std::set<Interpretation> answerSets(const GroundProgram &ground) {
  const std::size_t n = ground.herbrandBase.size();
  if (n > kEnumerationLimit)
    throw GroundingError("stable-model enumeration supports at most 64 ground atoms");

  std::map<Atom, int> atomIds;
  for (std::size_t i = 0; i < n; ++i) atomIds[ground.herbrandBase[i]] = static_cast<int>(i);

  std::vector<CompiledRule> rules;
  for (const Rule &rule : ground.rules) {
    CompiledRule cr;
    if (rule.head) {
      cr.headKind = rule.head->kind == Head::Kind::Choice ? CompiledRule::HeadKind::Choice
                                                          : CompiledRule::HeadKind::Atom;
      for (const Atom &a : rule.head->atoms) cr.heads.push_back(atomIds.at(a));
    }
    for (const Literal &lit : rule.body) {
      if (lit.kind() == Literal::Kind::Plain) {
        int id = atomIds.at(lit.atom());
        if (lit.positive())
          cr.positive |= Mask(1) << id;
        else
          cr.negative |= Mask(1) << id;
      } else if (lit.kind() == Literal::Kind::Aggregate) {
        cr.aggregates.push_back(compileAggregate(lit, atomIds));
      }
    }
    rules.push_back(std::move(cr));
  }

  // Upper envelope: atoms derivable when negation and aggregates are read
  // optimistically. Stable models live inside it.
  Mask possible = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const CompiledRule &rule : rules) {
      if ((rule.positive & possible) != rule.positive) continue;
      for (int h : rule.heads) {
        Mask bit = Mask(1) << h;
        if (!(possible & bit)) {
          possible |= bit;
          changed = true;
        }
      }
    }
  }

  // Prune: impossible atoms are false everywhere.
  std::vector<CompiledRule> solver;
  for (const CompiledRule &rule : rules) {
    if ((rule.positive & possible) != rule.positive) continue; // can never fire
    CompiledRule pruned = rule;
    pruned.negative &= possible;
    for (CompiledAggregate &agg : pruned.aggregates) {
      std::vector<CompiledElement> kept;
      for (const CompiledElement &el : agg.elements) {
        if ((el.positive & possible) != el.positive) continue;
        CompiledElement e = el;
        e.negative &= possible;
        kept.push_back(e);
      }
      agg.elements = std::move(kept);
    }
    solver.push_back(std::move(pruned));
  }

  // Lower envelope: atoms forced into every model by definite rules.
  Mask certain = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const CompiledRule &rule : solver) {
      if (rule.headKind != CompiledRule::HeadKind::Atom) continue;
      if (rule.negative != 0 || !rule.aggregates.empty()) continue;
      if ((rule.positive & certain) != rule.positive) continue;
      Mask bit = Mask(1) << rule.heads.front();
      if (!(certain & bit)) {
        certain |= bit;
        changed = true;
      }
    }
  }

  std::vector<int> guessBits;
  for (std::size_t i = 0; i < n; ++i) {
    Mask bit = Mask(1) << i;
    if ((possible & bit) && !(certain & bit)) guessBits.push_back(static_cast<int>(i));
  }
  if (guessBits.size() > 30)
    throw GroundingError("stable-model search space too large (" + std::to_string(guessBits.size()) +
                         " undetermined atoms)");

  auto isModel = [&](Mask interp) {
    for (const CompiledRule &rule : solver) {
      bool body = (rule.positive & interp) == rule.positive && (rule.negative & interp) == 0;
      if (body) {
        for (const CompiledAggregate &agg : rule.aggregates) {
          if (!aggregateHoldsGrouped(agg, interp)) {
            body = false;
            break;
          }
        }
      }
      if (!body) continue;
      switch (rule.headKind) {
        case CompiledRule::HeadKind::None:
          return false;
        case CompiledRule::HeadKind::Atom:
          if (!(interp & (Mask(1) << rule.heads.front()))) return false;
          break;
        case CompiledRule::HeadKind::Choice:
          break;
      }
    }
    return true;
  };

  struct ReductRule {
    int head;
    Mask positive;
    Mask negative;
    const std::vector<CompiledAggregate> *aggregates;
  };

  auto isStable = [&](Mask interp) {
    std::vector<ReductRule> reduct;
    for (const CompiledRule &rule : solver) {
      bool body = (rule.positive & interp) == rule.positive && (rule.negative & interp) == 0;
      if (body) {
        for (const CompiledAggregate &agg : rule.aggregates) {
          if (!aggregateHoldsGrouped(agg, interp)) {
            body = false;
            break;
          }
        }
      }
      if (!body) continue;
      switch (rule.headKind) {
        case CompiledRule::HeadKind::None:
          return false; // a model never reaches this
        case CompiledRule::HeadKind::Atom:
          reduct.push_back({rule.heads.front(), rule.positive, rule.negative, &rule.aggregates});
          break;
        case CompiledRule::HeadKind::Choice:
          // A taken choice atom behaves like a plain head; an untaken one
          // imposes nothing.
          for (int h : rule.heads) {
            if (interp & (Mask(1) << h))
              reduct.push_back({h, rule.positive, rule.negative, &rule.aggregates});
          }
          break;
      }
    }

    Mask free = interp & ~certain;
    auto satisfiesReduct = [&](Mask j) {
      for (const ReductRule &rule : reduct) {
        bool body = (rule.positive & j) == rule.positive && (rule.negative & j) == 0;
        if (body) {
          for (const CompiledAggregate &agg : *rule.aggregates) {
            if (!aggregateHoldsGrouped(agg, j)) {
              body = false;
              break;
            }
          }
        }
        if (body && !(j & (Mask(1) << rule.head))) return false;
      }
      return true;
    };
    if (free == 0) return true;
    for (Mask sub = (free - 1) & free;; sub = (sub - 1) & free) {
      if (satisfiesReduct(certain | sub)) return false; // a proper smaller model exists
      if (sub == 0) break;
    }
    return true;
  };

  std::set<Interpretation> result;
  const std::size_t g = guessBits.size();
  for (Mask choice = 0; choice < (Mask(1) << g); ++choice) {
    Mask interp = certain;
    for (std::size_t b = 0; b < g; ++b) {
      if (choice & (Mask(1) << b)) interp |= Mask(1) << guessBits[b];
    }
    if (!isModel(interp)) continue;
    if (!isStable(interp)) continue;
    Interpretation model;
    for (std::size_t i = 0; i < n; ++i) {
      if (interp & (Mask(1) << i)) model.insert(ground.herbrandBase[i]);
    }
    result.insert(std::move(model));
  }
  return result;
}

EquivalenceResult equivalentModulo(const Program &first, const Program &second,
                                   const std::set<Signature> &hidden, std::size_t sizeCap) {
  auto project = [&](const std::set<Interpretation> &sets) {
    std::set<Interpretation> out;
    for (const Interpretation &i : sets) {
      Interpretation projected;
      for (const Atom &a : i) {
        if (!hidden.count(a.signature())) projected.insert(a);
      }
      out.insert(std::move(projected));
    }
    return out;
  };

  std::set<Interpretation> a = project(answerSets(ground(first, sizeCap)));
  std::set<Interpretation> b = project(answerSets(ground(second, sizeCap)));

  EquivalenceResult result;
  if (a == b) {
    result.equivalent = true;
    return result;
  }
  for (const Interpretation &i : a) {
    if (!b.count(i)) {
      result.witness = i;
      result.witnessSide = "first";
      return result;
    }
  }
  for (const Interpretation &i : b) {
    if (!a.count(i)) {
      result.witness = i;
      result.witnessSide = "second";
      return result;
    }
  }
  return result;
}

namespace {

std::string canonicalRule(const Rule &rule) {
  std::string out;
  if (rule.head) {
    out += rule.head->kind == Head::Kind::Choice ? "choice:" : "head:";
    std::vector<std::string> atoms;
    for (const Atom &a : rule.head->atoms) atoms.push_back(render(a));
    std::sort(atoms.begin(), atoms.end());
    for (const std::string &s : atoms) out += s + ";";
  } else {
    out += "constraint:";
  }
  out += "|";
  std::vector<std::string> plain;
  std::vector<std::string> aggs;
  for (const Literal &lit : rule.body) {
    if (lit.kind() == Literal::Kind::Plain) {
      plain.push_back((lit.positive() ? "+" : "-") + render(lit.atom()));
    } else if (lit.kind() == Literal::Kind::Aggregate) {
      const CountAggregate &agg = lit.aggregate();
      std::map<std::vector<Term>, std::set<std::string>> byTuple;
      for (const AggregateElement &el : agg.elements) {
        std::vector<std::string> conds;
        for (const Literal &c : el.condition)
          conds.push_back((c.positive() ? "+" : "-") + render(c.atom()));
        std::sort(conds.begin(), conds.end());
        std::string cond;
        for (const std::string &s : conds) cond += s + ",";
        byTuple[el.terms].insert(cond);
      }
      // Tuple labels are dropped; only the family of condition groups counts.
      std::vector<std::string> groups;
      for (const auto &[tuple, conds] : byTuple) {
        std::string group = "{";
        for (const std::string &c : conds) group += c + "|";
        group += "}";
        groups.push_back(std::move(group));
      }
      std::sort(groups.begin(), groups.end());
      std::string text = lit.positive() ? "agg+" : "agg-";
      if (agg.lower) text += render(agg.lower->bound) + comparisonOpText(agg.lower->op);
      text += "[";
      for (const std::string &gxt : groups) text += gxt;
      text += "]";
      if (agg.upper) text += std::string(comparisonOpText(agg.upper->op)) + render(agg.upper->bound);
      aggs.push_back(std::move(text));
    }
  }
  std::sort(plain.begin(), plain.end());
  std::sort(aggs.begin(), aggs.end());
  for (const std::string &s : plain) out += s + " ";
  for (const std::string &s : aggs) out += s + " ";
  return out;
}

} // namespace

bool sameGroundingModuloTupleNames(const GroundProgram &a, const GroundProgram &b) {
  std::vector<std::string> ra, rb;
  for (const Rule &r : a.rules) ra.push_back(canonicalRule(r));
  for (const Rule &r : b.rules) rb.push_back(canonicalRule(r));
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  return ra == rb;
}

} // namespace aagg
