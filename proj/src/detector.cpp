#include <aagg/detector.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>

namespace aagg {

namespace {

// A variable plus integer offset, the only comparison-side shape the
// detector accepts.
struct OffsetVar {
  std::string name;
  long long offset = 0;
};

std::optional<OffsetVar> normalizeSide(const Term &t) {
  if (t.kind() == Term::Kind::Variable) {
    if (t.isAnonymous()) return std::nullopt;
    return OffsetVar{t.name(), 0};
  }
  if (t.kind() == Term::Kind::Arithmetic &&
      (t.arithOp() == ArithOp::Add || t.arithOp() == ArithOp::Sub)) {
    const Term &l = t.lhs();
    const Term &r = t.rhs();
    if (l.kind() == Term::Kind::Variable && !l.isAnonymous() && r.kind() == Term::Kind::Integer) {
      long long off = t.arithOp() == ArithOp::Add ? r.value() : -r.value();
      return OffsetVar{l.name(), off};
    }
  }
  return std::nullopt;
}

} // namespace

std::optional<ComparisonFact> normalizeComparison(const Literal &lit, std::size_t bodyIndex) {
  if (lit.kind() != Literal::Kind::Comparison) return std::nullopt;
  auto l = normalizeSide(lit.lhs());
  auto r = normalizeSide(lit.rhs());
  if (!l || !r || l->offset != r->offset || l->name == r->name) return std::nullopt;
  switch (lit.comparisonOp()) {
    case ComparisonOp::NotEqual:
      return ComparisonFact{l->name, r->name, ComparisonFact::Relation::Distinct, bodyIndex};
    case ComparisonOp::Less:
      return ComparisonFact{l->name, r->name, ComparisonFact::Relation::LessThan, bodyIndex};
    case ComparisonOp::Greater:
      return ComparisonFact{r->name, l->name, ComparisonFact::Relation::LessThan, bodyIndex};
    default:
      return std::nullopt;
  }
}

std::vector<std::size_t> RewriteCandidate::countingLiterals() const {
  std::vector<std::size_t> out = countingFLiterals;
  out.insert(out.end(), consumedComparisons.begin(), consumedComparisons.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// One qualifying variable set together with the comparisons it consumes.
struct VariableSet {
  std::vector<std::string> orderedVars; // chain order, or body order for cliques
  std::vector<std::size_t> comparisonIdx;
};

// A fully checked candidate, before tie-breaking.
struct Viable {
  RewriteCandidate candidate;
  std::size_t firstComparison = 0;
};

// Chain check: the `<` facts over the set, viewed as a digraph, must be
// acyclic with a Hamiltonian path; then every fact is implied by the chain
// and consuming all of them preserves the rule. Returns the chain order, or
// nothing.
std::optional<std::vector<int>> chainOrder(int n, const std::vector<std::pair<int, int>> &edges) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<int> indeg(n, 0);
  for (auto [a, b] : edges) {
    if (!adj[a][b]) {
      adj[a][b] = true;
      ++indeg[b];
    }
  }
  std::vector<int> order;
  std::vector<bool> used(n, false);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (!used[v] && indeg[v] == 0) {
        if (pick != -1) return std::nullopt; // two minimal nodes: no single chain
        pick = v;
      }
    }
    if (pick == -1) return std::nullopt; // cycle
    if (!order.empty() && !adj[order.back()][pick]) return std::nullopt; // gap in the chain
    used[pick] = true;
    order.push_back(pick);
    for (int v = 0; v < n; ++v) {
      if (adj[pick][v]) --indeg[v];
    }
  }
  return order;
}

} // namespace

std::optional<RewriteCandidate> findCandidate(const Rule &rule, std::size_t ruleIndex) {
  if (rule.isRaw() || rule.body.empty()) return std::nullopt;
  // Rules that already use aggregates are left alone.
  for (const Literal &lit : rule.body) {
    if (lit.kind() == Literal::Kind::Aggregate) return std::nullopt;
  }

  std::vector<ComparisonFact> facts;
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    if (auto fact = normalizeComparison(rule.body[i], i)) facts.push_back(std::move(*fact));
  }
  if (facts.empty()) return std::nullopt;

  std::vector<std::string> vars;
  auto varBit = [&](const std::string &name) -> int {
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it != vars.end()) return static_cast<int>(it - vars.begin());
    vars.push_back(name);
    return static_cast<int>(vars.size() - 1);
  };
  struct IndexedFact {
    int a, b;
    ComparisonFact::Relation rel;
    std::size_t literal;
  };
  std::vector<IndexedFact> ifacts;
  for (const ComparisonFact &f : facts)
    ifacts.push_back({varBit(f.varA), varBit(f.varB), f.relation, f.sourceLiteral});
  const int k = static_cast<int>(vars.size());
  if (k > 16) return std::nullopt; // far beyond anything seen in real rules

  // Enumerate variable sets that qualify as a complete != clique or a
  // monotone < chain.
  std::vector<VariableSet> sets;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    int size = std::popcount(mask);
    if (size < 2) continue;
    bool touching = false;
    bool hasDistinct = false, hasLess = false;
    std::vector<const IndexedFact *> inside;
    for (const IndexedFact &f : ifacts) {
      bool inA = mask & (1u << f.a), inB = mask & (1u << f.b);
      if (inA != inB) {
        touching = true; // a residual comparison would mention a counting variable
        break;
      }
      if (inA && inB) {
        inside.push_back(&f);
        (f.rel == ComparisonFact::Relation::Distinct ? hasDistinct : hasLess) = true;
      }
    }
    if (touching || inside.empty() || (hasDistinct && hasLess)) continue;

    std::vector<int> members;
    for (int v = 0; v < k; ++v)
      if (mask & (1u << v)) members.push_back(v);
    auto localIndex = [&](int v) {
      return static_cast<int>(std::find(members.begin(), members.end(), v) - members.begin());
    };

    std::vector<std::string> ordered;
    if (hasDistinct) {
      // Complete clique over all pairs.
      std::vector<std::vector<bool>> pair(size, std::vector<bool>(size, false));
      for (const IndexedFact *f : inside) {
        pair[localIndex(f->a)][localIndex(f->b)] = true;
        pair[localIndex(f->b)][localIndex(f->a)] = true;
      }
      bool complete = true;
      for (int i = 0; i < size && complete; ++i)
        for (int j = i + 1; j < size && complete; ++j)
          if (!pair[i][j]) complete = false;
      if (!complete) continue;
      for (int v : members) ordered.push_back(vars[v]); // refined to body order below
    } else {
      std::vector<std::pair<int, int>> edges;
      for (const IndexedFact *f : inside) edges.emplace_back(localIndex(f->a), localIndex(f->b));
      auto order = chainOrder(size, edges);
      if (!order) continue;
      for (int local : *order) ordered.push_back(vars[members[local]]);
    }

    std::vector<std::size_t> comparisonIdx;
    for (const IndexedFact *f : inside) comparisonIdx.push_back(f->literal);
    std::sort(comparisonIdx.begin(), comparisonIdx.end());
    comparisonIdx.erase(std::unique(comparisonIdx.begin(), comparisonIdx.end()), comparisonIdx.end());
    sets.push_back({std::move(ordered), std::move(comparisonIdx)});
  }

  // Match b positive F literals against each set, then verify the counting
  // variables occur nowhere else in the rule.
  std::vector<Viable> viable;
  for (VariableSet &set : sets) {
    const std::set<std::string> inSet(set.orderedVars.begin(), set.orderedVars.end());

    struct ComboKey {
      Signature sig;
      std::size_t position;
      std::vector<Term> context;
      bool operator<(const ComboKey &o) const {
        if (auto c = sig <=> o.sig; c != 0) return c < 0;
        if (position != o.position) return position < o.position;
        return context < o.context;
      }
    };
    std::map<ComboKey, std::map<std::string, std::vector<std::size_t>>> buckets;
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      const Literal &lit = rule.body[i];
      if (lit.kind() != Literal::Kind::Plain || !lit.positive()) continue;
      const Atom &atom = lit.atom();
      for (std::size_t p = 0; p < atom.args.size(); ++p) {
        const Term &arg = atom.args[p];
        if (arg.kind() != Term::Kind::Variable || arg.isAnonymous()) continue;
        if (!inSet.count(arg.name())) continue;
        std::vector<Term> context = atom.args;
        context.erase(context.begin() + static_cast<std::ptrdiff_t>(p));
        buckets[{atom.signature(), p, std::move(context)}][arg.name()].push_back(i);
      }
    }

    for (auto &[key, byVar] : buckets) {
      if (byVar.size() != inSet.size()) continue;
      bool oneEach = true;
      for (auto &[v, lits] : byVar)
        if (lits.size() != 1) oneEach = false;
      if (!oneEach) continue;

      bool contextClean = true;
      for (const Term &t : key.context) {
        forEachVariable(t, [&](const std::string &v) {
          if (inSet.count(v)) contextClean = false;
        });
      }
      if (!contextClean) continue;

      std::vector<std::size_t> fLits;
      for (const std::string &v : set.orderedVars) fLits.push_back(byVar.at(v).front());

      std::set<std::size_t> consumed(fLits.begin(), fLits.end());
      consumed.insert(set.comparisonIdx.begin(), set.comparisonIdx.end());

      bool leaked = false;
      if (rule.head) {
        for (const Atom &a : rule.head->atoms) {
          for (const Term &t : a.args) {
            forEachVariable(t, [&](const std::string &v) {
              if (inSet.count(v)) leaked = true;
            });
          }
        }
      }
      std::vector<std::size_t> residual;
      for (std::size_t i = 0; i < rule.body.size() && !leaked; ++i) {
        if (consumed.count(i)) continue;
        residual.push_back(i);
        forEachVariable(rule.body[i], [&](const std::string &v) {
          if (inSet.count(v)) leaked = true;
        });
      }
      if (leaked) continue;

      RewriteCandidate cand;
      cand.ruleIndex = ruleIndex;
      cand.predicate = key.sig;
      cand.bound = static_cast<int>(inSet.size());
      cand.countingVars = set.orderedVars;
      cand.countingPosition = key.position;
      cand.context = key.context;
      cand.countingFLiterals = fLits;
      cand.consumedComparisons = set.comparisonIdx;
      cand.residualBody = std::move(residual);
      cand.head = rule.head;
      viable.push_back({std::move(cand), set.comparisonIdx.front()});
    }
  }

  if (viable.empty()) return std::nullopt;

  // For cliques countingVars were collected in bit order; reorder by first
  // occurrence among the consumed F literals so the reused name matches the
  // way the rule reads.
  for (Viable &v : viable) {
    RewriteCandidate &c = v.candidate;
    bool isChain = false;
    for (std::size_t idx : c.consumedComparisons) {
      if (auto f = normalizeComparison(rule.body[idx], idx))
        isChain = f->relation == ComparisonFact::Relation::LessThan;
      break;
    }
    if (isChain) continue;
    std::vector<std::size_t> sortedF = c.countingFLiterals;
    std::sort(sortedF.begin(), sortedF.end());
    std::vector<std::string> reordered;
    std::vector<std::size_t> reorderedF;
    for (std::size_t idx : sortedF) {
      const Term &arg = rule.body[idx].atom().args[c.countingPosition];
      reordered.push_back(arg.name());
      reorderedF.push_back(idx);
    }
    c.countingVars = std::move(reordered);
    c.countingFLiterals = std::move(reorderedF);
  }

  auto better = [](const Viable &a, const Viable &b) {
    if (a.candidate.bound != b.candidate.bound) return a.candidate.bound > b.candidate.bound;
    if (a.firstComparison != b.firstComparison) return a.firstComparison < b.firstComparison;
    if (a.candidate.countingVars != b.candidate.countingVars)
      return a.candidate.countingVars < b.candidate.countingVars;
    return a.candidate.predicate < b.candidate.predicate;
  };
  std::sort(viable.begin(), viable.end(), better);
  return viable.front().candidate;
}

std::vector<RewriteCandidate> findAllCandidates(const Program &program) {
  std::vector<RewriteCandidate> out;
  for (std::size_t i = 0; i < program.statements.size(); ++i) {
    if (auto cand = findCandidate(program.statements[i], i)) out.push_back(std::move(*cand));
  }
  return out;
}

} // namespace aagg
