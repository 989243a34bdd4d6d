#include <aagg/ast.hpp>

#include <cassert>

namespace aagg {

const char *comparisonOpText(ComparisonOp op) {
  switch (op) {
    case ComparisonOp::Less: return "<";
    case ComparisonOp::LessEqual: return "<=";
    case ComparisonOp::Equal: return "=";
    case ComparisonOp::NotEqual: return "!=";
    case ComparisonOp::Greater: return ">";
    case ComparisonOp::GreaterEqual: return ">=";
  }
  return "?";
}

char arithOpChar(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return '+';
    case ArithOp::Sub: return '-';
    case ArithOp::Mul: return '*';
  }
  return '?';
}

Term Term::symbol(std::string name) {
  Term t;
  t.kind_ = Kind::Symbol;
  t.name_ = std::move(name);
  return t;
}

Term Term::integer(long long value) {
  Term t;
  t.kind_ = Kind::Integer;
  t.value_ = value;
  return t;
}

Term Term::variable(std::string name) {
  Term t;
  t.kind_ = Kind::Variable;
  t.name_ = std::move(name);
  return t;
}

Term Term::function(std::string name, std::vector<Term> args) {
  assert(!args.empty());
  Term t;
  t.kind_ = Kind::Function;
  t.name_ = std::move(name);
  t.args_ = std::move(args);
  return t;
}

Term Term::arithmetic(ArithOp op, Term lhs, Term rhs) {
  Term t;
  t.kind_ = Kind::Arithmetic;
  t.op_ = op;
  t.args_.push_back(std::move(lhs));
  t.args_.push_back(std::move(rhs));
  return t;
}

int Term::compare(const Term &other) const {
  if (kind_ != other.kind_) return kind_ < other.kind_ ? -1 : 1;
  if (int c = name_.compare(other.name_); c != 0) return c;
  if (value_ != other.value_) return value_ < other.value_ ? -1 : 1;
  if (op_ != other.op_) return op_ < other.op_ ? -1 : 1;
  if (args_.size() != other.args_.size()) return args_.size() < other.args_.size() ? -1 : 1;
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (int c = args_[i].compare(other.args_[i]); c != 0) return c;
  }
  return 0;
}

bool AggregateElement::operator==(const AggregateElement &other) const {
  return terms == other.terms && condition == other.condition;
}

bool AggregateElement::operator<(const AggregateElement &other) const {
  if (terms != other.terms) return terms < other.terms;
  return condition < other.condition;
}

bool Literal::operator<(const Literal &other) const {
  if (kind_ != other.kind_) return kind_ < other.kind_;
  if (positive_ != other.positive_) return positive_ < other.positive_;
  if (!(atom_ == other.atom_)) return atom_ < other.atom_;
  if (!(lhs_ == other.lhs_)) return lhs_ < other.lhs_;
  if (!(rhs_ == other.rhs_)) return rhs_ < other.rhs_;
  if (op_ != other.op_) return op_ < other.op_;
  return aggregate_ < other.aggregate_;
}

Literal Literal::plain(bool positive, Atom atom) {
  Literal l;
  l.kind_ = Kind::Plain;
  l.positive_ = positive;
  l.atom_ = std::move(atom);
  return l;
}

Literal Literal::comparison(Term lhs, ComparisonOp op, Term rhs) {
  Literal l;
  l.kind_ = Kind::Comparison;
  l.lhs_ = std::move(lhs);
  l.rhs_ = std::move(rhs);
  l.op_ = op;
  return l;
}

Literal Literal::aggregate(bool positive, CountAggregate aggregate) {
  Literal l;
  l.kind_ = Kind::Aggregate;
  l.positive_ = positive;
  l.aggregate_ = std::move(aggregate);
  return l;
}

Rule Rule::passthrough(std::string text) {
  Rule r;
  r.raw = std::move(text);
  return r;
}

Rule Rule::fact(Atom a) {
  Rule r;
  r.head = Head::atom(std::move(a));
  return r;
}

Rule Rule::basic(Head h, std::vector<Literal> body) {
  Rule r;
  r.head = std::move(h);
  r.body = std::move(body);
  return r;
}

Rule Rule::constraint(std::vector<Literal> body) {
  Rule r;
  r.body = std::move(body);
  return r;
}

std::set<Signature> predicateSignatures(const Program &program) {
  std::set<Signature> out;
  auto add = [&](const Atom &a, bool) { out.insert(a.signature()); };
  for (const Rule &rule : program.statements) {
    if (rule.isRaw()) continue;
    if (rule.head) {
      for (const Atom &a : rule.head->atoms) out.insert(a.signature());
    }
    for (const Literal &lit : rule.body) forEachAtom(lit, add);
  }
  return out;
}

namespace {

void visitTermVars(const Term &term, const std::function<void(const std::string &)> &fn) {
  switch (term.kind()) {
    case Term::Kind::Variable:
      fn(term.name());
      break;
    case Term::Kind::Function:
    case Term::Kind::Arithmetic:
      for (const Term &arg : term.args()) visitTermVars(arg, fn);
      break;
    default:
      break;
  }
}

} // namespace

void forEachVariable(const Term &term, const std::function<void(const std::string &)> &fn) {
  visitTermVars(term, fn);
}

void forEachVariable(const Literal &lit, const std::function<void(const std::string &)> &fn) {
  switch (lit.kind()) {
    case Literal::Kind::Plain:
      for (const Term &t : lit.atom().args) visitTermVars(t, fn);
      break;
    case Literal::Kind::Comparison:
      visitTermVars(lit.lhs(), fn);
      visitTermVars(lit.rhs(), fn);
      break;
    case Literal::Kind::Aggregate: {
      const CountAggregate &agg = lit.aggregate();
      if (agg.lower) visitTermVars(agg.lower->bound, fn);
      if (agg.upper) visitTermVars(agg.upper->bound, fn);
      for (const AggregateElement &el : agg.elements) {
        for (const Term &t : el.terms) visitTermVars(t, fn);
        for (const Literal &c : el.condition) forEachVariable(c, fn);
      }
      break;
    }
  }
}

void forEachVariable(const Rule &rule, const std::function<void(const std::string &)> &fn) {
  if (rule.head) {
    for (const Atom &a : rule.head->atoms)
      for (const Term &t : a.args) visitTermVars(t, fn);
  }
  for (const Literal &lit : rule.body) forEachVariable(lit, fn);
}

std::set<std::string> collectVariables(const Literal &lit) {
  std::set<std::string> out;
  forEachVariable(lit, [&](const std::string &v) { out.insert(v); });
  return out;
}

std::set<std::string> collectVariables(const Rule &rule) {
  std::set<std::string> out;
  forEachVariable(rule, [&](const std::string &v) { out.insert(v); });
  return out;
}

void forEachAtom(const Literal &lit, const std::function<void(const Atom &, bool positive)> &fn) {
  switch (lit.kind()) {
    case Literal::Kind::Plain:
      fn(lit.atom(), lit.positive());
      break;
    case Literal::Kind::Comparison:
      break;
    case Literal::Kind::Aggregate:
      for (const AggregateElement &el : lit.aggregate().elements)
        for (const Literal &c : el.condition) forEachAtom(c, fn);
      break;
  }
}

} // namespace aagg
