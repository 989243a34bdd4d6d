#ifndef AAGG_AST_HPP
#define AAGG_AST_HPP

#include <compare>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace aagg {

/// Comparison predicates usable in comparison literals and aggregate guards.
enum class ComparisonOp { Less, LessEqual, Equal, NotEqual, Greater, GreaterEqual };

/// Integer arithmetic operators supported in terms.
enum class ArithOp { Add, Sub, Mul };

const char *comparisonOpText(ComparisonOp op);
char arithOpChar(ArithOp op);

/// A term: symbolic or integer constant, variable, function term, or integer
/// arithmetic expression. Immutable value type.
class Term {
public:
  enum class Kind { Symbol, Integer, Variable, Function, Arithmetic };

  static Term symbol(std::string name);
  static Term integer(long long value);
  static Term variable(std::string name);
  static Term function(std::string name, std::vector<Term> args);
  static Term arithmetic(ArithOp op, Term lhs, Term rhs);

  Kind kind() const { return kind_; }
  const std::string &name() const { return name_; }
  long long value() const { return value_; }
  ArithOp arithOp() const { return op_; }
  const std::vector<Term> &args() const { return args_; }
  const Term &lhs() const { return args_[0]; }
  const Term &rhs() const { return args_[1]; }

  /// The anonymous variable `_`.
  bool isAnonymous() const { return kind_ == Kind::Variable && name_ == "_"; }

  int compare(const Term &other) const;
  bool operator==(const Term &other) const { return compare(other) == 0; }
  bool operator<(const Term &other) const { return compare(other) < 0; }

private:
  Kind kind_ = Kind::Symbol;
  std::string name_;
  long long value_ = 0;
  ArithOp op_ = ArithOp::Add;
  std::vector<Term> args_; // function arguments, or {lhs, rhs} for arithmetic
};

/// Predicate name plus arity; identifies a predicate.
struct Signature {
  std::string name;
  int arity = 0;

  bool operator==(const Signature &) const = default;
  auto operator<=>(const Signature &) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  int arity() const { return static_cast<int>(args.size()); }
  Signature signature() const { return {predicate, arity()}; }

  bool operator==(const Atom &) const = default;
  bool operator<(const Atom &other) const {
    if (predicate != other.predicate) return predicate < other.predicate;
    return args < other.args;
  }
};

class Literal;

/// One `t1,...,tk : L1,...,Lm` entry of a count aggregate.
struct AggregateElement {
  std::vector<Term> terms;        // nonempty
  std::vector<Literal> condition; // nonempty in well-formed elements

  bool operator==(const AggregateElement &) const;
  bool operator<(const AggregateElement &) const;
};

/// A guard term together with the comparison relating it to the count.
struct AggregateGuard {
  Term bound;
  ComparisonOp op = ComparisonOp::LessEqual;

  bool operator==(const AggregateGuard &) const = default;
  bool operator<(const AggregateGuard &other) const {
    if (!(bound == other.bound)) return bound < other.bound;
    return op < other.op;
  }
};

/// `s1 <1 #count{ e1; ...; en } <2 s2` with either guard optional.
/// For `lower`, the comparison reads bound-op-count; for `upper`,
/// count-op-bound.
struct CountAggregate {
  std::optional<AggregateGuard> lower;
  std::vector<AggregateElement> elements;
  std::optional<AggregateGuard> upper;

  bool operator==(const CountAggregate &) const = default;
  bool operator<(const CountAggregate &other) const {
    if (lower != other.lower) return lower < other.lower;
    if (elements != other.elements) return elements < other.elements;
    return upper < other.upper;
  }
};

/// Body literal: a (possibly negated) atom, a comparison between terms, or a
/// (possibly negated) count aggregate. `positive == false` means default
/// negation `not`.
class Literal {
public:
  enum class Kind { Plain, Comparison, Aggregate };

  static Literal plain(bool positive, Atom atom);
  static Literal comparison(Term lhs, ComparisonOp op, Term rhs);
  static Literal aggregate(bool positive, CountAggregate aggregate);

  Kind kind() const { return kind_; }
  bool positive() const { return positive_; }
  const Atom &atom() const { return atom_; }
  const Term &lhs() const { return lhs_; }
  const Term &rhs() const { return rhs_; }
  ComparisonOp comparisonOp() const { return op_; }
  const CountAggregate &aggregate() const { return *aggregate_; }

  bool operator==(const Literal &) const = default;
  bool operator<(const Literal &other) const;

private:
  Kind kind_ = Kind::Plain;
  bool positive_ = true;
  Atom atom_;
  Term lhs_;
  Term rhs_;
  ComparisonOp op_ = ComparisonOp::Equal;
  std::optional<CountAggregate> aggregate_;
};

/// Rule head: a single atom or a choice `{ a1; ...; ak }`.
struct Head {
  enum class Kind { Atom, Choice };

  Kind kind = Kind::Atom;
  std::vector<Atom> atoms;

  static Head atom(Atom a) { return {Kind::Atom, {std::move(a)}}; }
  static Head choice(std::vector<Atom> as) { return {Kind::Choice, std::move(as)}; }

  bool operator==(const Head &) const = default;
};

/// One statement. Either structured (head/body) or a raw passthrough holding
/// the verbatim source text of a statement outside the supported subset; a
/// raw rule never has a structured head or body.
struct Rule {
  std::optional<Head> head;
  std::vector<Literal> body;
  std::optional<std::string> raw;

  static Rule passthrough(std::string text);
  static Rule fact(Atom a);
  static Rule basic(Head h, std::vector<Literal> body);
  static Rule constraint(std::vector<Literal> body);

  bool isRaw() const { return raw.has_value(); }
  bool isConstraint() const { return !raw && !head; }
  bool isFact() const { return !raw && head && body.empty(); }

  bool operator==(const Rule &) const = default;
};

/// An ordered list of statements; order is preserved from source to output.
struct Program {
  std::vector<Rule> statements;

  bool operator==(const Program &) const = default;
};

/// Every predicate occurring in a head or body atom of a structured rule,
/// including atoms inside aggregate element conditions. Raw statements
/// contribute nothing.
std::set<Signature> predicateSignatures(const Program &program);

/// Visit every variable name occurring in a term / literal / rule, including
/// variables local to aggregate elements. Anonymous `_` occurrences are
/// visited like any other variable.
void forEachVariable(const Term &term, const std::function<void(const std::string &)> &fn);
void forEachVariable(const Literal &lit, const std::function<void(const std::string &)> &fn);
void forEachVariable(const Rule &rule, const std::function<void(const std::string &)> &fn);

std::set<std::string> collectVariables(const Literal &lit);
std::set<std::string> collectVariables(const Rule &rule);

/// Visit every atom of a literal, descending into aggregate element
/// conditions. `positive` reflects the sign of the immediately enclosing
/// literal.
void forEachAtom(const Literal &lit, const std::function<void(const Atom &, bool positive)> &fn);

} // namespace aagg

#endif
