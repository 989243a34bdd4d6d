#include <doctest.h>

#include <aagg/parser.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace aagg;

namespace {

std::string readFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

TEST_CASE("constraint with comparison literal") {
  ParseResult r = parse(":- hc(X,Y), hc(X,Z), Y!=Z.");
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.program.statements.size() == 1);
  const Rule &rule = r.program.statements.front();
  CHECK(rule.isConstraint());
  REQUIRE(rule.body.size() == 3);
  CHECK(rule.body[0] == Literal::plain(true, Atom{"hc", {Term::variable("X"), Term::variable("Y")}}));
  CHECK(rule.body[1] == Literal::plain(true, Atom{"hc", {Term::variable("X"), Term::variable("Z")}}));
  CHECK(rule.body[2] ==
        Literal::comparison(Term::variable("Y"), ComparisonOp::NotEqual, Term::variable("Z")));
}

TEST_CASE("minimal fact") {
  ParseResult r = parse("p.");
  REQUIRE(r.program.statements.size() == 1);
  const Rule &rule = r.program.statements.front();
  CHECK(rule.isFact());
  CHECK(rule.head->atoms.front() == Atom{"p", {}});
}

TEST_CASE("constraint with aggregate literal") {
  ParseResult r = parse(":- 2 <= #count{ Y : hc(X,Y) }, hc_project_Z(X).");
  REQUIRE(r.diagnostics.empty());
  const Rule &rule = r.program.statements.front();
  REQUIRE(rule.body.size() == 2);
  const Literal &agg = rule.body[0];
  REQUIRE(agg.kind() == Literal::Kind::Aggregate);
  CHECK(agg.positive());
  REQUIRE(agg.aggregate().lower.has_value());
  CHECK(agg.aggregate().lower->bound == Term::integer(2));
  CHECK(agg.aggregate().lower->op == ComparisonOp::LessEqual);
  CHECK_FALSE(agg.aggregate().upper.has_value());
  REQUIRE(agg.aggregate().elements.size() == 1);
  const AggregateElement &el = agg.aggregate().elements.front();
  CHECK(el.terms == std::vector<Term>{Term::variable("Y")});
  CHECK(el.condition ==
        std::vector<Literal>{Literal::plain(true, Atom{"hc", {Term::variable("X"), Term::variable("Y")}})});
  CHECK(rule.body[1].kind() == Literal::Kind::Plain);
}

TEST_CASE("choice head and negation") {
  ParseResult r = parse("{ hc(X,Y) } :- edge(X,Y).\n:- node(X), not reach(X,X).");
  REQUIRE(r.program.statements.size() == 2);
  CHECK(r.program.statements[0].head->kind == Head::Kind::Choice);
  CHECK_FALSE(r.program.statements[1].body[1].positive());
}

TEST_CASE("aggregate with both guards renders in guard order") {
  ParseResult r = parse(":- 1 <= #count{ X : p(X) } <= 2.");
  REQUIRE(r.diagnostics.empty());
  CHECK(render(r.program.statements.front()) == ":- 1 <= #count{ X : p(X) } <= 2.");
}

TEST_CASE("negated aggregate with upper guard") {
  ParseResult r = parse(":- not #count{ X : p(X) } < 2.");
  REQUIRE(r.diagnostics.empty());
  const Literal &lit = r.program.statements.front().body.front();
  REQUIRE(lit.kind() == Literal::Kind::Aggregate);
  CHECK_FALSE(lit.positive());
  CHECK(lit.aggregate().upper->op == ComparisonOp::Less);
  CHECK(render(lit) == "not #count{ X : p(X) } < 2");
}

TEST_CASE("unsupported statements survive verbatim with a note") {
  std::string source = "p(1).\n#show p/1.\nq :- p(1).";
  ParseResult r = parse(source);
  REQUIRE(r.program.statements.size() == 3);
  CHECK_FALSE(r.hasErrors());
  REQUIRE(r.program.statements[1].isRaw());
  CHECK(*r.program.statements[1].raw == "#show p/1.");
  bool sawNote = false;
  for (const ParseDiagnostic &d : r.diagnostics)
    if (d.severity == ParseDiagnostic::Severity::PassthroughNote) sawNote = true;
  CHECK(sawNote);
}

TEST_CASE("unbalanced delimiters produce an error and skip the statement") {
  ParseResult r = parse("p(1)).\nq.");
  CHECK(r.hasErrors());
  REQUIRE(r.program.statements.size() == 1);
  CHECK(r.program.statements.front().head->atoms.front().predicate == "q");
}

TEST_CASE("missing terminating dot produces an error") {
  ParseResult r = parse("p(1). q :- p(1)");
  CHECK(r.hasErrors());
  CHECK(r.program.statements.size() == 1);
}

TEST_CASE("comments are dropped and positions are 1-based") {
  ParseResult r = parse("% intro\np(1). % trailing\n  |bogus|.\n");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics.front().line == 3);
  CHECK(r.diagnostics.front().column == 3);
}

TEST_CASE("arithmetic terms round trip with precedence") {
  ParseResult r = parse("q(X) :- p(X), X != Y*2+1, p(Y).");
  REQUIRE(r.diagnostics.empty());
  CHECK(render(r.program.statements.front()) == "q(X) :- p(X), X != Y*2+1, p(Y).");
  Term nested = Term::arithmetic(ArithOp::Mul, Term::variable("A"),
                                 Term::arithmetic(ArithOp::Add, Term::integer(1), Term::integer(2)));
  CHECK(render(nested) == "A*(1+2)");
}

TEST_CASE("negative integers parse as constants") {
  ParseResult r = parse("p(-3).");
  REQUIRE(r.diagnostics.empty());
  CHECK(r.program.statements.front().head->atoms.front().args.front() == Term::integer(-3));
}

TEST_CASE("render then parse is the identity on structured programs") {
  std::string source = readFile(std::string(CORPUS_DIR) + "/hamiltonian.lp");
  ParseResult first = parse(source);
  REQUIRE_FALSE(first.hasErrors());
  ParseResult second = parse(render(first.program));
  CHECK(second.program == first.program);
}

TEST_CASE("round trip is idempotent over the whole corpus and raw text survives") {
  int files = 0;
  for (const auto &entry : std::filesystem::directory_iterator(CORPUS_DIR)) {
    if (entry.path().extension() != ".lp") continue;
    ++files;
    INFO("corpus file ", entry.path().filename().string());
    ParseResult first = parse(readFile(entry.path()));
    CHECK_FALSE(first.hasErrors());
    std::string once = render(first.program);
    ParseResult second = parse(once);
    CHECK(second.program == first.program);
    CHECK(render(second.program) == once);
    for (std::size_t i = 0; i < first.program.statements.size(); ++i) {
      if (first.program.statements[i].isRaw()) {
        CHECK(second.program.statements[i].raw == first.program.statements[i].raw);
      }
    }
  }
  CHECK(files >= 25);
}

namespace {

// Small random program generator for the round-trip property.
struct Generator {
  std::mt19937 rng;
  explicit Generator(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Term term(int depth = 0) {
    switch (depth > 1 ? pick(3) : pick(5)) {
      case 0: return Term::integer(pick(7) - 3);
      case 1: return Term::symbol(std::string(1, static_cast<char>('a' + pick(3))));
      case 2: return Term::variable(std::string(1, static_cast<char>('X' + pick(3))));
      case 3: return Term::function("f", {term(depth + 1)});
      default:
        return Term::arithmetic(static_cast<ArithOp>(pick(3)), term(depth + 1), term(depth + 1));
    }
  }

  Atom atom() {
    std::vector<Term> args;
    int n = pick(3);
    for (int i = 0; i < n; ++i) args.push_back(term());
    return Atom{std::string(1, static_cast<char>('p' + pick(3))), std::move(args)};
  }

  Literal literal() {
    switch (pick(4)) {
      case 0: return Literal::plain(true, atom());
      case 1: return Literal::plain(false, atom());
      case 2:
        return Literal::comparison(term(), static_cast<ComparisonOp>(pick(6)), term());
      default: {
        CountAggregate agg;
        agg.lower = AggregateGuard{Term::integer(pick(3)), ComparisonOp::LessEqual};
        AggregateElement el;
        el.terms.push_back(Term::variable("V"));
        el.condition.push_back(Literal::plain(true, Atom{"p", {Term::variable("V")}}));
        if (pick(2)) el.condition.push_back(Literal::comparison(Term::variable("V"), ComparisonOp::Less, term()));
        agg.elements.push_back(std::move(el));
        return Literal::aggregate(pick(2) == 0, std::move(agg));
      }
    }
  }

  Rule rule() {
    Rule r;
    if (pick(4) != 0) {
      if (pick(4) == 0)
        r.head = Head::choice({atom()});
      else
        r.head = Head::atom(atom());
    }
    int n = pick(4) + (r.head ? 0 : 1);
    for (int i = 0; i < n; ++i) r.body.push_back(literal());
    return r;
  }
};

} // namespace

TEST_CASE("arbitrary byte soup parses without crashing") {
  std::mt19937 rng(99);
  const std::string alphabet = "abXY_09(){}.,;:%<>=!+-*#\"\\ \n\t|&";
  for (int iteration = 0; iteration < 300; ++iteration) {
    std::string soup;
    int len = std::uniform_int_distribution<int>(0, 120)(rng);
    for (int i = 0; i < len; ++i)
      soup += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    ParseResult r = parse(soup);
    // whatever came back must render and reparse stably
    ParseResult again = parse(render(r.program));
    CHECK(again.program == r.program);
  }
}

TEST_CASE("round trip property on generated programs") {
  Generator gen(20240817);
  for (int iteration = 0; iteration < 200; ++iteration) {
    Program p;
    int n = gen.pick(5) + 1;
    for (int i = 0; i < n; ++i) p.statements.push_back(gen.rule());
    std::string text = render(p);
    INFO("program:\n", text);
    ParseResult parsed = parse(text);
    CHECK_FALSE(parsed.hasErrors());
    CHECK(parsed.program == p);
  }
}
