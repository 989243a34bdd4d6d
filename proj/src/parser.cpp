#include <aagg/parser.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace aagg {

bool ParseResult::hasErrors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const ParseDiagnostic &d) {
    return d.severity == ParseDiagnostic::Severity::Error;
  });
}

namespace {

// ---------------------------------------------------------------------------
// Statement splitting. Statements end at a `.` outside delimiters, strings
// and comments; `..` never terminates (interval syntax lands in passthrough).

struct RawStatement {
  std::string text;
  int line = 1;
  int column = 1;
  bool balanced = true;
  bool terminated = true;
};

std::vector<RawStatement> splitStatements(std::string_view src, std::vector<ParseDiagnostic> &diags) {
  std::vector<RawStatement> out;
  int line = 1, column = 1;
  size_t i = 0;
  const size_t n = src.size();

  size_t start = std::string::npos;
  int startLine = 1, startColumn = 1;
  int depth = 0;
  bool sawNegative = false;

  auto advance = [&](size_t count = 1) {
    for (size_t k = 0; k < count && i < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };

  auto flush = [&](bool terminated) {
    RawStatement st;
    st.text = std::string(src.substr(start, i - start));
    st.line = startLine;
    st.column = startColumn;
    st.balanced = !sawNegative && depth == 0;
    st.terminated = terminated;
    out.push_back(std::move(st));
    start = std::string::npos;
    depth = 0;
    sawNegative = false;
  };

  while (i < n) {
    char c = src[i];
    if (c == '%') { // comment to end of line
      while (i < n && src[i] != '\n') advance();
      continue;
    }
    if (start == std::string::npos) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      start = i;
      startLine = line;
      startColumn = column;
    }
    if (c == '"') {
      advance();
      while (i < n && src[i] != '"') {
        if (src[i] == '\\') advance();
        advance();
      }
      if (i < n) advance(); // closing quote
      continue;
    }
    if (c == '(' || c == '{' || c == '[') {
      ++depth;
      advance();
      continue;
    }
    if (c == ')' || c == '}' || c == ']') {
      --depth;
      if (depth < 0) sawNegative = true;
      advance();
      continue;
    }
    if (c == '.') {
      if (i + 1 < n && src[i + 1] == '.') { // interval token
        advance(2);
        continue;
      }
      if (depth <= 0) {
        advance();
        flush(true);
        continue;
      }
    }
    advance();
  }

  if (start != std::string::npos) flush(false);

  for (auto it = out.begin(); it != out.end();) {
    if (!it->balanced) {
      diags.push_back({it->line, it->column, "unbalanced delimiters in statement; statement skipped",
                       ParseDiagnostic::Severity::Error});
      it = out.erase(it);
    } else if (!it->terminated) {
      diags.push_back({it->line, it->column, "statement without terminating '.'; statement skipped",
                       ParseDiagnostic::Severity::Error});
      it = out.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer for a single statement.

enum class Tok {
  Ident,
  Var,
  Int,
  Not,
  Count, // #count
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semicolon,
  Colon,
  Dot,
  If, // :-
  Lt,
  Le,
  Eq,
  Ne,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  End,
};

struct Token {
  Tok type;
  std::string text;
  long long value = 0;
};

bool isIdentStart(char c) { return std::islower(static_cast<unsigned char>(c)); }
bool isVarStart(char c) { return std::isupper(static_cast<unsigned char>(c)) || c == '_'; }
bool isNameChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Returns false when the statement uses lexemes outside the subset.
bool tokenize(std::string_view text, std::vector<Token> &out) {
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '%') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      Token t{Tok::Int, std::string(text.substr(i, j - i))};
      t.value = std::stoll(t.text);
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    if (isIdentStart(c) || isVarStart(c)) {
      size_t j = i;
      while (j < n && isNameChar(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      if (word == "not") {
        out.push_back({Tok::Not, word});
      } else if (isVarStart(c)) {
        out.push_back({Tok::Var, word});
      } else {
        out.push_back({Tok::Ident, word});
      }
      i = j;
      continue;
    }
    if (c == '#') {
      size_t j = i + 1;
      while (j < n && isNameChar(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      if (word != "#count") return false;
      out.push_back({Tok::Count, word});
      i = j;
      continue;
    }
    auto two = i + 1 < n ? text.substr(i, 2) : std::string_view();
    if (two == ":-") {
      out.push_back({Tok::If, ":-"});
      i += 2;
      continue;
    }
    if (two == "<=") {
      out.push_back({Tok::Le, "<="});
      i += 2;
      continue;
    }
    if (two == ">=") {
      out.push_back({Tok::Ge, ">="});
      i += 2;
      continue;
    }
    if (two == "!=") {
      out.push_back({Tok::Ne, "!="});
      i += 2;
      continue;
    }
    if (two == "==" || two == "..") return false;
    switch (c) {
      case '(': out.push_back({Tok::LParen, "("}); break;
      case ')': out.push_back({Tok::RParen, ")"}); break;
      case '{': out.push_back({Tok::LBrace, "{"}); break;
      case '}': out.push_back({Tok::RBrace, "}"}); break;
      case ',': out.push_back({Tok::Comma, ","}); break;
      case ';': out.push_back({Tok::Semicolon, ";"}); break;
      case ':': out.push_back({Tok::Colon, ":"}); break;
      case '.': out.push_back({Tok::Dot, "."}); break;
      case '<': out.push_back({Tok::Lt, "<"}); break;
      case '>': out.push_back({Tok::Gt, ">"}); break;
      case '=': out.push_back({Tok::Eq, "="}); break;
      case '+': out.push_back({Tok::Plus, "+"}); break;
      case '-': out.push_back({Tok::Minus, "-"}); break;
      case '*': out.push_back({Tok::Star, "*"}); break;
      default: return false;
    }
    ++i;
  }
  out.push_back({Tok::End, ""});
  return true;
}

// ---------------------------------------------------------------------------
// Recursive-descent statement parser. Throws StatementReject to fall back to
// raw passthrough.

struct StatementReject {
  std::string reason;
};

class StatementParser {
public:
  explicit StatementParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Rule parseStatement() {
    Rule rule;
    if (peek().type == Tok::If) {
      next();
      rule = Rule::constraint(parseBodyUntilDot());
    } else {
      Head head = parseHead();
      std::vector<Literal> body;
      if (peek().type == Tok::If) {
        next();
        body = parseBodyUntilDot();
      }
      rule = Rule::basic(std::move(head), std::move(body));
    }
    expect(Tok::Dot, "'.'");
    expect(Tok::End, "end of statement");
    return rule;
  }

private:
  const Token &peek(size_t ahead = 0) const {
    size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
  }
  const Token &next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  void expect(Tok type, const std::string &what) {
    if (peek().type != type) reject("expected " + what);
    next();
  }
  [[noreturn]] void reject(const std::string &why) const { throw StatementReject{why}; }

  static bool isCmp(Tok t) {
    return t == Tok::Lt || t == Tok::Le || t == Tok::Eq || t == Tok::Ne || t == Tok::Gt || t == Tok::Ge;
  }
  ComparisonOp cmpOp(Tok t) const {
    switch (t) {
      case Tok::Lt: return ComparisonOp::Less;
      case Tok::Le: return ComparisonOp::LessEqual;
      case Tok::Eq: return ComparisonOp::Equal;
      case Tok::Ne: return ComparisonOp::NotEqual;
      case Tok::Gt: return ComparisonOp::Greater;
      case Tok::Ge: return ComparisonOp::GreaterEqual;
      default: reject("expected comparison operator");
    }
  }

  Head parseHead() {
    if (peek().type == Tok::LBrace) {
      next();
      Atom a = parseAtom();
      expect(Tok::RBrace, "'}' (single-element choice)");
      return Head::choice({std::move(a)});
    }
    return Head::atom(parseAtom());
  }

  std::vector<Literal> parseBodyUntilDot() {
    std::vector<Literal> body;
    if (peek().type == Tok::Dot) return body; // empty body
    body.push_back(parseLiteral());
    while (peek().type == Tok::Comma) {
      next();
      body.push_back(parseLiteral());
    }
    return body;
  }

  Literal parseLiteral() {
    if (peek().type == Tok::Not) {
      next();
      if (auto agg = tryParseAggregate()) return Literal::aggregate(false, std::move(*agg));
      return Literal::plain(false, parseAtom());
    }
    if (auto agg = tryParseAggregate()) return Literal::aggregate(true, std::move(*agg));
    Term t = parseTerm();
    if (isCmp(peek().type)) {
      ComparisonOp op = cmpOp(next().type);
      Term rhs = parseTerm();
      return Literal::comparison(std::move(t), op, std::move(rhs));
    }
    return Literal::plain(true, toAtom(std::move(t)));
  }

  // Condition literals inside aggregate elements: plain atoms and
  // comparisons only.
  Literal parseConditionLiteral() {
    if (peek().type == Tok::Not) {
      next();
      return Literal::plain(false, parseAtom());
    }
    Term t = parseTerm();
    if (isCmp(peek().type)) {
      ComparisonOp op = cmpOp(next().type);
      Term rhs = parseTerm();
      return Literal::comparison(std::move(t), op, std::move(rhs));
    }
    return Literal::plain(true, toAtom(std::move(t)));
  }

  std::optional<CountAggregate> tryParseAggregate() {
    size_t save = pos_;
    try {
      return parseAggregate();
    } catch (const StatementReject &) {
      pos_ = save;
      return std::nullopt;
    }
  }

  CountAggregate parseAggregate() {
    CountAggregate agg;
    if (peek().type != Tok::Count) {
      Term bound = parseTerm();
      if (!isCmp(peek().type)) reject("expected guard comparison");
      ComparisonOp op = cmpOp(next().type);
      if (peek().type != Tok::Count) reject("expected #count");
      agg.lower = AggregateGuard{std::move(bound), op};
    }
    expect(Tok::Count, "#count");
    expect(Tok::LBrace, "'{'");
    agg.elements.push_back(parseElement());
    while (peek().type == Tok::Semicolon) {
      next();
      agg.elements.push_back(parseElement());
    }
    expect(Tok::RBrace, "'}'");
    if (isCmp(peek().type)) {
      ComparisonOp op = cmpOp(next().type);
      Term bound = parseTerm();
      agg.upper = AggregateGuard{std::move(bound), op};
    }
    return agg;
  }

  AggregateElement parseElement() {
    AggregateElement el;
    el.terms.push_back(parseTerm());
    while (peek().type == Tok::Comma) {
      next();
      el.terms.push_back(parseTerm());
    }
    expect(Tok::Colon, "':' in aggregate element");
    el.condition.push_back(parseConditionLiteral());
    while (peek().type == Tok::Comma) {
      next();
      el.condition.push_back(parseConditionLiteral());
    }
    return el;
  }

  Atom toAtom(Term t) {
    if (t.kind() == Term::Kind::Symbol) return Atom{t.name(), {}};
    if (t.kind() == Term::Kind::Function) return Atom{t.name(), t.args()};
    reject("expected an atom");
  }

  Atom parseAtom() { return toAtom(parseTerm()); }

  Term parseTerm() {
    Term t = parseMul();
    while (peek().type == Tok::Plus || peek().type == Tok::Minus) {
      ArithOp op = next().type == Tok::Plus ? ArithOp::Add : ArithOp::Sub;
      Term rhs = parseMul();
      t = Term::arithmetic(op, std::move(t), std::move(rhs));
    }
    return t;
  }

  Term parseMul() {
    Term t = parsePrimary();
    while (peek().type == Tok::Star) {
      next();
      Term rhs = parsePrimary();
      t = Term::arithmetic(ArithOp::Mul, std::move(t), std::move(rhs));
    }
    return t;
  }

  Term parsePrimary() {
    const Token &tok = peek();
    switch (tok.type) {
      case Tok::Int: {
        long long v = next().value;
        return Term::integer(v);
      }
      case Tok::Minus: {
        next();
        if (peek().type != Tok::Int) reject("expected integer after unary '-'");
        long long v = next().value;
        return Term::integer(-v);
      }
      case Tok::Var: {
        std::string name = next().text;
        return Term::variable(std::move(name));
      }
      case Tok::Ident: {
        std::string name = next().text;
        if (peek().type == Tok::LParen) {
          next();
          std::vector<Term> args;
          args.push_back(parseTerm());
          while (peek().type == Tok::Comma) {
            next();
            args.push_back(parseTerm());
          }
          expect(Tok::RParen, "')'");
          return Term::function(std::move(name), std::move(args));
        }
        return Term::symbol(std::move(name));
      }
      case Tok::LParen: {
        next();
        Term t = parseTerm();
        expect(Tok::RParen, "')'");
        return t;
      }
      default:
        reject("unexpected token '" + tok.text + "'");
    }
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

} // namespace

ParseResult parse(std::string_view source) {
  ParseResult result;
  std::vector<RawStatement> statements = splitStatements(source, result.diagnostics);
  for (RawStatement &st : statements) {
    std::vector<Token> tokens;
    if (tokenize(st.text, tokens)) {
      try {
        StatementParser parser(std::move(tokens));
        result.program.statements.push_back(parser.parseStatement());
        continue;
      } catch (const StatementReject &reject) {
        result.diagnostics.push_back({st.line, st.column,
                                      "statement outside supported subset, kept verbatim (" + reject.reason + ")",
                                      ParseDiagnostic::Severity::PassthroughNote});
      }
    } else {
      result.diagnostics.push_back({st.line, st.column, "statement outside supported subset, kept verbatim",
                                    ParseDiagnostic::Severity::PassthroughNote});
    }
    result.program.statements.push_back(Rule::passthrough(std::move(st.text)));
  }
  return result;
}

namespace {

int precedence(ArithOp op) { return op == ArithOp::Mul ? 2 : 1; }

void renderTerm(std::ostream &os, const Term &t) {
  switch (t.kind()) {
    case Term::Kind::Symbol:
    case Term::Kind::Variable:
      os << t.name();
      break;
    case Term::Kind::Integer:
      os << t.value();
      break;
    case Term::Kind::Function: {
      os << t.name() << '(';
      bool first = true;
      for (const Term &arg : t.args()) {
        if (!first) os << ',';
        first = false;
        renderTerm(os, arg);
      }
      os << ')';
      break;
    }
    case Term::Kind::Arithmetic: {
      int myPrec = precedence(t.arithOp());
      auto renderChild = [&](const Term &child, bool needParenOnEqual) {
        bool paren = child.kind() == Term::Kind::Arithmetic &&
                     (precedence(child.arithOp()) < myPrec ||
                      (needParenOnEqual && precedence(child.arithOp()) == myPrec));
        if (paren) os << '(';
        renderTerm(os, child);
        if (paren) os << ')';
      };
      renderChild(t.lhs(), false);
      os << arithOpChar(t.arithOp());
      renderChild(t.rhs(), true);
      break;
    }
  }
}

void renderAtom(std::ostream &os, const Atom &a) {
  os << a.predicate;
  if (!a.args.empty()) {
    os << '(';
    bool first = true;
    for (const Term &arg : a.args) {
      if (!first) os << ',';
      first = false;
      renderTerm(os, arg);
    }
    os << ')';
  }
}

void renderLiteral(std::ostream &os, const Literal &lit) {
  switch (lit.kind()) {
    case Literal::Kind::Plain:
      if (!lit.positive()) os << "not ";
      renderAtom(os, lit.atom());
      break;
    case Literal::Kind::Comparison:
      renderTerm(os, lit.lhs());
      os << ' ' << comparisonOpText(lit.comparisonOp()) << ' ';
      renderTerm(os, lit.rhs());
      break;
    case Literal::Kind::Aggregate: {
      if (!lit.positive()) os << "not ";
      const CountAggregate &agg = lit.aggregate();
      if (agg.lower) {
        renderTerm(os, agg.lower->bound);
        os << ' ' << comparisonOpText(agg.lower->op) << ' ';
      }
      os << "#count{ ";
      bool firstEl = true;
      for (const AggregateElement &el : agg.elements) {
        if (!firstEl) os << "; ";
        firstEl = false;
        bool first = true;
        for (const Term &t : el.terms) {
          if (!first) os << ", ";
          first = false;
          renderTerm(os, t);
        }
        os << " : ";
        first = true;
        for (const Literal &c : el.condition) {
          if (!first) os << ", ";
          first = false;
          renderLiteral(os, c);
        }
      }
      os << " }";
      if (agg.upper) {
        os << ' ' << comparisonOpText(agg.upper->op) << ' ';
        renderTerm(os, agg.upper->bound);
      }
      break;
    }
  }
}

void renderRule(std::ostream &os, const Rule &rule) {
  if (rule.isRaw()) {
    os << *rule.raw;
    return;
  }
  if (rule.head) {
    if (rule.head->kind == Head::Kind::Choice) {
      os << "{ ";
      bool first = true;
      for (const Atom &a : rule.head->atoms) {
        if (!first) os << "; ";
        first = false;
        renderAtom(os, a);
      }
      os << " }";
    } else {
      renderAtom(os, rule.head->atoms.front());
    }
    if (!rule.body.empty()) os << " :-";
  } else {
    os << ":-";
  }
  bool first = true;
  for (const Literal &lit : rule.body) {
    os << (first ? " " : ", ");
    first = false;
    renderLiteral(os, lit);
  }
  os << '.';
}

} // namespace

std::string render(const Term &term) {
  std::ostringstream os;
  renderTerm(os, term);
  return os.str();
}

std::string render(const Atom &atom) {
  std::ostringstream os;
  renderAtom(os, atom);
  return os.str();
}

std::string render(const Literal &literal) {
  std::ostringstream os;
  renderLiteral(os, literal);
  return os.str();
}

std::string render(const Rule &rule) {
  std::ostringstream os;
  renderRule(os, rule);
  return os.str();
}

std::string render(const Program &program) {
  std::ostringstream os;
  for (const Rule &rule : program.statements) {
    renderRule(os, rule);
    os << '\n';
  }
  return os.str();
}

} // namespace aagg
