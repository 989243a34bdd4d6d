#ifndef AAGG_PARSER_HPP
#define AAGG_PARSER_HPP

#include <aagg/ast.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace aagg {

struct ParseDiagnostic {
  enum class Severity { Error, PassthroughNote };

  int line = 1;   // 1-based
  int column = 1; // 1-based
  std::string message;
  Severity severity = Severity::Error;
};

struct ParseResult {
  Program program;
  std::vector<ParseDiagnostic> diagnostics;

  bool hasErrors() const;
};

/// Parse gringo-style program text. Statements are terminated by `.`;
/// `%` starts a line comment. Statements outside the supported subset are
/// kept verbatim as raw passthrough rules (with a note); statements with
/// unbalanced delimiters or a missing terminating `.` produce an error
/// diagnostic and are skipped.
ParseResult parse(std::string_view source);

/// Deterministic canonical rendering. Raw statements are reproduced
/// byte-identically; `parse(render(p))` is structurally equal to `p`.
std::string render(const Program &program);
std::string render(const Rule &rule);
std::string render(const Literal &literal);
std::string render(const Term &term);
std::string render(const Atom &atom);

} // namespace aagg

#endif
