#pragma once

// Operator expression text.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | atom ('^' nat)?
//   atom   := literal | 'i' | 'x'k | 'd'k | builtin | '(' expr ')'
//
// Builtins: euler(a), box(m2), casimir, L(mu,nu), parity, reflect([[..],..]).
// Coordinates and partials are 1-based (x1..xn, d1..dn); Lorentz indices in
// L(mu,nu) are 0-based and mu refers to x_{mu+1}. '*' is never implied.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "onshell/error.hpp"
#include "onshell/opalg.hpp"

namespace onshell {

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message);
  [[nodiscard]] SourceSpan span() const { return span_; }
  [[nodiscard]] const std::string& detail() const { return detail_; }
  /// Message, the source line and a caret underline.
  [[nodiscard]] std::string render(std::string_view text) const;

 private:
  SourceSpan span_;
  std::string detail_;
};

OperatorExpr parse_operator(std::string_view text, std::size_t n, const Metric& g);
OperatorExpr parse_operator(std::string_view text, std::size_t n);

/// Text that parses back to the same operator.
std::string print_operator(const OperatorExpr& q);

/// The scalar c if q = c * identity.
std::optional<Scalar> as_constant(const OperatorExpr& q);

}  // namespace onshell
