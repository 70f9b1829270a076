#include "onshell/syntax.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace onshell {

ParseError::ParseError(SourceSpan span, const std::string& message)
    : Error(ErrorCode::kParse, "col " + std::to_string(span.begin + 1) + ": " + message), span_(span), detail_(message) {}

std::string ParseError::render(std::string_view text) const {
  std::string out = what();
  out += "\n  " + std::string(text) + "\n  ";
  out += std::string(span_.begin, ' ');
  out += std::string(std::max<std::size_t>(1, span_.end - span_.begin), '^');
  return out;
}

namespace {

enum class Tok { kNumber, kIdent, kPlus, kMinus, kStar, kCaret, kLParen, kRParen, kComma, kLBracket, kRBracket, kEnd };

struct Token {
  Tok kind;
  SourceSpan span;
  std::string text;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      // p/q is one literal only when the slash is followed by digits
      if (i + 1 < s.size() && s[i] == '/' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      out.push_back({Tok::kNumber, {start, i}, std::string(s.substr(start, i - start))});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::kIdent, {start, i}, std::string(s.substr(start, i - start))});
      continue;
    }
    Tok k;
    switch (ch) {
      case '+': k = Tok::kPlus; break;
      case '-': k = Tok::kMinus; break;
      case '*': k = Tok::kStar; break;
      case '^': k = Tok::kCaret; break;
      case '(': k = Tok::kLParen; break;
      case ')': k = Tok::kRParen; break;
      case ',': k = Tok::kComma; break;
      case '[': k = Tok::kLBracket; break;
      case ']': k = Tok::kRBracket; break;
      default:
        throw ParseError({start, start + 1}, std::string("unexpected character '") + ch + "'");
    }
    ++i;
    out.push_back({k, {start, i}, std::string(1, ch)});
  }
  out.push_back({Tok::kEnd, {s.size(), s.size()}, ""});
  return out;
}

const char* describe(Tok k) {
  switch (k) {
    case Tok::kNumber: return "number";
    case Tok::kIdent: return "identifier";
    case Tok::kPlus: return "'+'";
    case Tok::kMinus: return "'-'";
    case Tok::kStar: return "'*'";
    case Tok::kCaret: return "'^'";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kComma: return "','";
    case Tok::kLBracket: return "'['";
    case Tok::kRBracket: return "']'";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t n, const Metric& g) : toks_(lex(text)), n_(n), g_(g) {
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 1");
    if (g.dim() != n) throw Error(ErrorCode::kDimensionMismatch, "metric dimension does not match --dim");
  }

  OperatorExpr parse_all() {
    OperatorExpr e = expr();
    if (peek().kind != Tok::kEnd) {
      if (starts_atom(peek().kind))
        throw ParseError(peek().span, "missing '*' before " + quote(peek()) + " (juxtaposition is not multiplication)");
      throw ParseError(peek().span, "unexpected " + quote(peek()));
    }
    return e;
  }

 private:
  static bool starts_atom(Tok k) { return k == Tok::kNumber || k == Tok::kIdent || k == Tok::kLParen; }
  static std::string quote(const Token& t) {
    return t.kind == Tok::kEnd ? "end of input" : std::string(describe(t.kind)) + " '" + t.text + "'";
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) throw ParseError(peek().span, std::string("expected ") + what + ", found " + quote(peek()));
    return next();
  }

  OperatorExpr expr() {
    OperatorExpr acc = term();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      bool minus = next().kind == Tok::kMinus;
      OperatorExpr rhs = term();
      if (minus) {
        acc -= rhs;
      } else {
        acc += rhs;
      }
    }
    return acc;
  }

  OperatorExpr term() {
    OperatorExpr acc = factor();
    while (true) {
      if (peek().kind == Tok::kStar) {
        next();
        acc = acc * factor();
      } else if (starts_atom(peek().kind)) {
        throw ParseError(peek().span, "missing '*' before " + quote(peek()) + " (juxtaposition is not multiplication)");
      } else {
        return acc;
      }
    }
  }

  OperatorExpr factor() {
    if (peek().kind == Tok::kMinus) {
      next();
      return -factor();
    }
    OperatorExpr base = atom();
    if (peek().kind == Tok::kCaret) {
      next();
      const Token& e = expect(Tok::kNumber, "a non-negative integer exponent");
      if (e.text.find('/') != std::string::npos) throw ParseError(e.span, "exponent must be a non-negative integer");
      if (e.text.size() > 3) throw ParseError(e.span, "exponent too large");
      base = power(base, std::stoi(e.text));
      if (peek().kind == Tok::kCaret) throw ParseError(peek().span, "exponent on non-atom (use parentheses)");
    }
    return base;
  }

  std::size_t coordinate_index(const Token& t) {
    std::string digits = t.text.substr(1);
    if (digits.empty() || digits.size() > 6) throw ParseError(t.span, "unknown identifier '" + t.text + "'");
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError(t.span, "unknown identifier '" + t.text + "'");
    std::size_t k = std::stoul(digits);
    if (k < 1 || k > n_)
      throw ParseError(t.span, "'" + t.text + "' out of range: indices run from 1 to " + std::to_string(n_));
    return k - 1;
  }

  static bool indexed(const std::string& s, char head) {
    return s.size() > 1 && s[0] == head && std::isdigit(static_cast<unsigned char>(s[1]));
  }

  Scalar constant_arg(const char* what) {
    std::size_t start = peek().span.begin;
    OperatorExpr e = expr();
    auto c = as_constant(e);
    if (!c) throw ParseError({start, peek().span.begin}, std::string(what) + " must be a constant");
    return *c;
  }

  std::size_t index_arg() {
    bool neg = false;
    if (peek().kind == Tok::kMinus) {
      neg = true;
      next();
    }
    const Token& t = expect(Tok::kNumber, "a Lorentz index");
    if (neg || t.text.find('/') != std::string::npos || t.text.size() > 6 || std::stoul(t.text) >= n_)
      throw ParseError(t.span, "Lorentz index must be an integer in 0.." + std::to_string(n_ - 1));
    return std::stoul(t.text);
  }

  Rational matrix_entry() {
    bool neg = false;
    if (peek().kind == Tok::kMinus) {
      neg = true;
      next();
    }
    const Token& t = expect(Tok::kNumber, "a rational matrix entry");
    Rational v = parse_rational(t.text);
    return neg ? Rational(-v) : v;
  }

  OperatorExpr reflect_matrix(const Token& head) {
    expect(Tok::kLParen, "'(' after reflect");
    std::size_t start = peek().span.begin;
    expect(Tok::kLBracket, "'[' opening the matrix");
    std::vector<std::vector<Rational>> rows;
    do {
      expect(Tok::kLBracket, "'[' opening a row");
      std::vector<Rational> row{matrix_entry()};
      while (peek().kind == Tok::kComma) {
        next();
        row.push_back(matrix_entry());
      }
      expect(Tok::kRBracket, "']' closing a row");
      rows.push_back(std::move(row));
      if (peek().kind != Tok::kComma) break;
      next();
    } while (true);
    expect(Tok::kRBracket, "']' closing the matrix");
    SourceSpan span{start, peek().span.begin};
    expect(Tok::kRParen, "')'");
    if (rows.size() != n_) throw ParseError(span, "reflect needs an " + std::to_string(n_) + "x" + std::to_string(n_) + " matrix");
    std::vector<Rational> flat;
    for (auto& r : rows) {
      if (r.size() != n_) throw ParseError(span, "reflect needs an " + std::to_string(n_) + "x" + std::to_string(n_) + " matrix");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    LinearMap L(n_, std::move(flat));
    if (sgn(L.det()) == 0) throw ParseError({head.span.begin, span.end}, "reflect matrix is singular");
    return reflection(L);
  }

  OperatorExpr atom() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::kNumber:
        return OperatorExpr::scalar(n_, Scalar(parse_rational(t.text)));
      case Tok::kLParen: {
        OperatorExpr e = expr();
        expect(Tok::kRParen, "')'");
        return e;
      }
      case Tok::kIdent:
        return identifier(t);
      default:
        throw ParseError(t.span, "expected an operand, found " + quote(t));
    }
  }

  OperatorExpr identifier(const Token& t) {
    const std::string& s = t.text;
    if (s == "i") return OperatorExpr::scalar(n_, Scalar::imaginary_unit());
    if (indexed(s, 'x')) return OperatorExpr::multiplication(coordinate(n_, coordinate_index(t)));
    if (indexed(s, 'd')) return OperatorExpr::derivative(MultiIndex::unit(n_, coordinate_index(t)));
    if (s == "casimir") return casimir(n_, g_);
    if (s == "parity") return parity(n_);
    if (s == "euler") {
      expect(Tok::kLParen, "'(' after euler");
      Scalar a = constant_arg("the euler parameter");
      expect(Tok::kRParen, "')'");
      return euler(n_, a);
    }
    if (s == "box") {
      expect(Tok::kLParen, "'(' after box");
      std::size_t start = peek().span.begin;
      Scalar m2 = constant_arg("the mass parameter");
      if (!m2.is_real()) throw ParseError({start, peek().span.begin}, "box(m2) needs a real m2");
      expect(Tok::kRParen, "')'");
      return dalembert(n_, m2.re(), g_);
    }
    if (s == "L") {
      expect(Tok::kLParen, "'(' after L");
      std::size_t mu = index_arg();
      expect(Tok::kComma, "',' between Lorentz indices");
      std::size_t nu = index_arg();
      expect(Tok::kRParen, "')'");
      return lorentz_generator(n_, mu, nu, g_);
    }
    if (s == "reflect") return reflect_matrix(t);
    throw ParseError(t.span, "unknown identifier '" + s + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t n_;
  Metric g_;
};

std::string power_word(const std::string& base, int k) {
  return k == 1 ? base : base + "^" + std::to_string(k);
}

std::string rational_text(const Rational& q) { return to_string(q); }

std::string pullback_word(const LinearMap& L) {
  if (L == LinearMap::scaled_identity(L.dim(), Rational(-1))) return "parity";
  std::string out = "reflect([";
  for (std::size_t i = 0; i < L.dim(); ++i) {
    if (i) out += ",";
    out += "[";
    for (std::size_t j = 0; j < L.dim(); ++j) {
      if (j) out += ",";
      out += rational_text(L.at(i, j));
    }
    out += "]";
  }
  return out + "])";
}

}  // namespace

OperatorExpr parse_operator(std::string_view text, std::size_t n, const Metric& g) {
  return Parser(text, n, g).parse_all();
}

OperatorExpr parse_operator(std::string_view text, std::size_t n) {
  return parse_operator(text, n, Metric::minkowski(n));
}

std::optional<Scalar> as_constant(const OperatorExpr& q) {
  if (q.is_zero()) return Scalar(0);
  if (q.terms().size() != 1) return std::nullopt;
  const auto& [k, a] = *q.terms().begin();
  if (!k.pullback.is_identity() || k.derivative.order() != 0) return std::nullopt;
  if (a.terms().size() != 1 || a.terms().begin()->first.order() != 0) return std::nullopt;
  return a.terms().begin()->second;
}

std::string print_operator(const OperatorExpr& q) {
  if (q.is_zero()) return "0";
  std::string out;
  for (const auto& [k, a] : q.terms()) {
    std::string tail;
    for (std::size_t i = 0; i < k.derivative.dim(); ++i)
      if (k.derivative[i]) tail += (tail.empty() ? "" : "*") + power_word("d" + std::to_string(i + 1), k.derivative[i]);
    if (!k.pullback.is_identity()) tail += (tail.empty() ? "" : "*") + pullback_word(k.pullback);
    for (const auto& [beta, c] : a.terms()) {
      std::string body;
      for (std::size_t i = 0; i < beta.dim(); ++i)
        if (beta[i]) body += (body.empty() ? "" : "*") + power_word("x" + std::to_string(i + 1), beta[i]);
      if (!tail.empty()) body += (body.empty() ? "" : "*") + tail;
      bool negative = c.is_real() && sgn(c.re()) < 0;
      Scalar mag = negative ? -c : c;
      std::string num = mag.is_real() ? mag.str() : "(" + mag.str() + ")";
      std::string term = body.empty() ? num : (mag == Scalar(1) ? body : num + "*" + body);
      if (out.empty()) {
        out = negative ? "-" + term : term;
      } else {
        out += negative ? " - " : " + ";
        out += term;
      }
    }
  }
  return out;
}

}  // namespace onshell
