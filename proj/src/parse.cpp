#include "qcalc/parse.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <variant>

#include "qcalc/error.hpp"

namespace qcalc {

std::vector<std::string> default_var_names(int nvars) {
  std::vector<std::string> names;
  for (int i = 0; i < nvars; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

namespace {

struct Token {
  enum Kind { number, ident, op, end } kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    // U+2212 MINUS SIGN
    if (c == 0xE2 && s.substr(i, 3) == "\xE2\x88\x92") {
      out.push_back({Token::op, "-", i});
      i += 3;
      continue;
    }
    if (std::isdigit(c) || c == '.') {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          j = k;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
      }
      out.push_back({Token::number, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      out.push_back({Token::ident, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (std::string_view("+-*/^(),").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Token::op, std::string(1, static_cast<char>(c)), i});
      ++i;
      continue;
    }
    throw ParseError("unexpected character '" + std::string(1, static_cast<char>(c)) +
                     "' at offset " + std::to_string(i));
  }
  out.push_back({Token::end, "", s.size()});
  return out;
}

// Exact decimal reading: "1.25" -> 5/4, "2e-3" -> 1/500.
Rational exact_number(const std::string& text) {
  std::string mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mant = text.substr(0, e);
    exp10 = std::stol(text.substr(e + 1));
  }
  std::string digits;
  bool seen_dot = false;
  for (char ch : mant) {
    if (ch == '.') {
      if (seen_dot) throw ParseError("malformed number '" + text + "'");
      seen_dot = true;
      continue;
    }
    digits += ch;
    if (seen_dot) --exp10;
  }
  if (digits.empty()) throw ParseError("malformed number '" + text + "'");
  Rational r{mpz_class(digits, 10)};
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  if (exp10 >= 0) {
    r *= scale;
  } else {
    r /= scale;
  }
  r.canonicalize();
  return r;
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text), toks_(tokenize(text)) {}

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool accept(const char* op) {
    if (peek().kind == Token::op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const char* op) {
    if (!accept(op)) fail(std::string("expected '") + op + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(peek().pos) + " in \"" +
                     std::string(text_) + "\"");
  }

 private:
  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class ExactParser {
 public:
  ExactParser(std::string_view text, int N, int nvars, std::vector<std::string> names)
      : cur_(text), N_(N), nvars_(nvars), names_(std::move(names)) {
    if (N < 2) throw InvalidArgument("N must be >= 2");
    if (names_.empty()) names_ = default_var_names(nvars);
    if (static_cast<int>(names_.size()) != nvars) throw MismatchedArity("variable name count");
  }

  CoeffPoly run() {
    CoeffPoly p = expr();
    if (cur_.peek().kind != Token::end) cur_.fail("unexpected '" + cur_.peek().text + "'");
    return p;
  }

 private:
  Cursor cur_;
  int N_;
  int nvars_;
  std::vector<std::string> names_;

  CoeffPoly constant(const CycScalar& c) const { return CoeffPoly::constant(nvars_, c); }

  CoeffPoly expr() {
    CoeffPoly acc = term();
    for (;;) {
      if (cur_.accept("+")) {
        acc += term();
      } else if (cur_.accept("-")) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  CoeffPoly term() {
    CoeffPoly acc = unary();
    for (;;) {
      if (cur_.accept("*")) {
        acc = acc * unary();
      } else if (cur_.accept("/")) {
        CoeffPoly den = unary();
        if (!den.is_constant()) cur_.fail("division by a non-constant");
        if (den.is_zero()) throw DivisionByZero("division by zero in expression");
        acc *= den.constant_term().inverse();
      } else {
        return acc;
      }
    }
  }

  CoeffPoly unary() {
    if (cur_.accept("-")) return -unary();
    if (cur_.accept("+")) return unary();
    return power();
  }

  CoeffPoly power() {
    CoeffPoly base = atom();
    if (!cur_.accept("^")) return base;
    bool negative = false;
    if (cur_.accept("-")) negative = true;
    Token t = cur_.next();
    if (t.kind != Token::number || t.text.find_first_not_of("0123456789") != std::string::npos)
      cur_.fail("exponent must be an integer literal");
    const long e = std::stol(t.text);
    if (!negative) return base.pow(static_cast<int>(e));
    if (!base.is_constant() || base.is_zero()) cur_.fail("negative exponent on a non-unit");
    return constant(base.constant_term().pow(-e));
  }

  CoeffPoly atom() {
    Token t = cur_.next();
    switch (t.kind) {
      case Token::number:
        return constant(CycScalar(exact_number(t.text)));
      case Token::ident: {
        if (t.text == "q") return constant(CycScalar::q_power(N_, 1));
        if (t.text == "z") return constant(CycScalar::zeta_power(CycField::for_root(N_), 1));
        for (int i = 0; i < nvars_; ++i)
          if (names_[i] == t.text) return CoeffPoly::variable(nvars_, i);
        throw ParseError("unknown identifier '" + t.text + "'");
      }
      case Token::op:
        if (t.text == "(") {
          CoeffPoly inner = expr();
          cur_.expect(")");
          return inner;
        }
        break;
      case Token::end:
        break;
    }
    throw ParseError("unexpected '" + t.text + "' at offset " + std::to_string(t.pos));
  }
};

}  // namespace

CoeffPoly parse_poly(std::string_view text, int N, int nvars, const std::vector<std::string>& names) {
  return ExactParser(text, N, nvars, names).run();
}

CycScalar parse_scalar(std::string_view text, int N) {
  CoeffPoly p = ExactParser(text, N, 0, {}).run();
  return p.constant_term();
}

// ---------------------------------------------------------------------------
// Numeric expressions

struct NumExpr::Node {
  enum Kind { constant, variable, neg, add, sub, mul, div, pow, call } kind;
  double value = 0.0;
  int var = 0;
  std::string fn;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const NumExpr::Node>;

NodePtr make(NumExpr::Node n) { return std::make_shared<const NumExpr::Node>(std::move(n)); }

class NumParser {
 public:
  NumParser(std::string_view text, const std::vector<std::string>& vars) : cur_(text), vars_(vars) {}

  NodePtr run() {
    NodePtr n = expr();
    if (cur_.peek().kind != Token::end) cur_.fail("unexpected '" + cur_.peek().text + "'");
    return n;
  }

 private:
  Cursor cur_;
  const std::vector<std::string>& vars_;

  using Node = NumExpr::Node;

  NodePtr expr() {
    NodePtr acc = term();
    for (;;) {
      if (cur_.accept("+")) {
        acc = make({Node::add, 0, 0, {}, acc, term()});
      } else if (cur_.accept("-")) {
        acc = make({Node::sub, 0, 0, {}, acc, term()});
      } else {
        return acc;
      }
    }
  }

  NodePtr term() {
    NodePtr acc = unary();
    for (;;) {
      if (cur_.accept("*")) {
        acc = make({Node::mul, 0, 0, {}, acc, unary()});
      } else if (cur_.accept("/")) {
        acc = make({Node::div, 0, 0, {}, acc, unary()});
      } else {
        return acc;
      }
    }
  }

  NodePtr unary() {
    if (cur_.accept("-")) return make({Node::neg, 0, 0, {}, unary(), nullptr});
    if (cur_.accept("+")) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!cur_.accept("^")) return base;
    return make({Node::pow, 0, 0, {}, base, unary()});
  }

  NodePtr atom() {
    Token t = cur_.next();
    if (t.kind == Token::number) return make({Node::constant, exact_number(t.text).get_d(), 0, {}, nullptr, nullptr});
    if (t.kind == Token::ident) {
      if (t.text == "pi") return make({Node::constant, std::numbers::pi, 0, {}, nullptr, nullptr});
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == t.text) return make({Node::variable, 0, static_cast<int>(i), {}, nullptr, nullptr});
      static const char* fns[] = {"sin", "cos", "tan", "exp", "log", "sqrt"};
      for (const char* f : fns) {
        if (t.text == f) {
          cur_.expect("(");
          NodePtr arg = expr();
          cur_.expect(")");
          return make({Node::call, 0, 0, t.text, arg, nullptr});
        }
      }
      throw ParseError("unknown identifier '" + t.text + "'");
    }
    if (t.kind == Token::op && t.text == "(") {
      NodePtr inner = expr();
      cur_.expect(")");
      return inner;
    }
    throw ParseError("unexpected '" + t.text + "' at offset " + std::to_string(t.pos));
  }
};

Dual eval(const NumExpr::Node& n, std::span<const double> args, int wrt) {
  using Node = NumExpr::Node;
  switch (n.kind) {
    case Node::constant:
      return {n.value, 0.0};
    case Node::variable:
      if (n.var >= static_cast<int>(args.size())) throw MismatchedArity("numeric expression arguments");
      return {args[n.var], n.var == wrt ? 1.0 : 0.0};
    case Node::neg: {
      Dual x = eval(*n.a, args, wrt);
      return {-x.v, -x.d};
    }
    case Node::add: {
      Dual x = eval(*n.a, args, wrt), y = eval(*n.b, args, wrt);
      return {x.v + y.v, x.d + y.d};
    }
    case Node::sub: {
      Dual x = eval(*n.a, args, wrt), y = eval(*n.b, args, wrt);
      return {x.v - y.v, x.d - y.d};
    }
    case Node::mul: {
      Dual x = eval(*n.a, args, wrt), y = eval(*n.b, args, wrt);
      return {x.v * y.v, x.d * y.v + x.v * y.d};
    }
    case Node::div: {
      Dual x = eval(*n.a, args, wrt), y = eval(*n.b, args, wrt);
      return {x.v / y.v, (x.d * y.v - x.v * y.d) / (y.v * y.v)};
    }
    case Node::pow: {
      Dual x = eval(*n.a, args, wrt), y = eval(*n.b, args, wrt);
      const double v = std::pow(x.v, y.v);
      double d = 0.0;
      if (x.d != 0.0) d += y.v * std::pow(x.v, y.v - 1.0) * x.d;
      if (y.d != 0.0) d += v * std::log(x.v) * y.d;
      return {v, d};
    }
    case Node::call: {
      Dual x = eval(*n.a, args, wrt);
      if (n.fn == "sin") return {std::sin(x.v), std::cos(x.v) * x.d};
      if (n.fn == "cos") return {std::cos(x.v), -std::sin(x.v) * x.d};
      if (n.fn == "tan") {
        const double c = std::cos(x.v);
        return {std::tan(x.v), x.d / (c * c)};
      }
      if (n.fn == "exp") {
        const double e = std::exp(x.v);
        return {e, e * x.d};
      }
      if (n.fn == "log") return {std::log(x.v), x.d / x.v};
      const double s = std::sqrt(x.v);
      return {s, x.d / (2.0 * s)};
    }
  }
  return {};
}

}  // namespace

NumExpr NumExpr::parse(std::string_view text, const std::vector<std::string>& vars) {
  NumExpr e;
  e.root_ = NumParser(text, vars).run();
  return e;
}

double NumExpr::eval(std::span<const double> args) const { return qcalc::eval(*root_, args, -1).v; }

Dual NumExpr::eval_dual(std::span<const double> args, int wrt) const {
  return qcalc::eval(*root_, args, wrt);
}

}  // namespace qcalc
