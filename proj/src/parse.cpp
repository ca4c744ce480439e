#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "nflab/error.hpp"
#include "nflab/expr.hpp"

namespace nflab {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_ws();
    if (at_end()) fail("empty expression");
    Expr e = additive();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  Expr additive() {
    Expr lhs = multiplicative();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = Expr::add(lhs, multiplicative());
      } else if (accept('-')) {
        lhs = Expr::sub(lhs, multiplicative());
      } else {
        return lhs;
      }
    }
  }

  Expr multiplicative() {
    Expr lhs = unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = Expr::mul(lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::div(lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    skip_ws();
    if (accept('-')) return Expr::neg(unary());
    return power();
  }

  Expr power() {
    Expr base = atom();
    skip_ws();
    if (!accept('^')) return base;
    skip_ws();
    const bool paren = accept('(');
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    skip_ws();
    const std::size_t digits_start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits_start) fail("exponent must be an integer literal", start);
    if (!at_end() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
      fail("exponent must be an integer literal", start);
    long long k = 0;
    const auto [ptr, ec] =
        std::from_chars(text_.data() + digits_start, text_.data() + pos_, k);
    if (ec != std::errc() || k > kMaxExponent)
      throw Error(ErrorKind::ExponentRange, "exponent out of range [-64, 64]", start);
    if (paren) {
      skip_ws();
      expect(')');
    }
    return Expr::pow(base, static_cast<int>(negative ? -k : k));
  }

  Expr atom() {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      Expr inner = additive();
      skip_ws();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (!at_end() && text_[pos_] == '.') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (!at_end() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(v))
      fail("malformed number", start);
    return Expr::constant(SpherePoint(v));
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "z") return Expr::var_z();
    if (name == "n") return Expr::param_n();
    if (name == "i") return Expr::imag_unit();
    if (name == "inf") return Expr::infinity();
    if (name == "sqrt") {
      skip_ws();
      expect('(');
      skip_ws();
      const std::size_t arg = pos_;
      if (!accept('n') || (!at_end() && std::isalnum(static_cast<unsigned char>(text_[pos_]))))
        fail("sqrt only accepts the family parameter n", arg);
      skip_ws();
      expect(')');
      return Expr::param_sqrt_n();
    }
    if (name == "exp" || name == "re" || name == "im" || name == "conj") {
      skip_ws();
      expect('(');
      Expr inner = additive();
      skip_ws();
      expect(')');
      if (name == "exp") return Expr::exp(inner);
      if (name == "re") return Expr::re(inner);
      if (name == "im") return Expr::im(inner);
      return Expr::conj(inner);
    }
    throw Error(ErrorKind::UnknownIdentifier,
                "unknown identifier '" + std::string(name) + "' at offset " + std::to_string(start),
                start);
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  bool accept(char c) {
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& msg) { fail(msg, pos_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw Error(ErrorKind::Syntax, msg + " at offset " + std::to_string(at), at);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer; larger binds tighter.
enum Prec { kAdditive = 1, kMultiplicative = 2, kUnary = 3, kPower = 4, kAtom = 5 };

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct Printed {
  std::string text;
  int prec;
};

Printed print_const(const SpherePoint& v) {
  if (v.is_infinite()) return {"inf", kAtom};
  const Complex c = v.value();
  if (c.imag() == 0.0) {
    if (std::signbit(c.real())) return {"-" + format_real(-c.real()), kUnary};
    return {format_real(c.real()), kAtom};
  }
  std::string im = format_real(std::abs(c.imag())) + "*i";
  if (c.real() == 0.0) return {std::signbit(c.imag()) ? "(-" + im + ")" : "(" + im + ")", kAtom};
  return {"(" + format_real(c.real()) + (std::signbit(c.imag()) ? "-" : "+") + im + ")", kAtom};
}

Printed print_node(const Expr& e) {
  auto wrap = [](const Printed& p, bool parens) {
    return parens ? "(" + p.text + ")" : p.text;
  };
  auto func = [](const char* name, const Expr& arg) {
    return Printed{std::string(name) + "(" + print_node(arg).text + ")", kAtom};
  };
  switch (e.op()) {
    case Op::Const: return print_const(e.value());
    case Op::VarZ: return {"z", kAtom};
    case Op::ParamN: return {"n", kAtom};
    case Op::ParamSqrtN: return {"sqrt(n)", kAtom};
    case Op::I: return {"i", kAtom};
    case Op::Exp: return func("exp", e.lhs());
    case Op::Re: return func("re", e.lhs());
    case Op::Im: return func("im", e.lhs());
    case Op::Conj: return func("conj", e.lhs());
    case Op::Neg: {
      const Printed a = print_node(e.lhs());
      return {"-" + wrap(a, a.prec < kUnary), kUnary};
    }
    case Op::PowInt: {
      const Printed a = print_node(e.lhs());
      return {wrap(a, a.prec < kAtom) + "^" + std::to_string(e.exponent()), kPower};
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const bool additive = e.op() == Op::Add || e.op() == Op::Sub;
      const int prec = additive ? kAdditive : kMultiplicative;
      const char* sym = e.op() == Op::Add ? "+" : e.op() == Op::Sub ? "-" : e.op() == Op::Mul ? "*" : "/";
      const Printed a = print_node(e.lhs());
      const Printed b = print_node(e.rhs());
      return {wrap(a, a.prec < prec) + sym + wrap(b, b.prec <= prec), prec};
    }
  }
  return {"?", kAtom};
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Expr& e) { return print_node(e).text; }

}  // namespace nflab
