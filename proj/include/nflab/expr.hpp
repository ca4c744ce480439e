#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "nflab/sphere.hpp"

namespace nflab {

enum class Op {
  Const,
  VarZ,
  ParamN,
  ParamSqrtN,
  I,
  Add,
  Sub,
  Neg,
  Mul,
  Div,
  PowInt,
  Exp,
  Re,
  Im,
  Conj,
};

inline constexpr int kMaxExponent = 64;

struct Node;

/// Immutable expression tree for a function of z with an integer family
/// parameter n. Copies share structure.
class Expr {
 public:
  Expr() = default;  // the constant 0

  static Expr constant(SpherePoint value);
  static Expr var_z();
  static Expr param_n();
  static Expr param_sqrt_n();
  static Expr imag_unit();
  static Expr infinity() { return constant(SpherePoint::infinity()); }

  static Expr add(Expr a, Expr b);
  static Expr sub(Expr a, Expr b);
  static Expr neg(Expr a);
  static Expr mul(Expr a, Expr b);
  static Expr div(Expr a, Expr b);
  static Expr pow(Expr base, int exponent);  // |exponent| <= kMaxExponent
  static Expr exp(Expr a);
  static Expr re(Expr a);
  static Expr im(Expr a);
  static Expr conj(Expr a);

  Op op() const;
  const SpherePoint& value() const;  // Const only
  int exponent() const;              // PowInt only
  const Expr& lhs() const;           // unary and binary nodes
  const Expr& rhs() const;           // binary nodes

  /// False iff the tree contains re, im or conj.
  bool holomorphic() const;
  bool is_constant(const SpherePoint& v) const;
  bool is_infinity_constant() const;
  std::size_t size() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend Expr operator+(Expr a, Expr b) { return add(std::move(a), std::move(b)); }
  friend Expr operator-(Expr a, Expr b) { return sub(std::move(a), std::move(b)); }
  friend Expr operator*(Expr a, Expr b) { return mul(std::move(a), std::move(b)); }
  friend Expr operator/(Expr a, Expr b) { return div(std::move(a), std::move(b)); }
  Expr operator-() const { return neg(*this); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Node node);
  const Node& node() const;

  std::shared_ptr<const Node> node_;  // null means the constant 0
};

struct Node {
  Op op = Op::Const;
  SpherePoint value;
  int exponent = 0;
  Expr lhs;
  Expr rhs;
  bool holomorphic = true;
  std::size_t size = 1;
};

/// One member f_n of a family: the expression with its parameter bound.
struct FamilyMember {
  Expr expr;
  int n = 1;
};

// Grammar, lowest to highest precedence:
//   additive := multiplicative (('+' | '-') multiplicative)*
//   multiplicative := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' integer | '^' '(' integer ')')?      integer may be signed
//   atom := number | 'z' | 'n' | 'i' | 'inf' | 'sqrt(n)'
//         | ('exp' | 're' | 'im' | 'conj') '(' additive ')' | '(' additive ')'
Expr parse(std::string_view text);
std::string print(const Expr& e);

/// Value of the member at z. Indeterminate quotients are retried with
/// derivative quotients, at most 8 levels deep.
SpherePoint eval(const FamilyMember& m, const SpherePoint& z);
SpherePoint eval(const Expr& e, int n, const SpherePoint& z);

/// Derivative with respect to z, constant-folded. Throws NonHolomorphic.
Expr differentiate(const Expr& e);

/// Constant folding plus collection of constant terms and factors.
Expr fold(const Expr& e);

/// Replaces n and sqrt(n) by numeric constants.
Expr bind(const Expr& e, int n);

/// zeta -> e(center + scale * zeta), folded; the variable is still z.
Expr substitute_affine(const Expr& e, Complex center, Complex scale);

/// Numerator/denominator pair N/D with no division or negative power left
/// outside exponentials; used for the reciprocal route at poles.
struct Fraction {
  Expr numerator;
  Expr denominator;
};
Fraction as_fraction(const Expr& e);

}  // namespace nflab
