#include "nflab/expr.hpp"

#include <cmath>
#include <optional>
#include <utility>

#include "nflab/error.hpp"

namespace nflab {

namespace {

const Node& zero_node() {
  static const Node zero{};
  return zero;
}

bool is_unary(Op op) {
  return op == Op::Neg || op == Op::PowInt || op == Op::Exp || op == Op::Re ||
         op == Op::Im || op == Op::Conj;
}

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

const Node& Expr::node() const { return node_ ? *node_ : zero_node(); }

Expr Expr::make(Node node) {
  node.holomorphic = node.op != Op::Re && node.op != Op::Im && node.op != Op::Conj;
  node.size = 1;
  if (is_unary(node.op) || is_binary(node.op)) {
    node.holomorphic = node.holomorphic && node.lhs.holomorphic();
    node.size += node.lhs.size();
  }
  if (is_binary(node.op)) {
    node.holomorphic = node.holomorphic && node.rhs.holomorphic();
    node.size += node.rhs.size();
  }
  return Expr(std::make_shared<const Node>(std::move(node)));
}

Expr Expr::constant(SpherePoint value) {
  Node n;
  n.op = Op::Const;
  n.value = value;
  return make(std::move(n));
}

#define NFLAB_LEAF(name, kind) \
  Expr Expr::name() {          \
    Node n;                    \
    n.op = kind;               \
    return make(std::move(n)); \
  }
NFLAB_LEAF(var_z, Op::VarZ)
NFLAB_LEAF(param_n, Op::ParamN)
NFLAB_LEAF(param_sqrt_n, Op::ParamSqrtN)
NFLAB_LEAF(imag_unit, Op::I)
#undef NFLAB_LEAF

#define NFLAB_UNARY(name, kind) \
  Expr Expr::name(Expr a) {     \
    Node n;                     \
    n.op = kind;                \
    n.lhs = std::move(a);       \
    return make(std::move(n));  \
  }
NFLAB_UNARY(neg, Op::Neg)
NFLAB_UNARY(exp, Op::Exp)
NFLAB_UNARY(re, Op::Re)
NFLAB_UNARY(im, Op::Im)
NFLAB_UNARY(conj, Op::Conj)
#undef NFLAB_UNARY

#define NFLAB_BINARY(name, kind) \
  Expr Expr::name(Expr a, Expr b) { \
    Node n;                         \
    n.op = kind;                    \
    n.lhs = std::move(a);           \
    n.rhs = std::move(b);           \
    return make(std::move(n));      \
  }
NFLAB_BINARY(add, Op::Add)
NFLAB_BINARY(sub, Op::Sub)
NFLAB_BINARY(mul, Op::Mul)
NFLAB_BINARY(div, Op::Div)
#undef NFLAB_BINARY

Expr Expr::pow(Expr base, int exponent) {
  if (exponent > kMaxExponent || exponent < -kMaxExponent)
    throw Error(ErrorKind::ExponentRange,
                "exponent " + std::to_string(exponent) + " outside [-64, 64]");
  Node n;
  n.op = Op::PowInt;
  n.exponent = exponent;
  n.lhs = std::move(base);
  return make(std::move(n));
}

Op Expr::op() const { return node().op; }
const SpherePoint& Expr::value() const { return node().value; }
int Expr::exponent() const { return node().exponent; }
const Expr& Expr::lhs() const { return node().lhs; }
const Expr& Expr::rhs() const { return node().rhs; }
bool Expr::holomorphic() const { return node().holomorphic; }
std::size_t Expr::size() const { return node().size; }

bool Expr::is_constant(const SpherePoint& v) const {
  return op() == Op::Const && value() == v;
}

bool Expr::is_infinity_constant() const {
  return op() == Op::Const && value().is_infinite();
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.op() != b.op() || a.size() != b.size()) return false;
  switch (a.op()) {
    case Op::Const: return a.value() == b.value();
    case Op::PowInt: return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    default: break;
  }
  if (is_unary(a.op())) return a.lhs() == b.lhs();
  if (is_binary(a.op())) return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  return true;
}

// ---------------------------------------------------------------------------
// Folding

namespace {

const Complex kI(0.0, 1.0);

std::optional<SpherePoint> constant_of(const Expr& e) {
  if (e.op() == Op::Const) return e.value();
  if (e.op() == Op::I) return SpherePoint(kI);
  return std::nullopt;
}

bool is_const(const Expr& e, double v) { return e.is_constant(SpherePoint(v)); }

template <class F>
std::optional<Expr> try_fold(F&& f) {
  try {
    return Expr::constant(f());
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::Indeterminate) return std::nullopt;
    throw;
  }
}

SpherePoint exp_point(const SpherePoint& v) {
  if (v.is_infinite())
    throw Error(ErrorKind::EssentialSingularity, "exp has an essential singularity at infinity");
  const Complex w = v.value();
  // exp overflows to the point at infinity; underflow to 0 is exact enough.
  if (w.real() > 709.0) return SpherePoint::infinity();
  const Complex r = std::exp(w);
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) return SpherePoint::infinity();
  return SpherePoint(r);
}

SpherePoint pow_point(const SpherePoint& base, int k) {
  if (k == 0) return SpherePoint(1.0);
  if (base.is_infinite()) return k > 0 ? base : SpherePoint(0.0);
  SpherePoint acc(1.0);
  SpherePoint b = base;
  for (int e = k < 0 ? -k : k; e > 0; e >>= 1) {
    if (e & 1) acc = acc * b;
    if (e > 1) b = b.is_infinite() ? b : b * b;
  }
  return k < 0 ? reciprocal(acc) : acc;
}

SpherePoint re_point(const SpherePoint& v) {
  if (v.is_infinite()) throw Error(ErrorKind::Indeterminate, "re of infinity");
  return SpherePoint(v.value().real());
}

SpherePoint im_point(const SpherePoint& v) {
  if (v.is_infinite()) throw Error(ErrorKind::Indeterminate, "im of infinity");
  return SpherePoint(v.value().imag());
}

SpherePoint conj_point(const SpherePoint& v) {
  if (v.is_infinite()) return v;
  return SpherePoint(std::conj(v.value()));
}

Expr s_neg(const Expr& a);
Expr s_mul(const Expr& a, const Expr& b);

Expr s_add(const Expr& a, const Expr& b) {
  const auto ca = constant_of(a);
  const auto cb = constant_of(b);
  if (ca && cb)
    if (auto r = try_fold([&] { return *ca + *cb; })) return *r;
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (cb && !ca) return s_add(b, a);
  if (ca && ca->is_finite() && b.op() == Op::Add) {
    if (auto k = constant_of(b.lhs()); k && k->is_finite())
      return s_add(Expr::constant(*ca + *k), b.rhs());
  }
  return Expr::add(a, b);
}

Expr s_sub(const Expr& a, const Expr& b) {
  const auto ca = constant_of(a);
  const auto cb = constant_of(b);
  if (ca && cb)
    if (auto r = try_fold([&] { return *ca - *cb; })) return *r;
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return s_neg(b);
  if (cb && !ca) return s_add(Expr::constant(-*cb), a);
  if (b.op() == Op::Neg) return s_add(a, b.lhs());
  return Expr::sub(a, b);
}

Expr s_neg(const Expr& a) {
  if (auto c = constant_of(a)) return Expr::constant(-*c);
  if (a.op() == Op::Neg) return a.lhs();
  if (a.op() == Op::Mul)
    if (auto c = constant_of(a.lhs())) return s_mul(Expr::constant(-*c), a.rhs());
  return Expr::neg(a);
}

Expr s_mul(const Expr& a, const Expr& b) {
  const auto ca = constant_of(a);
  const auto cb = constant_of(b);
  if (ca && cb)
    if (auto r = try_fold([&] { return *ca * *cb; })) return *r;
  if (is_const(a, 0.0) || is_const(b, 0.0)) {
    if (!(ca && ca->is_infinite()) && !(cb && cb->is_infinite())) return Expr();
  }
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (cb && !ca) return s_mul(b, a);
  if (a.op() == Op::Neg) return s_neg(s_mul(a.lhs(), b));
  if (b.op() == Op::Neg) return s_neg(s_mul(a, b.lhs()));
  if (ca) {
    if (is_const(a, -1.0)) return s_neg(b);
    if (ca->is_finite() && b.op() == Op::Mul) {
      if (auto d = constant_of(b.lhs()); d && d->is_finite())
        return s_mul(Expr::constant(*ca * *d), b.rhs());
    }
    if (ca->is_finite() && b.op() == Op::Add) {
      if (auto d = constant_of(b.lhs()); d && d->is_finite())
        return s_add(Expr::constant(*ca * *d), s_mul(a, b.rhs()));
    }
  }
  return Expr::mul(a, b);
}

Expr s_div(const Expr& a, const Expr& b) {
  const auto ca = constant_of(a);
  const auto cb = constant_of(b);
  if (ca && cb)
    if (auto r = try_fold([&] { return *ca / *cb; })) return *r;
  if (is_const(a, 0.0) && !(cb && cb->is_zero())) return Expr();
  if (is_const(b, 1.0)) return a;
  if (cb && cb->is_finite() && !cb->is_zero())
    return s_mul(Expr::constant(reciprocal(*cb)), a);
  return Expr::div(a, b);
}

Expr s_pow(const Expr& a, int k) {
  if (k == 0) return Expr::constant(1.0);
  if (k == 1) return a;
  if (auto c = constant_of(a))
    if (auto r = try_fold([&] { return pow_point(*c, k); })) return *r;
  return Expr::pow(a, k);
}

Expr s_exp(const Expr& a) {
  if (auto c = constant_of(a); c && c->is_finite()) return Expr::constant(exp_point(*c));
  return Expr::exp(a);
}

template <class F>
Expr s_unary_const(Op op, const Expr& a, F&& f) {
  if (auto c = constant_of(a))
    if (auto r = try_fold([&] { return f(*c); })) return *r;
  switch (op) {
    case Op::Re: return Expr::re(a);
    case Op::Im: return Expr::im(a);
    default: return Expr::conj(a);
  }
}

// Rebuilds e bottom-up through the folding constructors, replacing leaves
// via `leaf_map` first.
template <class LeafMap>
Expr rebuild(const Expr& e, const LeafMap& leaf_map) {
  switch (e.op()) {
    case Op::Const:
    case Op::VarZ:
    case Op::ParamN:
    case Op::ParamSqrtN:
    case Op::I:
      return leaf_map(e);
    case Op::Add: return s_add(rebuild(e.lhs(), leaf_map), rebuild(e.rhs(), leaf_map));
    case Op::Sub: return s_sub(rebuild(e.lhs(), leaf_map), rebuild(e.rhs(), leaf_map));
    case Op::Mul: return s_mul(rebuild(e.lhs(), leaf_map), rebuild(e.rhs(), leaf_map));
    case Op::Div: return s_div(rebuild(e.lhs(), leaf_map), rebuild(e.rhs(), leaf_map));
    case Op::Neg: return s_neg(rebuild(e.lhs(), leaf_map));
    case Op::PowInt: return s_pow(rebuild(e.lhs(), leaf_map), e.exponent());
    case Op::Exp: return s_exp(rebuild(e.lhs(), leaf_map));
    case Op::Re: return s_unary_const(Op::Re, rebuild(e.lhs(), leaf_map), re_point);
    case Op::Im: return s_unary_const(Op::Im, rebuild(e.lhs(), leaf_map), im_point);
    case Op::Conj: return s_unary_const(Op::Conj, rebuild(e.lhs(), leaf_map), conj_point);
  }
  return e;
}

}  // namespace

Expr fold(const Expr& e) {
  return rebuild(e, [](const Expr& leaf) { return leaf; });
}

Expr bind(const Expr& e, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "family index n must be >= 1");
  const double nd = n;
  const double sq = std::sqrt(nd);
  return rebuild(e, [&](const Expr& leaf) {
    if (leaf.op() == Op::ParamN) return Expr::constant(nd);
    if (leaf.op() == Op::ParamSqrtN) return Expr::constant(sq);
    return leaf;
  });
}

Expr substitute_affine(const Expr& e, Complex center, Complex scale) {
  if (scale == Complex(0.0, 0.0))
    throw Error(ErrorKind::InvalidArgument, "affine substitution needs a nonzero scale");
  const Expr image = s_add(Expr::constant(center), s_mul(Expr::constant(scale), Expr::var_z()));
  return rebuild(e, [&](const Expr& leaf) { return leaf.op() == Op::VarZ ? image : leaf; });
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e) {
  if (!e.holomorphic())
    throw Error(ErrorKind::NonHolomorphic, "cannot differentiate re/im/conj");
  switch (e.op()) {
    case Op::Const:
    case Op::ParamN:
    case Op::ParamSqrtN:
    case Op::I:
      return Expr();
    case Op::VarZ: return Expr::constant(1.0);
    case Op::Add: return s_add(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::Sub: return s_sub(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::Neg: return s_neg(differentiate(e.lhs()));
    case Op::Mul: {
      const Expr& a = e.lhs();
      const Expr& b = e.rhs();
      return s_add(s_mul(differentiate(a), b), s_mul(a, differentiate(b)));
    }
    case Op::Div: {
      const Expr& a = e.lhs();
      const Expr& b = e.rhs();
      return s_div(s_sub(s_mul(differentiate(a), b), s_mul(a, differentiate(b))),
                   s_pow(b, 2));
    }
    case Op::PowInt: {
      const int k = e.exponent();
      const Expr& u = e.lhs();
      const Expr du = differentiate(u);
      const Expr kc = Expr::constant(static_cast<double>(k));
      if (k - 1 >= -kMaxExponent) return s_mul(s_mul(kc, s_pow(u, k - 1)), du);
      // k u^(k-1) = k u^k / u keeps the exponent in range.
      return s_mul(s_div(s_mul(kc, e), u), du);
    }
    case Op::Exp: return s_mul(differentiate(e.lhs()), e);
    case Op::Re:
    case Op::Im:
    case Op::Conj:
      break;
  }
  throw Error(ErrorKind::NonHolomorphic, "cannot differentiate re/im/conj");
}

// ---------------------------------------------------------------------------
// Fractions

Fraction as_fraction(const Expr& e) {
  const Expr one = Expr::constant(1.0);
  switch (e.op()) {
    case Op::Const:
      if (e.value().is_infinite()) return {one, Expr()};
      return {e, one};
    case Op::VarZ:
    case Op::ParamN:
    case Op::ParamSqrtN:
    case Op::I:
    case Op::Exp:
      return {e, one};
    case Op::Neg: {
      Fraction a = as_fraction(e.lhs());
      return {s_neg(a.numerator), a.denominator};
    }
    case Op::Add:
    case Op::Sub: {
      Fraction a = as_fraction(e.lhs());
      Fraction b = as_fraction(e.rhs());
      Expr left = s_mul(a.numerator, b.denominator);
      Expr right = s_mul(b.numerator, a.denominator);
      Expr num = e.op() == Op::Add ? s_add(left, right) : s_sub(left, right);
      return {num, s_mul(a.denominator, b.denominator)};
    }
    case Op::Mul: {
      Fraction a = as_fraction(e.lhs());
      Fraction b = as_fraction(e.rhs());
      return {s_mul(a.numerator, b.numerator), s_mul(a.denominator, b.denominator)};
    }
    case Op::Div: {
      Fraction a = as_fraction(e.lhs());
      Fraction b = as_fraction(e.rhs());
      return {s_mul(a.numerator, b.denominator), s_mul(a.denominator, b.numerator)};
    }
    case Op::PowInt: {
      Fraction a = as_fraction(e.lhs());
      const int k = e.exponent();
      if (k >= 0) return {s_pow(a.numerator, k), s_pow(a.denominator, k)};
      return {s_pow(a.denominator, -k), s_pow(a.numerator, -k)};
    }
    case Op::Re:
    case Op::Im:
    case Op::Conj:
      break;
  }
  throw Error(ErrorKind::NonHolomorphic, "re/im/conj have no fraction form");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

constexpr int kMaxRetryDepth = 8;

class Evaluator {
 public:
  Evaluator(int n, SpherePoint z) : n_(n), sqrt_n_(std::sqrt(static_cast<double>(n))), z_(z) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "family index n must be >= 1");
  }

  SpherePoint run(const Expr& e, int depth) const {
    switch (e.op()) {
      case Op::Const: return e.value();
      case Op::VarZ: return z_;
      case Op::ParamN: return SpherePoint(static_cast<double>(n_));
      case Op::ParamSqrtN: return SpherePoint(sqrt_n_);
      case Op::I: return SpherePoint(kI);
      case Op::Neg: return -run(e.lhs(), depth);
      case Op::PowInt: return pow_point(run(e.lhs(), depth), e.exponent());
      case Op::Exp: return exp_point(run(e.lhs(), depth));
      case Op::Re: return re_point(run(e.lhs(), depth));
      case Op::Im: return im_point(run(e.lhs(), depth));
      case Op::Conj: return conj_point(run(e.lhs(), depth));
      case Op::Add:
      case Op::Sub: {
        const SpherePoint a = run(e.lhs(), depth);
        const SpherePoint b = run(e.rhs(), depth);
        if (a.is_infinite() && b.is_infinite()) {
          // a +- b = (1/a +- 1/b) * (a b) rewritten as a quotient.
          const Expr ia = Expr::div(Expr::constant(1.0), e.lhs());
          const Expr ib = Expr::div(Expr::constant(1.0), e.rhs());
          const Expr num = e.op() == Op::Add ? Expr::add(ia, ib) : Expr::sub(ib, ia);
          const Expr den = Expr::div(Expr::constant(1.0), Expr::mul(e.lhs(), e.rhs()));
          return quotient(num, den, depth + 1);
        }
        return e.op() == Op::Add ? a + b : a - b;
      }
      case Op::Mul: {
        const SpherePoint a = run(e.lhs(), depth);
        const SpherePoint b = run(e.rhs(), depth);
        if (a.is_zero() && b.is_infinite())
          return quotient(e.lhs(), Expr::div(Expr::constant(1.0), e.rhs()), depth + 1);
        if (a.is_infinite() && b.is_zero())
          return quotient(e.rhs(), Expr::div(Expr::constant(1.0), e.lhs()), depth + 1);
        return a * b;
      }
      case Op::Div: {
        const SpherePoint a = run(e.lhs(), depth);
        const SpherePoint b = run(e.rhs(), depth);
        if (indeterminate_quotient(a, b)) return lhopital(e.lhs(), e.rhs(), depth + 1);
        return a / b;
      }
    }
    throw Error(ErrorKind::InvalidArgument, "corrupt expression node");
  }

 private:
  static bool indeterminate_quotient(const SpherePoint& a, const SpherePoint& b) {
    return (a.is_zero() && b.is_zero()) || (a.is_infinite() && b.is_infinite());
  }

  SpherePoint quotient(const Expr& num, const Expr& den, int depth) const {
    check_depth(depth);
    const SpherePoint a = run(num, depth);
    const SpherePoint b = run(den, depth);
    if (indeterminate_quotient(a, b)) return lhopital(num, den, depth + 1);
    return a / b;
  }

  SpherePoint lhopital(const Expr& num, const Expr& den, int depth) const {
    check_depth(depth);
    if (!num.holomorphic() || !den.holomorphic())
      throw Error(ErrorKind::Indeterminate, "indeterminate form in a non-holomorphic expression");
    return quotient(differentiate(num), differentiate(den), depth);
  }

  static void check_depth(int depth) {
    if (depth > kMaxRetryDepth)
      throw Error(ErrorKind::Indeterminate, "indeterminate form not resolved within 8 retries");
  }

  int n_;
  double sqrt_n_;
  SpherePoint z_;
};

}  // namespace

SpherePoint eval(const Expr& e, int n, const SpherePoint& z) {
  return Evaluator(n, z).run(e, 0);
}

SpherePoint eval(const FamilyMember& m, const SpherePoint& z) { return eval(m.expr, m.n, z); }

}  // namespace nflab
