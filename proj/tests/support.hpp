#pragma once

// Shared generators and independent oracles for the test binaries.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "nflab/error.hpp"
#include "nflab/expr.hpp"

namespace nflab::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }

  // Uniform in the disk |z - c| <= r.
  Complex in_disk(Complex c, double r) {
    const double rad = r * std::sqrt(uniform(0.0, 1.0));
    const double t = uniform(0.0, 2.0 * std::numbers::pi);
    return c + std::polar(rad, t);
  }

  // Wide dynamic range: modulus log-uniform in [1e-3, 1e3].
  Complex wide() {
    return std::polar(std::pow(10.0, uniform(-3.0, 3.0)), uniform(0.0, 2.0 * std::numbers::pi));
  }

 private:
  std::mt19937_64 gen_;
};

// Chordal distance in long double straight from the defining formula.
inline double oracle_chordal(Complex z, Complex w) {
  using L = long double;
  const std::complex<L> a(z.real(), z.imag()), b(w.real(), w.imag());
  return static_cast<double>(std::abs(a - b) /
                             (std::sqrt(1.0L + std::norm(a)) * std::sqrt(1.0L + std::norm(b))));
}

// Closed form for f_n = n z + sqrt(n).
inline double oracle_linear_sharp(int n, Complex z) {
  const double sn = std::sqrt(static_cast<double>(n));
  return n / (1.0 + n * std::norm(1.0 + sn * z));
}

// Random holomorphic expression shaped exactly like parser output:
// non-negative real literals, small exponents, bounded depth.
class ExprGenerator {
 public:
  explicit ExprGenerator(Rng& rng) : rng_(rng) {}

  Expr generate(int depth) {
    if (depth <= 0 || rng_.coin(0.25)) return leaf();
    switch (rng_.integer(0, 7)) {
      case 0: return Expr::add(generate(depth - 1), generate(depth - 1));
      case 1: return Expr::sub(generate(depth - 1), generate(depth - 1));
      case 2: return Expr::mul(generate(depth - 1), generate(depth - 1));
      case 3: return Expr::div(generate(depth - 1), generate(depth - 1));
      case 4: return Expr::neg(generate(depth - 1));
      case 5: {
        int k = rng_.integer(-3, 3);
        if (k == 0) k = 2;
        return Expr::pow(generate(depth - 1), k);
      }
      case 6: return Expr::exp(generate(depth - 1));
      default: return Expr::mul(leaf(), Expr::var_z());
    }
  }

 private:
  Expr leaf() {
    switch (rng_.integer(0, 5)) {
      case 0:
      case 1: return Expr::var_z();
      case 2: return Expr::param_n();
      case 3: return Expr::param_sqrt_n();
      case 4: return Expr::imag_unit();
      default: return Expr::constant(SpherePoint(rng_.integer(1, 40) / 8.0));
    }
  }

  Rng& rng_;
};

inline std::optional<Complex> try_value(const Expr& e, int n, Complex z) {
  try {
    const SpherePoint v = eval(e, n, SpherePoint(z));
    if (v.is_infinite()) return std::nullopt;
    return v.value();
  } catch (const Error&) {
    return std::nullopt;
  }
}

// True when z is comfortably inside the domain of e: every divisor and
// negative-power base has modulus >= 0.1, every exponent has real part <= 5
// and every subexpression stays below 1e4 in modulus.
inline bool well_inside(const Expr& e, int n, Complex z) {
  const auto v = try_value(e, n, z);
  if (!v || std::abs(*v) > 1e4) return false;
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
      return well_inside(e.lhs(), n, z) && well_inside(e.rhs(), n, z);
    case Op::Div: {
      const auto d = try_value(e.rhs(), n, z);
      return d && std::abs(*d) >= 0.1 && well_inside(e.lhs(), n, z) && well_inside(e.rhs(), n, z);
    }
    case Op::Neg:
      return well_inside(e.lhs(), n, z);
    case Op::PowInt: {
      const auto b = try_value(e.lhs(), n, z);
      if (!b || (e.exponent() < 0 && std::abs(*b) < 0.1)) return false;
      return well_inside(e.lhs(), n, z);
    }
    case Op::Exp: {
      const auto a = try_value(e.lhs(), n, z);
      return a && a->real() <= 5.0 && well_inside(e.lhs(), n, z);
    }
    default:
      return true;
  }
}

}  // namespace nflab::testing
