#include "nflab/sphere.hpp"

#include <algorithm>
#include <cmath>

#include "nflab/error.hpp"

namespace nflab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::ExponentRange: return "ExponentRange";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::Indeterminate: return "Indeterminate";
    case ErrorKind::EssentialSingularity: return "EssentialSingularity";
    case ErrorKind::NonHolomorphic: return "NonHolomorphic";
    case ErrorKind::PoleAtZStar: return "PoleAtZStar";
    case ErrorKind::MaximizationFailed: return "MaximizationFailed";
    case ErrorKind::MinUnreliable: return "MinUnreliable";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void indeterminate(const char* form) {
  throw Error(ErrorKind::Indeterminate, std::string("indeterminate form ") + form);
}

// Overflow rule: an operation on finite operands whose result is not
// representable is the point at infinity.
SpherePoint from_finite_operands(Complex r) {
  if (std::isfinite(r.real()) && std::isfinite(r.imag())) return SpherePoint(r);
  return SpherePoint::infinity();
}

}  // namespace

SpherePoint::SpherePoint(Complex value) : value_(value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw Error(ErrorKind::InvalidArgument,
                "non-finite component in a finite SpherePoint");
}

Complex SpherePoint::value() const {
  if (infinite_)
    throw Error(ErrorKind::InvalidArgument, "value() of the point at infinity");
  return value_;
}

double SpherePoint::abs() const noexcept {
  return infinite_ ? HUGE_VAL : std::abs(value_);
}

SpherePoint SpherePoint::operator-() const {
  if (infinite_) return *this;
  return SpherePoint(-value_);
}

SpherePoint operator+(const SpherePoint& a, const SpherePoint& b) {
  if (a.infinite_ && b.infinite_) indeterminate("inf + inf");
  if (a.infinite_ || b.infinite_) return SpherePoint::infinity();
  return from_finite_operands(a.value_ + b.value_);
}

SpherePoint operator-(const SpherePoint& a, const SpherePoint& b) {
  if (a.infinite_ && b.infinite_) indeterminate("inf - inf");
  if (a.infinite_ || b.infinite_) return SpherePoint::infinity();
  return from_finite_operands(a.value_ - b.value_);
}

SpherePoint operator*(const SpherePoint& a, const SpherePoint& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.is_zero() || b.is_zero()) indeterminate("0 * inf");
    return SpherePoint::infinity();
  }
  return from_finite_operands(a.value_ * b.value_);
}

SpherePoint operator/(const SpherePoint& a, const SpherePoint& b) {
  if (a.infinite_ && b.infinite_) indeterminate("inf / inf");
  if (a.infinite_) return a;
  if (b.infinite_) return SpherePoint(0.0);
  if (b.is_zero()) {
    if (a.is_zero()) indeterminate("0 / 0");
    return SpherePoint::infinity();
  }
  return from_finite_operands(a.value_ / b.value_);
}

SpherePoint reciprocal(const SpherePoint& z) { return SpherePoint(1.0) / z; }

EmbeddedPoint embed(const SpherePoint& z) {
  if (z.is_infinite()) return {0.0, 0.0, 1.0};
  const Complex v = z.value();
  const double m = std::abs(v);
  if (m > 1.0) {
    // Divide through by |z|^2 so large |z| stays accurate.
    const double inv = 1.0 / m;
    const double denom = 1.0 + inv * inv;
    return {(v.real() * inv) * inv / denom, (v.imag() * inv) * inv / denom,
            1.0 / denom};
  }
  const double denom = 1.0 + m * m;
  return {v.real() / denom, v.imag() / denom, m * m / denom};
}

double chordal(const SpherePoint& z, const SpherePoint& w) {
  if (z.is_infinite() && w.is_infinite()) return 0.0;
  if (z.is_infinite()) return 1.0 / std::hypot(1.0, w.abs());
  if (w.is_infinite()) return 1.0 / std::hypot(1.0, z.abs());
  Complex a = z.value();
  Complex b = w.value();
  // Fixed operand order keeps the result exactly symmetric.
  if (a.real() > b.real() || (a.real() == b.real() && a.imag() > b.imag())) std::swap(a, b);
  if (std::abs(a) > 1.0 && std::abs(b) > 1.0) {
    // Inversion is a rotation of the sphere; work near the south pole.
    a = 1.0 / a;
    b = 1.0 / b;
  }
  const double num = std::abs(a - b);
  if (num == 0.0) return 0.0;
  const double d = num / std::hypot(1.0, std::abs(a)) / std::hypot(1.0, std::abs(b));
  return std::min(d, 1.0);
}

// Equals asin(chordal(z, w)), but stays well conditioned near pi/2:
// |z - w|^2 + |1 + z conj(w)|^2 = (1 + |z|^2)(1 + |w|^2).
double spherical(const SpherePoint& z, const SpherePoint& w) {
  if (z.is_infinite() && w.is_infinite()) return 0.0;
  if (z.is_infinite()) return std::atan2(1.0, w.abs());
  if (w.is_infinite()) return std::atan2(1.0, z.abs());
  Complex a = z.value();
  Complex b = w.value();
  if (a.real() > b.real() || (a.real() == b.real() && a.imag() > b.imag())) std::swap(a, b);
  if (std::abs(a) > 1.0 && std::abs(b) > 1.0) {
    a = 1.0 / a;
    b = 1.0 / b;
  }
  return std::atan2(std::abs(a - b), std::abs(1.0 + a * std::conj(b)));
}

double separation_product(const SpherePoint& a, const SpherePoint& b,
                          const SpherePoint& c) {
  return spherical(a, b) * spherical(a, c) * spherical(b, c);
}

}  // namespace nflab
