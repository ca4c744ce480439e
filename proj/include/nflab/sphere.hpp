#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace nflab {

using Complex = std::complex<double>;

/// A point of the extended complex plane: a finite complex number or the
/// point at infinity.
///
/// Arithmetic follows the Riemann-sphere conventions
///   inf +- c = inf, inf * c = inf (c != 0), c / 0 = inf (c != 0), c / inf = 0,
/// and throws Error(Indeterminate) for inf - inf, inf + inf, 0 * inf, 0 / 0
/// and inf / inf. A finite result whose magnitude overflows becomes infinity;
/// a NaN component is always an error.
class SpherePoint {
 public:
  constexpr SpherePoint() = default;
  SpherePoint(double re, double im = 0.0) : SpherePoint(Complex(re, im)) {}
  SpherePoint(Complex value);

  static SpherePoint infinity() noexcept {
    SpherePoint p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  bool is_zero() const noexcept { return !infinite_ && value_ == Complex(0.0, 0.0); }

  // Precondition: is_finite().
  Complex value() const;
  double abs() const noexcept;

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  SpherePoint operator-() const;
  friend SpherePoint operator+(const SpherePoint& a, const SpherePoint& b);
  friend SpherePoint operator-(const SpherePoint& a, const SpherePoint& b);
  friend SpherePoint operator*(const SpherePoint& a, const SpherePoint& b);
  friend SpherePoint operator/(const SpherePoint& a, const SpherePoint& b);

 private:
  Complex value_{0.0, 0.0};
  bool infinite_ = false;
};

SpherePoint reciprocal(const SpherePoint& z);

/// Coordinates on the sphere of radius 1/2 centred at (0, 0, 1/2).
using EmbeddedPoint = Eigen::Vector3d;

/// Stereographic image (Re z, Im z, |z|^2) / (1 + |z|^2); infinity goes to
/// the north pole (0, 0, 1).
EmbeddedPoint embed(const SpherePoint& z);

/// Chordal distance with chordal(0, inf) = 1. Range [0, 1].
double chordal(const SpherePoint& z, const SpherePoint& w);

/// Great-circle distance on the same sphere, arcsin(chordal). Range [0, pi/2].
double spherical(const SpherePoint& z, const SpherePoint& w);

/// sigma(a, b) * sigma(a, c) * sigma(b, c).
double separation_product(const SpherePoint& a, const SpherePoint& b,
                          const SpherePoint& c);

/// Largest admissible separation product, (pi/2)^3.
inline constexpr double kMaxSeparation =
    std::numbers::pi * std::numbers::pi * std::numbers::pi / 8.0;

}  // namespace nflab
