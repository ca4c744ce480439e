#pragma once

#include <optional>
#include <vector>

#include "nflab/expr.hpp"

namespace nflab {

/// Closed disk sampled on a polar grid: `radial` rings at radius
/// radius * i / (radial - 1), i = 0..radial-1, each with `angular` points at
/// angle 2 pi k / angular. The centre ring collapses to a single point.
struct ScanRegion {
  Complex center{0.0, 0.0};
  double radius = 0.5;
  int radial = 64;
  int angular = 256;

  void validate() const;
  std::vector<Complex> grid() const;
};

/// Spherical derivative evaluator with the derivative and fraction form
/// precomputed once per expression.
///
/// Where |f(z)| <= 1 the direct route |f'| / (1 + |f|^2) is used; otherwise
/// the reciprocal route evaluates (1/f)# with 1/f = D/N built from the
/// fraction form f = N/D, which stays finite at poles.
class SphericalDerivative {
 public:
  explicit SphericalDerivative(Expr f);

  const Expr& expr() const { return f_; }
  double operator()(int n, Complex z) const;

  std::optional<double> direct(int n, Complex z) const;
  std::optional<double> via_reciprocal(int n, Complex z) const;

 private:
  Expr f_;
  Expr df_;
  Expr recip_;
  Expr drecip_;
};

/// f#(z) for a finite point. Throws NonHolomorphic or Indeterminate.
double spherical_derivative(const FamilyMember& m, const SpherePoint& z);

/// Values within this relative margin of the best so far count as ties;
/// ties keep the earlier point in grid order.
inline constexpr double kArgmaxTieTolerance = 1e-12;

struct ScanRow {
  int n = 0;
  double sup = 0.0;
  Complex argmax{0.0, 0.0};
  int failed = 0;
  int points = 0;
};

struct ScanReport {
  ScanRegion region;
  std::vector<ScanRow> rows;
  // Optional per-point values, row-major in (n, grid index); NaN marks a
  // failed point.
  std::vector<std::vector<double>> grid_values;

  int total_failed() const;
  int total_points() const;
};

struct ScanOptions {
  bool keep_grid = false;
};

ScanReport marty_scan(const Expr& family, const ScanRegion& region,
                      const std::vector<int>& n_values, ScanOptions options = {});

enum class NormalityVerdict { BoundedEvidence, DivergentEvidence, Inconclusive };

const char* to_string(NormalityVerdict v);

/// Needs at least 5 rows. Divergent: sup strictly increasing in n with
/// last > 10 * first. Bounded: max/min sup <= 2 (an identically zero sup
/// counts as bounded).
NormalityVerdict normality_evidence(const ScanReport& report);

}  // namespace nflab
