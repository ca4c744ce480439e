#include "nflab/marty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nflab/error.hpp"

namespace nflab {

void ScanRegion::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(ErrorKind::InvalidArgument, "scan radius must be positive");
  if (radial < 2 || angular < 2)
    throw Error(ErrorKind::InvalidArgument, "scan grid needs >= 2 points per axis");
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
    throw Error(ErrorKind::InvalidArgument, "scan centre must be finite");
}

std::vector<Complex> ScanRegion::grid() const {
  validate();
  std::vector<Complex> pts;
  pts.reserve(1 + static_cast<std::size_t>(radial - 1) * angular);
  pts.push_back(center);
  for (int i = 1; i < radial; ++i) {
    const double r = radius * i / (radial - 1);
    for (int k = 0; k < angular; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / angular;
      pts.push_back(center + Complex(r * std::cos(theta), r * std::sin(theta)));
    }
  }
  return pts;
}

// ---------------------------------------------------------------------------

namespace {

bool recoverable(const Error& e) {
  return e.kind() == ErrorKind::Indeterminate || e.kind() == ErrorKind::EssentialSingularity;
}

std::optional<SpherePoint> try_eval(const Expr& e, int n, Complex z) {
  try {
    return eval(e, n, SpherePoint(z));
  } catch (const Error& err) {
    if (recoverable(err)) return std::nullopt;
    throw;
  }
}

std::optional<double> sharp(const std::optional<SpherePoint>& value,
                            const std::optional<SpherePoint>& deriv) {
  if (!value || !deriv || value->is_infinite() || deriv->is_infinite()) return std::nullopt;
  const double m = value->abs();
  const double d = deriv->abs();
  if (m > 1.0) {
    // |f'| / (1 + |f|^2) without squaring a large |f|.
    const double inv = 1.0 / m;
    return d * inv * inv / (1.0 + inv * inv);
  }
  return d / (1.0 + m * m);
}

}  // namespace

SphericalDerivative::SphericalDerivative(Expr f) : f_(std::move(f)) {
  if (!f_.holomorphic())
    throw Error(ErrorKind::NonHolomorphic,
                "spherical derivative needs a meromorphic expression (no re/im/conj)");
  df_ = differentiate(f_);
  const Fraction frac = as_fraction(f_);
  recip_ = fold(Expr::div(frac.denominator, frac.numerator));
  drecip_ = differentiate(recip_);
}

std::optional<double> SphericalDerivative::direct(int n, Complex z) const {
  const auto v = try_eval(f_, n, z);
  if (!v || v->is_infinite()) return std::nullopt;
  return sharp(v, try_eval(df_, n, z));
}

std::optional<double> SphericalDerivative::via_reciprocal(int n, Complex z) const {
  return sharp(try_eval(recip_, n, z), try_eval(drecip_, n, z));
}

double SphericalDerivative::operator()(int n, Complex z) const {
  const auto v = try_eval(f_, n, z);
  const bool direct_side = v && v->is_finite() && v->abs() <= 1.0;
  if (direct_side)
    if (auto d = sharp(v, try_eval(df_, n, z))) return *d;
  if (auto r = via_reciprocal(n, z)) return *r;
  if (!direct_side && v && v->is_finite())
    if (auto d = sharp(v, try_eval(df_, n, z))) return *d;
  throw Error(ErrorKind::Indeterminate, "spherical derivative undefined by both routes");
}

double spherical_derivative(const FamilyMember& m, const SpherePoint& z) {
  if (z.is_infinite())
    throw Error(ErrorKind::InvalidArgument, "spherical derivative needs a finite point");
  return SphericalDerivative(m.expr)(m.n, z.value());
}

// ---------------------------------------------------------------------------

int ScanReport::total_failed() const {
  int s = 0;
  for (const auto& r : rows) s += r.failed;
  return s;
}

int ScanReport::total_points() const {
  int s = 0;
  for (const auto& r : rows) s += r.points;
  return s;
}

ScanReport marty_scan(const Expr& family, const ScanRegion& region,
                      const std::vector<int>& n_values, ScanOptions options) {
  const SphericalDerivative fsharp(family);
  const std::vector<Complex> pts = region.grid();
  ScanReport report;
  report.region = region;
  for (int n : n_values) {
    ScanRow row;
    row.n = n;
    row.points = static_cast<int>(pts.size());
    row.sup = -1.0;
    double at_argmax = -1.0;
    std::vector<double> values;
    if (options.keep_grid) values.reserve(pts.size());
    for (const Complex& z : pts) {
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = fsharp(n, z);
      } catch (const Error& err) {
        if (!recoverable(err)) throw;
        ++row.failed;
      }
      if (options.keep_grid) values.push_back(v);
      if (std::isnan(v)) continue;
      if (v > at_argmax * (1.0 + kArgmaxTieTolerance)) {
        at_argmax = v;
        row.argmax = z;
      }
      row.sup = std::max(row.sup, v);
    }
    if (row.sup < 0.0) row.sup = 0.0;
    report.rows.push_back(row);
    if (options.keep_grid) report.grid_values.push_back(std::move(values));
  }
  return report;
}

const char* to_string(NormalityVerdict v) {
  switch (v) {
    case NormalityVerdict::BoundedEvidence: return "BoundedEvidence";
    case NormalityVerdict::DivergentEvidence: return "DivergentEvidence";
    case NormalityVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

NormalityVerdict normality_evidence(const ScanReport& report) {
  const auto& rows = report.rows;
  if (rows.size() < 5)
    throw Error(ErrorKind::InvalidArgument, "normality evidence needs at least 5 values of n");
  bool increasing = true;
  double lo = rows.front().sup;
  double hi = rows.front().sup;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    increasing = increasing && rows[i].sup > rows[i - 1].sup;
    lo = std::min(lo, rows[i].sup);
    hi = std::max(hi, rows[i].sup);
  }
  if (increasing && rows.back().sup > 10.0 * rows.front().sup)
    return NormalityVerdict::DivergentEvidence;
  if (hi == 0.0 || (lo > 0.0 && hi / lo <= 2.0)) return NormalityVerdict::BoundedEvidence;
  return NormalityVerdict::Inconclusive;
}

}  // namespace nflab
