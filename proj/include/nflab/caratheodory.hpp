#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nflab/expr.hpp"
#include "nflab/marty.hpp"

namespace nflab {

/// A family f_n with exceptional functions a_n, b_n, c_n (the constant inf
/// is allowed), a separation bound epsilon and a sampled domain.
struct FamilyScenario {
  Expr f;
  Expr a;
  Expr b;
  Expr c;
  double epsilon = 0.0;  // in (0, (pi/2)^3]
  ScanRegion domain;
  std::vector<int> n_list;

  void validate() const;
};

struct SeparationResult {
  int n = 0;
  double min = 0.0;
  Complex argmin{0.0, 0.0};
  bool holds = false;  // min >= epsilon
  int failed = 0;
  int points = 0;
};

/// Minimum of separation_product(a_n, b_n, c_n) over the domain grid.
/// Throws MinUnreliable when more than 10% of the grid fails to evaluate.
SeparationResult min_separation(const FamilyScenario& scenario, int n);

/// ((f - a)/(f - b)) * ((c - b)/(c - a)), with the factor containing a
/// constant-infinity argument replaced by its limit 1. Folded.
Expr cross_ratio(const Expr& f, const Expr& a, const Expr& b, const Expr& c);

struct LiouvilleReport {
  int points = 0;
  int checked = 0;
  int skipped_infinite = 0;
  int skipped_below = 0;  // sigma(a, b) * pi^2 < epsilon
  int failed = 0;
  double max_identity_residual = 0.0;  // relative
  double min_bound_margin = 0.0;       // min of (rhs - lhs) / rhs over checked points
  bool identity_ok = true;             // residual <= 1e-10
  bool bound_ok = true;
};

/// At each grid point with pi^2 sigma(a, b) >= epsilon checks
///   (1 + |a|^2)(1 + |b|^2) = |a - b|^2 / chi(a, b)^2   and
///   (1 + |a|^2)(1 + |b|^2) <= pi^6 / (4 epsilon^2) |a - b|^2.
LiouvilleReport liouville_bound_check(const Expr& a, const Expr& b, double epsilon,
                                      const ScanRegion& region, int n);

inline constexpr double kOmissionThreshold = 1e-9;

struct OmissionResult {
  int n = 0;
  int violations = 0;  // grid points where chi(f, a|b|c) <= 1e-9
  int failed = 0;
  Complex first_violation{0.0, 0.0};
  // Cross-ratio values at grid points where f omits a, b, c.
  int cross_ratio_checked = 0;
  int cross_ratio_violations = 0;  // chi-distance to 0, 1 or inf <= 1e-9
};

OmissionResult omission_check(const FamilyScenario& scenario, int n);

struct ScenarioReport {
  std::vector<SeparationResult> separation;
  std::vector<OmissionResult> omission;
  ScanReport marty;
  std::optional<NormalityVerdict> verdict;  // absent for fewer than 5 n
  bool a_meromorphic = true;
  bool b_meromorphic = true;
  bool c_meromorphic = true;
  bool separation_holds = false;
  bool omission_holds = false;
  bool theorem_tension = false;
  std::vector<std::string> notes;
};

ScenarioReport scenario_check(const FamilyScenario& scenario);

}  // namespace nflab
