#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nflab/expr.hpp"
#include "nflab/marty.hpp"
#include "nflab/simplex.hpp"

namespace nflab {

/// A p-tuple of families f_1..f_p and the rescaling schedule.
struct RescalingInput {
  std::vector<Expr> families;
  int j0 = 1;  // 1-based index of the family known to be non-normal
  std::vector<int> n_list;
  // One point z_n* per entry of n_list; empty selects the argmax of
  // f_{j0,n}# over |z| <= 1/sqrt(n).
  std::vector<Complex> zstar;

  void validate() const;
};

struct RescalingOptions {
  int coarse_radial = 64;
  int coarse_angular = 256;
  SimplexOptions refine{};
  int auto_radial = 64;
  int auto_angular = 256;
  // Polar grid for the bound g# < 2 on |zeta| <= R/4.
  int check_radial = 32;
  int check_angular = 128;
};

/// Quantities of the rescaling construction for one n.
struct RescalingStep {
  int n = 0;
  Complex z_star{0.0, 0.0};
  double fsharp_star = 0.0;
  double r = 0.0;
  double M = 0.0;
  Complex z_max{0.0, 0.0};
  double rho = 0.0;
  double R = 0.0;
};

/// (1 - |z|^2 / r^2) * sum_j f_{j,n}#(z); NaN where any f_j# is undefined.
double rescaling_objective(const std::vector<SphericalDerivative>& fsharp, int n, double r,
                           Complex z);

RescalingStep compute_step(const RescalingInput& input, int n,
                           const RescalingOptions& options = {});

struct CheckResult {
  std::string name;
  bool passed = false;
  // Margin by which the inequality holds (negative on failure); for the
  // normalisation check, the absolute residual.
  double value = 0.0;
};

struct GridSample {
  Complex zeta;
  int j;  // 1-based
  double gsharp;
};

struct VerificationReport {
  int n = 0;
  std::vector<CheckResult> checks;  // (a) .. (e) in order
  std::vector<double> gsharp_at_zero;
  std::vector<GridSample> grid;  // samples behind check (e)

  bool all_passed() const;
};

/// The rescaled family member zeta -> f_{j,n}(z_max + rho * zeta).
Expr rescaled(const Expr& family, const RescalingStep& step);

VerificationReport verify_step(const RescalingInput& input, const RescalingStep& step,
                               const RescalingOptions& options = {});

struct SequenceEntry {
  int n = 0;
  std::optional<RescalingStep> step;
  std::optional<VerificationReport> verification;
  std::string error;
};

struct SequenceReport {
  std::vector<SequenceEntry> entries;
  bool rM_increasing = false;
  bool rM_growth = false;  // last / first >= 10
  bool rho_decreasing = false;
  bool R_increasing = false;

  std::vector<RescalingStep> steps() const;
  bool all_verified() const;
};

/// Runs compute_step and verify_step for every n. Needs >= 5 entries.
SequenceReport run_sequence(const RescalingInput& input, const RescalingOptions& options = {});

enum class LimitClass { ConvergentToFinite, ConvergentToInfinity, NotYetConverged };

const char* to_string(LimitClass c);

struct ComponentLimit {
  int j = 0;  // 1-based
  // sup over the probe disk of chi(g_{j,n}, g_{j,n'}) for consecutive steps.
  std::vector<double> chordal_gaps;
  // min |g_{j,n}| over the probe disk, per step.
  std::vector<double> min_modulus;
  double gsharp_at_zero = 0.0;  // last step
  int failed_points = 0;
  LimitClass classification = LimitClass::NotYetConverged;
};

struct LimitReport {
  double probe_radius = 1.0;
  std::vector<ComponentLimit> components;
};

inline constexpr double kInfinityThreshold = 1e3;
inline constexpr double kFiniteGapTolerance = 1e-2;

/// Needs >= 3 steps. A component is ConvergentToInfinity when every sampled
/// |g| exceeds 1e3 at the last step and min |g| grows over the last three
/// steps; ConvergentToFinite when the last chordal gap is <= 1e-2.
LimitReport limit_probe(const RescalingInput& input, const std::vector<RescalingStep>& steps,
                        double probe_radius, int radial = 16, int angular = 64);

}  // namespace nflab
