#include "nflab/caratheodory.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nflab/error.hpp"

namespace nflab {

namespace {

bool recoverable(const Error& e) {
  return e.kind() == ErrorKind::Indeterminate || e.kind() == ErrorKind::EssentialSingularity;
}

}  // namespace

void FamilyScenario::validate() const {
  if (!(epsilon > 0.0) || epsilon > kMaxSeparation)
    throw Error(ErrorKind::InvalidArgument,
                "epsilon must lie in (0, (pi/2)^3]; larger values can never be met");
  domain.validate();
  if (n_list.empty()) throw Error(ErrorKind::InvalidArgument, "n_list is empty");
  for (int n : n_list)
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
}

SeparationResult min_separation(const FamilyScenario& scenario, int n) {
  scenario.validate();
  SeparationResult res;
  res.n = n;
  res.min = std::numeric_limits<double>::infinity();
  const auto pts = scenario.domain.grid();
  res.points = static_cast<int>(pts.size());
  for (const Complex& z : pts) {
    try {
      const SpherePoint p(z);
      const double s = separation_product(eval(scenario.a, n, p), eval(scenario.b, n, p),
                                          eval(scenario.c, n, p));
      if (s < res.min) {
        res.min = s;
        res.argmin = z;
      }
    } catch (const Error& e) {
      if (!recoverable(e)) throw;
      ++res.failed;
    }
  }
  if (10 * res.failed > res.points)
    throw Error(ErrorKind::MinUnreliable,
                "more than 10% of the grid failed to evaluate for n = " + std::to_string(n));
  res.holds = res.min >= scenario.epsilon;
  return res;
}

Expr cross_ratio(const Expr& f, const Expr& a, const Expr& b, const Expr& c) {
  const Expr fa = fold(a);
  const Expr fb = fold(b);
  const Expr fc = fold(c);
  Expr cr;
  if (fa.is_infinity_constant()) {
    cr = (fc - fb) / (f - fb);
  } else if (fb.is_infinity_constant()) {
    cr = (f - fa) / (fc - fa);
  } else if (fc.is_infinity_constant()) {
    cr = (f - fa) / (f - fb);
  } else {
    cr = ((f - fa) / (f - fb)) * ((fc - fb) / (fc - fa));
  }
  return fold(cr);
}

LiouvilleReport liouville_bound_check(const Expr& a, const Expr& b, double epsilon,
                                      const ScanRegion& region, int n) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  constexpr double pi = std::numbers::pi;
  const double pi2 = pi * pi;
  const double bound_factor = pi2 * pi2 * pi2 / (4.0 * epsilon * epsilon);

  LiouvilleReport rep;
  rep.min_bound_margin = std::numeric_limits<double>::infinity();
  for (const Complex& z : region.grid()) {
    ++rep.points;
    SpherePoint va, vb;
    try {
      va = eval(a, n, SpherePoint(z));
      vb = eval(b, n, SpherePoint(z));
    } catch (const Error& e) {
      if (!recoverable(e)) throw;
      ++rep.failed;
      continue;
    }
    if (va.is_infinite() || vb.is_infinite()) {
      ++rep.skipped_infinite;
      continue;
    }
    if (spherical(va, vb) * pi2 < epsilon) {
      ++rep.skipped_below;
      continue;
    }
    ++rep.checked;
    const double lhs = (1.0 + std::norm(va.value())) * (1.0 + std::norm(vb.value()));
    const double diff2 = std::norm(va.value() - vb.value());
    const double chi = chordal(va, vb);
    const double identity_rhs = diff2 / (chi * chi);
    rep.max_identity_residual =
        std::max(rep.max_identity_residual, std::abs(lhs - identity_rhs) / lhs);
    const double bound_rhs = bound_factor * diff2;
    rep.min_bound_margin = std::min(rep.min_bound_margin, (bound_rhs - lhs) / bound_rhs);
  }
  rep.identity_ok = rep.max_identity_residual <= 1e-10;
  rep.bound_ok = rep.checked == 0 || rep.min_bound_margin >= 0.0;
  return rep;
}

OmissionResult omission_check(const FamilyScenario& scenario, int n) {
  OmissionResult res;
  res.n = n;
  const Expr cr = cross_ratio(scenario.f, scenario.a, scenario.b, scenario.c);
  const SpherePoint zero(0.0), one(1.0), inf = SpherePoint::infinity();
  for (const Complex& z : scenario.domain.grid()) {
    const SpherePoint p(z);
    try {
      const SpherePoint fv = eval(scenario.f, n, p);
      const bool hit = chordal(fv, eval(scenario.a, n, p)) <= kOmissionThreshold ||
                       chordal(fv, eval(scenario.b, n, p)) <= kOmissionThreshold ||
                       chordal(fv, eval(scenario.c, n, p)) <= kOmissionThreshold;
      if (hit) {
        if (res.violations++ == 0) res.first_violation = z;
        continue;
      }
      const SpherePoint w = eval(cr, n, p);
      ++res.cross_ratio_checked;
      if (chordal(w, zero) <= kOmissionThreshold || chordal(w, one) <= kOmissionThreshold ||
          chordal(w, inf) <= kOmissionThreshold)
        ++res.cross_ratio_violations;
    } catch (const Error& e) {
      if (!recoverable(e)) throw;
      ++res.failed;
    }
  }
  return res;
}

ScenarioReport scenario_check(const FamilyScenario& scenario) {
  scenario.validate();
  ScenarioReport rep;
  rep.a_meromorphic = scenario.a.holomorphic();
  rep.b_meromorphic = scenario.b.holomorphic();
  rep.c_meromorphic = scenario.c.holomorphic();

  rep.separation_holds = true;
  rep.omission_holds = true;
  for (int n : scenario.n_list) {
    try {
      rep.separation.push_back(min_separation(scenario, n));
      rep.separation_holds = rep.separation_holds && rep.separation.back().holds;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MinUnreliable) throw;
      rep.separation_holds = false;
      rep.notes.push_back(e.what());
    }
    rep.omission.push_back(omission_check(scenario, n));
    const auto& om = rep.omission.back();
    rep.omission_holds = rep.omission_holds && om.violations == 0 && om.cross_ratio_violations == 0;
    if (om.violations > 0)
      rep.notes.push_back("n = " + std::to_string(n) + ": f meets an exceptional function at " +
                          std::to_string(om.violations) + " grid points");
  }

  if (scenario.f.holomorphic()) {
    rep.marty = marty_scan(scenario.f, scenario.domain, scenario.n_list);
    if (rep.marty.rows.size() >= 5) rep.verdict = normality_evidence(rep.marty);
  } else {
    rep.notes.push_back("f is not meromorphic; no Marty scan");
  }

  const bool meromorphic = rep.a_meromorphic && rep.b_meromorphic && rep.c_meromorphic;
  const bool divergent = rep.verdict == NormalityVerdict::DivergentEvidence;
  rep.theorem_tension = rep.separation_holds && rep.omission_holds && meromorphic && divergent;
  if (rep.theorem_tension)
    rep.notes.push_back(
        "theorem tension: separated meromorphic exceptional functions are omitted, yet the "
        "spherical derivatives diverge");
  if (divergent && !meromorphic) {
    std::string which;
    if (!rep.a_meromorphic) which += " a";
    if (!rep.b_meromorphic) which += " b";
    if (!rep.c_meromorphic) which += " c";
    rep.notes.push_back("exceptional function(s)" + which +
                        " not meromorphic (re/im/conj); divergence does not contradict the "
                        "normality criterion");
  }
  return rep;
}

}  // namespace nflab
