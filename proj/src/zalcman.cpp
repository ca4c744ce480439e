#include "nflab/zalcman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nflab/error.hpp"

namespace nflab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNormalisationTolerance = 1e-9;

std::vector<SphericalDerivative> sharps(const std::vector<Expr>& families) {
  std::vector<SphericalDerivative> out;
  out.reserve(families.size());
  for (const Expr& f : families) out.emplace_back(f);
  return out;
}

Complex find_zstar(const RescalingInput& input, int n, const RescalingOptions& options) {
  if (!input.zstar.empty()) {
    const auto it = std::find(input.n_list.begin(), input.n_list.end(), n);
    if (it == input.n_list.end())
      throw Error(ErrorKind::InvalidArgument, "explicit z* given but n is not in n_list");
    return input.zstar[static_cast<std::size_t>(it - input.n_list.begin())];
  }
  const ScanRegion disk{{0.0, 0.0}, 1.0 / std::sqrt(static_cast<double>(n)),
                        options.auto_radial, options.auto_angular};
  return marty_scan(input.families[static_cast<std::size_t>(input.j0 - 1)], disk, {n})
      .rows.front()
      .argmax;
}

}  // namespace

void RescalingInput::validate() const {
  if (families.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one family");
  if (j0 < 1 || j0 > static_cast<int>(families.size()))
    throw Error(ErrorKind::InvalidArgument, "j0 must lie in 1..p");
  if (n_list.empty()) throw Error(ErrorKind::InvalidArgument, "n_list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw Error(ErrorKind::InvalidArgument, "n_list must be strictly increasing");
  }
  if (!zstar.empty() && zstar.size() != n_list.size())
    throw Error(ErrorKind::InvalidArgument, "z* list must match n_list in length");
}

double rescaling_objective(const std::vector<SphericalDerivative>& fsharp, int n, double r,
                           Complex z) {
  const double weight = 1.0 - std::norm(z) / (r * r);
  double sum = 0.0;
  for (const auto& fs : fsharp) {
    try {
      sum += fs(n, z);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Indeterminate && e.kind() != ErrorKind::EssentialSingularity)
        throw;
      return kNaN;
    }
  }
  return weight * sum;
}

RescalingStep compute_step(const RescalingInput& input, int n, const RescalingOptions& options) {
  input.validate();
  const auto fsharp = sharps(input.families);

  RescalingStep step;
  step.n = n;
  step.z_star = find_zstar(input, n, options);
  try {
    step.fsharp_star = fsharp[static_cast<std::size_t>(input.j0 - 1)](n, step.z_star);
  } catch (const Error& e) {
    throw Error(ErrorKind::PoleAtZStar, std::string("f# undefined at z*: ") + e.what());
  }
  if (!std::isfinite(step.fsharp_star) || !(step.fsharp_star > 0.0))
    throw Error(ErrorKind::PoleAtZStar, "f# at z* must be finite and positive");

  step.r = 1.0 / std::sqrt(step.fsharp_star) + 2.0 * std::abs(step.z_star);
  const double r = step.r;
  auto objective = [&](Complex z) { return rescaling_objective(fsharp, n, r, z); };

  // Stage 1: z* itself, then the coarse polar grid. Near-equal values keep
  // the earlier candidate, so symmetric peaks resolve towards z*.
  const ScanRegion disk{{0.0, 0.0}, r, options.coarse_radial, options.coarse_angular};
  struct Candidate {
    Complex z;
    double value;
  };
  std::vector<Candidate> candidates;
  if (const double v = objective(step.z_star); !std::isnan(v)) candidates.push_back({step.z_star, v});
  for (const Complex& z : disk.grid()) {
    const double v = objective(z);
    if (!std::isnan(v)) candidates.push_back({z, v});
  }
  if (candidates.empty())
    throw Error(ErrorKind::MaximizationFailed, "objective undefined on the whole coarse grid");

  std::size_t primary = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (candidates[i].value > candidates[primary].value * (1.0 + kArgmaxTieTolerance)) primary = i;
  std::vector<Candidate> starts{candidates[primary]};
  candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(primary));

  // Stage 2: simplex refinement from the best few candidates.
  constexpr std::size_t kStarts = 3;
  const std::size_t extra = std::min(kStarts - 1, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(extra),
                    candidates.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  starts.insert(starts.end(), candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(extra));

  Candidate best = starts.front();
  const double step_size = r / (options.coarse_radial - 1);
  auto eigen_objective = [&](const Eigen::Vector2d& x) { return objective({x.x(), x.y()}); };
  for (const Candidate& start : starts) {
    const SimplexResult res = maximize_on_disk(eigen_objective, Eigen::Vector2d::Zero(), r,
                                               {start.z.real(), start.z.imag()}, step_size, options.refine);
    if (res.value > best.value * (1.0 + kArgmaxTieTolerance)) best = {Complex(res.argmax.x(), res.argmax.y()), res.value};
  }

  step.z_max = best.z;
  step.M = best.value;
  if (!(step.M > 0.0))
    throw Error(ErrorKind::MaximizationFailed, "maximum of the rescaling objective is not positive");
  const double zm = std::abs(step.z_max);
  step.rho = (r * r - zm * zm) / (r * r * step.M);
  step.R = (r - zm) / step.rho;
  return step;
}

Expr rescaled(const Expr& family, const RescalingStep& step) {
  return substitute_affine(bind(family, step.n), step.z_max, step.rho);
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerificationReport verify_step(const RescalingInput& input, const RescalingStep& step,
                               const RescalingOptions& options) {
  VerificationReport rep;
  rep.n = step.n;
  const double zs = std::abs(step.z_star);
  const double zm = std::abs(step.z_max);

  const double a = 0.5 - zs / step.r;
  rep.checks.push_back({"a: |z*|/r <= 1/2", a >= 0.0, a});

  const double b = step.r * step.M - 0.75 * std::sqrt(step.fsharp_star);
  rep.checks.push_back({"b: r*M >= (3/4) sqrt(f#(z*))", b >= 0.0, b});

  const double c = 2.0 / (step.r * step.M) - step.rho / (step.r - zm);
  rep.checks.push_back({"c: rho/(r-|z_max|) <= 2/(r*M)", c >= 0.0, c});

  std::vector<SphericalDerivative> gsharp;
  for (const Expr& f : input.families) gsharp.emplace_back(rescaled(f, step));

  double sum = 0.0;
  bool defined = true;
  for (const auto& g : gsharp) {
    double v = kNaN;
    try {
      v = g(step.n, {0.0, 0.0});
    } catch (const Error&) {
      defined = false;
    }
    rep.gsharp_at_zero.push_back(v);
    sum += v;
  }
  const double d = std::abs(sum - 1.0);
  rep.checks.push_back({"d: sum_j g_j#(0) = 1", defined && d <= kNormalisationTolerance,
                        defined ? d : kNaN});

  const ScanRegion disk{{0.0, 0.0}, step.R / 4.0, options.check_radial, options.check_angular};
  double worst = 0.0;
  bool all_defined = true;
  for (const Complex& zeta : disk.grid()) {
    for (std::size_t j = 0; j < gsharp.size(); ++j) {
      double v = kNaN;
      try {
        v = gsharp[j](step.n, zeta);
        worst = std::max(worst, v);
      } catch (const Error&) {
        all_defined = false;
      }
      rep.grid.push_back({zeta, static_cast<int>(j) + 1, v});
    }
  }
  rep.checks.push_back({"e: g_j#(zeta) < 2 on |zeta| <= R/4", all_defined && worst < 2.0,
                        2.0 - worst});
  return rep;
}

std::vector<RescalingStep> SequenceReport::steps() const {
  std::vector<RescalingStep> out;
  for (const auto& e : entries)
    if (e.step) out.push_back(*e.step);
  return out;
}

bool SequenceReport::all_verified() const {
  return std::all_of(entries.begin(), entries.end(), [](const SequenceEntry& e) {
    return e.step && e.verification && e.verification->all_passed();
  });
}

SequenceReport run_sequence(const RescalingInput& input, const RescalingOptions& options) {
  input.validate();
  if (input.n_list.size() < 5)
    throw Error(ErrorKind::InvalidArgument, "a rescaling sequence needs at least 5 values of n");
  SequenceReport rep;
  for (int n : input.n_list) {
    SequenceEntry entry;
    entry.n = n;
    try {
      entry.step = compute_step(input, n, options);
      entry.verification = verify_step(input, *entry.step, options);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw;
      entry.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    rep.entries.push_back(std::move(entry));
  }

  const auto steps = rep.steps();
  if (steps.size() >= 2) {
    rep.rM_increasing = rep.rho_decreasing = rep.R_increasing = true;
    for (std::size_t i = 1; i < steps.size(); ++i) {
      rep.rM_increasing = rep.rM_increasing &&
                          steps[i].r * steps[i].M > steps[i - 1].r * steps[i - 1].M;
      rep.rho_decreasing = rep.rho_decreasing && steps[i].rho < steps[i - 1].rho;
      rep.R_increasing = rep.R_increasing && steps[i].R > steps[i - 1].R;
    }
    rep.rM_growth = steps.back().r * steps.back().M >= 10.0 * steps.front().r * steps.front().M;
  }
  return rep;
}

const char* to_string(LimitClass c) {
  switch (c) {
    case LimitClass::ConvergentToFinite: return "ConvergentToFinite";
    case LimitClass::ConvergentToInfinity: return "ConvergentToInfinity";
    case LimitClass::NotYetConverged: return "NotYetConverged";
  }
  return "NotYetConverged";
}

LimitReport limit_probe(const RescalingInput& input, const std::vector<RescalingStep>& steps,
                        double probe_radius, int radial, int angular) {
  input.validate();
  if (steps.size() < 3)
    throw Error(ErrorKind::InvalidArgument, "limit probe needs at least 3 steps");
  const ScanRegion disk{{0.0, 0.0}, probe_radius, radial, angular};
  const std::vector<Complex> pts = disk.grid();

  LimitReport rep;
  rep.probe_radius = probe_radius;
  for (std::size_t j = 0; j < input.families.size(); ++j) {
    ComponentLimit comp;
    comp.j = static_cast<int>(j) + 1;

    // values[s][k]: g_{j,n_s}(zeta_k); nullopt where undefined.
    std::vector<std::vector<std::optional<SpherePoint>>> values;
    for (const auto& step : steps) {
      const Expr g = rescaled(input.families[j], step);
      std::vector<std::optional<SpherePoint>> row;
      double min_mod = std::numeric_limits<double>::infinity();
      for (const Complex& zeta : pts) {
        try {
          const SpherePoint v = eval(g, step.n, SpherePoint(zeta));
          min_mod = std::min(min_mod, v.abs());
          row.emplace_back(v);
        } catch (const Error&) {
          ++comp.failed_points;
          row.emplace_back(std::nullopt);
        }
      }
      comp.min_modulus.push_back(min_mod);
      values.push_back(std::move(row));
    }
    for (std::size_t s = 1; s < values.size(); ++s) {
      double gap = 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k)
        if (values[s][k] && values[s - 1][k])
          gap = std::max(gap, chordal(*values[s][k], *values[s - 1][k]));
      comp.chordal_gaps.push_back(gap);
    }
    try {
      comp.gsharp_at_zero = SphericalDerivative(rescaled(input.families[j], steps.back()))(
          steps.back().n, {0.0, 0.0});
    } catch (const Error&) {
      comp.gsharp_at_zero = kNaN;
    }

    const auto& mm = comp.min_modulus;
    const std::size_t m = mm.size();
    const bool growing = mm[m - 1] > mm[m - 2] && mm[m - 2] > mm[m - 3];
    if (mm.back() > kInfinityThreshold && growing) {
      comp.classification = LimitClass::ConvergentToInfinity;
    } else if (comp.chordal_gaps.back() <= kFiniteGapTolerance) {
      comp.classification = LimitClass::ConvergentToFinite;
    }
    rep.components.push_back(std::move(comp));
  }
  return rep;
}

}  // namespace nflab
