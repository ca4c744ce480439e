#include "nflab/serialize.hpp"

#include <charconv>
#include <cmath>

namespace nflab {

namespace {

// NaN and infinities become null.
json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json complex_json(Complex z) { return json::array({number(z.real()), number(z.imag())}); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json to_json(const ScanReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"sup", number(row.sup)},
                    {"argmax", complex_json(row.argmax)},
                    {"failed", row.failed},
                    {"points", row.points}});
  }
  json out = {{"region",
               {{"center", complex_json(r.region.center)},
                {"radius", r.region.radius},
                {"radial", r.region.radial},
                {"angular", r.region.angular}}},
              {"rows", rows}};
  if (r.rows.size() >= 5) out["verdict"] = to_string(normality_evidence(r));
  return out;
}

json to_json(const RescalingStep& s) {
  return {{"n", s.n},
          {"z_star", complex_json(s.z_star)},
          {"fsharp_star", number(s.fsharp_star)},
          {"r", number(s.r)},
          {"M", number(s.M)},
          {"z_max", complex_json(s.z_max)},
          {"rho", number(s.rho)},
          {"R", number(s.R)}};
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", number(c.value)}});
  json g0 = json::array();
  for (double v : r.gsharp_at_zero) g0.push_back(number(v));
  return {{"n", r.n}, {"all_passed", r.all_passed()}, {"checks", checks}, {"gsharp_at_zero", g0}};
}

json to_json(const SequenceReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json j = {{"n", e.n}};
    if (e.step) j["step"] = to_json(*e.step);
    if (e.verification) j["verification"] = to_json(*e.verification);
    if (!e.error.empty()) j["error"] = e.error;
    entries.push_back(j);
  }
  return {{"entries", entries},
          {"trends",
           {{"rM_increasing", r.rM_increasing},
            {"rM_growth_10x", r.rM_growth},
            {"rho_decreasing", r.rho_decreasing},
            {"R_increasing", r.R_increasing}}},
          {"all_verified", r.all_verified()}};
}

json to_json(const LimitReport& r) {
  json comps = json::array();
  for (const auto& c : r.components) {
    json gaps = json::array();
    for (double g : c.chordal_gaps) gaps.push_back(number(g));
    json mods = json::array();
    for (double m : c.min_modulus) mods.push_back(number(m));
    comps.push_back({{"j", c.j},
                     {"classification", to_string(c.classification)},
                     {"chordal_gaps", gaps},
                     {"min_modulus", mods},
                     {"gsharp_at_zero", number(c.gsharp_at_zero)},
                     {"failed_points", c.failed_points}});
  }
  return {{"probe_radius", r.probe_radius}, {"components", comps}};
}

json to_json(const SeparationResult& r) {
  return {{"n", r.n},
          {"min", number(r.min)},
          {"argmin", complex_json(r.argmin)},
          {"holds", r.holds},
          {"failed", r.failed},
          {"points", r.points}};
}

json to_json(const OmissionResult& r) {
  return {{"n", r.n},
          {"violations", r.violations},
          {"first_violation", r.violations ? complex_json(r.first_violation) : json(nullptr)},
          {"failed", r.failed},
          {"cross_ratio_checked", r.cross_ratio_checked},
          {"cross_ratio_violations", r.cross_ratio_violations}};
}

json to_json(const LiouvilleReport& r) {
  return {{"points", r.points},
          {"checked", r.checked},
          {"skipped_infinite", r.skipped_infinite},
          {"skipped_below", r.skipped_below},
          {"failed", r.failed},
          {"max_identity_residual", number(r.max_identity_residual)},
          {"min_bound_margin", r.checked ? number(r.min_bound_margin) : json(nullptr)},
          {"identity_ok", r.identity_ok},
          {"bound_ok", r.bound_ok}};
}

json to_json(const ScenarioReport& r) {
  json sep = json::array();
  for (const auto& s : r.separation) sep.push_back(to_json(s));
  json om = json::array();
  for (const auto& o : r.omission) om.push_back(to_json(o));
  json out = {{"separation", sep},
              {"separation_holds", r.separation_holds},
              {"omission", om},
              {"omission_holds", r.omission_holds},
              {"meromorphic", {{"a", r.a_meromorphic}, {"b", r.b_meromorphic}, {"c", r.c_meromorphic}}},
              {"marty", to_json(r.marty)},
              {"verdict", r.verdict ? json(to_string(*r.verdict)) : json(nullptr)},
              {"theorem_tension", r.theorem_tension},
              {"notes", r.notes}};
  return out;
}

void write_scan_csv(std::ostream& os, const ScanReport& r) {
  os << "n,sup,argmax_re,argmax_im\n";
  for (const auto& row : r.rows)
    os << row.n << ',' << format_double(row.sup) << ',' << format_double(row.argmax.real())
       << ',' << format_double(row.argmax.imag()) << '\n';
}

void write_grid_csv(std::ostream& os, const std::vector<GridSample>& samples) {
  os << "zeta_re,zeta_im,j,gsharp\n";
  for (const auto& s : samples)
    os << format_double(s.zeta.real()) << ',' << format_double(s.zeta.imag()) << ',' << s.j
       << ',' << format_double(s.gsharp) << '\n';
}

void write_separation_csv(std::ostream& os, const std::vector<SeparationResult>& rows) {
  os << "n,min,argmin_re,argmin_im,holds\n";
  for (const auto& r : rows)
    os << r.n << ',' << format_double(r.min) << ',' << format_double(r.argmin.real()) << ','
       << format_double(r.argmin.imag()) << ',' << (r.holds ? "true" : "false") << '\n';
}

}  // namespace nflab
