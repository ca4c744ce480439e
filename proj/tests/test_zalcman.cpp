#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "nflab/error.hpp"
#include "nflab/zalcman.hpp"
#include "support.hpp"

using namespace nflab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RescalingInput pair_input(int j0, std::vector<int> n_list) {
  return {{parse("n*z + sqrt(n)"), parse("-n*z + sqrt(n)")}, j0, std::move(n_list), {}};
}

RescalingInput exp_input(std::vector<int> n_list) {
  return {{parse("exp(n*z)")}, 1, std::move(n_list), {}};
}

// Closed-form objective for the pair n z + sqrt(n), -n z + sqrt(n).
double pair_objective(int n, double r, Complex z) {
  return (1.0 - std::norm(z) / (r * r)) *
         (testing::oracle_linear_sharp(n, z) + testing::oracle_linear_sharp(n, -z));
}

// exp(n z)# = n / (2 cosh(n Re z)).
double exp_objective(int n, double r, Complex z) {
  return (1.0 - std::norm(z) / (r * r)) * n / (2.0 * std::cosh(n * z.real()));
}

template <class F>
double brute_force_max(F objective, double r, int radial, int angular) {
  double best = objective(Complex(0.0, 0.0));
  for (int i = 1; i < radial; ++i)
    for (int k = 0; k < angular; ++k)
      best = std::max(best, objective(std::polar(r * i / (radial - 1), 2.0 * std::numbers::pi * k / angular)));
  return best;
}

void check_formulas(const RescalingStep& s) {
  REQUIRE_THAT(s.r, WithinRel(1.0 / std::sqrt(s.fsharp_star) + 2.0 * std::abs(s.z_star), 1e-12));
  const double zm = std::abs(s.z_max);
  REQUIRE_THAT(s.rho, WithinRel((s.r * s.r - zm * zm) / (s.r * s.r * s.M), 1e-12));
  REQUIRE_THAT(s.R, WithinRel((s.r - zm) / s.rho, 1e-12));
  REQUIRE(std::abs(s.z_star) / s.r <= 0.5);
  REQUIRE(zm < s.r);
  REQUIRE(s.rho > 0.0);
  REQUIRE(s.R > 0.0);
}

}  // namespace

TEST_CASE("compute_step with explicit z*", "[zalcman]") {
  RescalingInput in{{parse("n*z + sqrt(n)")}, 1, {100}, {Complex(-0.1, 0.0)}};
  const RescalingStep s = compute_step(in, 100);
  CHECK_THAT(s.fsharp_star, WithinRel(100.0, 1e-12));
  CHECK_THAT(s.r, WithinRel(0.3, 1e-12));
  check_formulas(s);
  // Only one family: the weighted peak sits just inside -1/10.
  CHECK(s.M >= (1.0 - 0.01 / 0.09) * 100.0);
}

TEST_CASE("compute_step rejects a vanishing spherical derivative", "[zalcman]") {
  RescalingInput in{{parse("7")}, 1, {1, 2, 3, 4, 5}, {}};
  try {
    compute_step(in, 3);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleAtZStar);
  }
}

TEST_CASE("input validation", "[zalcman]") {
  CHECK_THROWS_AS((RescalingInput{{}, 1, {1}, {}}.validate()), Error);
  CHECK_THROWS_AS((RescalingInput{{parse("z")}, 2, {1}, {}}.validate()), Error);
  CHECK_THROWS_AS((RescalingInput{{parse("z")}, 1, {3, 2}, {}}.validate()), Error);
  CHECK_THROWS_AS((RescalingInput{{parse("z")}, 1, {1, 2}, {0.0}}.validate()), Error);
  CHECK_THROWS_AS(run_sequence(exp_input({10})), Error);
}

TEST_CASE("pair with auto z*: M matches a finer brute-force grid", "[zalcman]") {
  const auto in = pair_input(1, {256, 1024, 4096});
  for (int n : in.n_list) {
    const RescalingStep s = compute_step(in, n);
    check_formulas(s);
    CHECK_THAT(s.fsharp_star, WithinRel(double(n), 1e-9));
    CHECK_THAT(std::abs(s.z_star + 1.0 / std::sqrt(n)), WithinAbs(0.0, 1e-12));
    const double lower = pair_objective(n, s.r, s.z_star);
    CHECK(s.M >= lower);
    const double oracle = brute_force_max([&](Complex z) { return pair_objective(n, s.r, z); }, s.r, 256, 1024);
    CHECK_THAT(s.M, WithinRel(oracle, 1e-4));
    CHECK(s.M >= oracle * (1.0 - 1e-12));
  }
}

TEST_CASE("exp(n z): closed-form step", "[zalcman]") {
  const auto in = exp_input({10, 20, 50});
  for (int n : in.n_list) {
    const RescalingStep s = compute_step(in, n);
    check_formulas(s);
    // z* = 0, M = n/2 at z = 0, so rho = 2/n and R = sqrt(n/2).
    CHECK(s.z_star == Complex(0.0, 0.0));
    CHECK_THAT(s.M, WithinRel(n / 2.0, 1e-12));
    CHECK_THAT(s.rho, WithinRel(2.0 / n, 1e-12));
    CHECK_THAT(s.R, WithinRel(std::sqrt(n / 2.0), 1e-9));
    const double oracle = brute_force_max([&](Complex z) { return exp_objective(n, s.r, z); }, s.r, 256, 1024);
    CHECK_THAT(s.M, WithinRel(oracle, 1e-12));
  }
}

TEST_CASE("verify_step passes every check", "[zalcman]") {
  SECTION("exp(n z) at n = 50") {
    const auto in = exp_input({50});
    const VerificationReport v = verify_step(in, compute_step(in, 50));
    for (const auto& c : v.checks) CHECK(c.passed);
    REQUIRE(v.gsharp_at_zero.size() == 1);
    CHECK_THAT(v.gsharp_at_zero[0], WithinAbs(1.0, 1e-9));
  }
  SECTION("pair, both choices of j0") {
    for (int j0 : {1, 2}) {
      const auto in = pair_input(j0, {1024});
      const VerificationReport v = verify_step(in, compute_step(in, 1024));
      CHECK(v.all_passed());
      CHECK_THAT(v.gsharp_at_zero[0] + v.gsharp_at_zero[1], WithinAbs(1.0, 1e-9));
      CHECK(v.checks.size() == 5);
      CHECK(v.grid.size() == 2 * (1 + 31 * 128));
    }
  }
}

TEST_CASE("verify_step reports failures instead of throwing", "[zalcman]") {
  const auto in = exp_input({50});
  RescalingStep s = compute_step(in, 50);
  s.z_star = Complex(0.6 * s.r, 0.0);  // breaks (a)
  s.rho *= 0.5;                         // breaks (d)
  const VerificationReport v = verify_step(in, s);
  CHECK_FALSE(v.checks[0].passed);
  CHECK_FALSE(v.checks[3].passed);
  CHECK_FALSE(v.all_passed());
  CHECK(v.checks[3].value > 1e-9);
}

TEST_CASE("rescaled family matches its defining composition", "[zalcman]") {
  const auto in = pair_input(1, {256});
  const RescalingStep s = compute_step(in, 256);
  const Expr g1 = rescaled(in.families[0], s);
  const Expr g2 = rescaled(in.families[1], s);
  testing::Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const Complex zeta = rng.in_disk(0.0, 4.0);
    const Complex z = s.z_max + s.rho * zeta;
    const Complex v1 = eval(g1, 256, SpherePoint(zeta)).value();
    const Complex v2 = eval(g2, 256, SpherePoint(zeta)).value();
    CHECK(std::abs(v1 - (256.0 * z + 16.0)) < 1e-10);
    // Second component: g = -f + 2 sqrt(n) along the same rescaling.
    CHECK(std::abs(v2 - (-v1 + 32.0)) < 1e-10);
  }
}

TEST_CASE("sequences trend as the construction requires", "[zalcman]") {
  SECTION("exp(n z), n = 10..100") {
    const SequenceReport rep = run_sequence(exp_input({10, 20, 30, 40, 50, 60, 70, 80, 90, 100}));
    CHECK(rep.all_verified());
    CHECK(rep.rho_decreasing);
    CHECK(rep.R_increasing);
    CHECK(rep.rM_increasing);
    for (const auto& s : rep.steps()) check_formulas(s);
  }
  SECTION("n z + sqrt(n), n = 100..10000") {
    const SequenceReport rep =
        run_sequence({{parse("n*z + sqrt(n)")}, 1, {100, 400, 1000, 2500, 10000}, {}});
    CHECK(rep.all_verified());
    CHECK(rep.rM_increasing);
    for (const auto& s : rep.steps()) CHECK(s.r * s.M >= 0.75 * std::sqrt(double(s.n)));
  }
}

TEST_CASE("limit probe classifies the pair components", "[zalcman]") {
  for (int j0 : {1, 2}) {
    // 2 sqrt(n) must clear the 1e3 threshold at the last step.
    const auto in = pair_input(j0, {4096, 16384, 65536, 262144, 1048576});
    const SequenceReport rep = run_sequence(in);
    const LimitReport lim = limit_probe(in, rep.steps(), 1.0);
    REQUIRE(lim.components.size() == 2);
    const auto& driven = lim.components[static_cast<std::size_t>(j0 - 1)];
    const auto& other = lim.components[static_cast<std::size_t>(2 - j0)];
    CHECK(driven.classification == LimitClass::ConvergentToFinite);
    CHECK(other.classification == LimitClass::ConvergentToInfinity);
    CHECK(other.min_modulus.back() > kInfinityThreshold);
  }
  CHECK_THROWS_AS(limit_probe(pair_input(1, {256}), {}, 1.0), Error);
}

TEST_CASE("limit probe for exp(n z) sees a nonconstant limit", "[zalcman]") {
  const auto in = exp_input({10, 20, 40, 80, 160});
  const SequenceReport rep = run_sequence(in);
  const LimitReport lim = limit_probe(in, rep.steps(), 1.0);
  REQUIRE(lim.components.size() == 1);
  const auto& c = lim.components[0];
  CHECK(c.classification == LimitClass::ConvergentToFinite);
  CHECK_THAT(c.gsharp_at_zero, WithinAbs(1.0, 1e-9));
  // g_n(zeta) = exp(2 zeta) for every n, so consecutive gaps vanish.
  for (double gap : c.chordal_gaps) CHECK(gap < 1e-9);
}
