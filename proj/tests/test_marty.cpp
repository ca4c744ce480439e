#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

#include "nflab/error.hpp"
#include "nflab/marty.hpp"
#include "support.hpp"

using namespace nflab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double sharp(const char* text, int n, Complex z) {
  return spherical_derivative({parse(text), n}, SpherePoint(z));
}

std::vector<int> one_to(int last) {
  std::vector<int> v(static_cast<std::size_t>(last));
  std::iota(v.begin(), v.end(), 1);
  return v;
}

}  // namespace

TEST_CASE("spherical derivative examples", "[marty]") {
  for (int n : {1, 4, 9, 100, 10000})
    CHECK_THAT(sharp("n*z + sqrt(n)", n, -1.0 / std::sqrt(n)), WithinRel(double(n), 1e-12));
  CHECK(sharp("7", 3, {0.2, 0.1}) == 0.0);
  CHECK_THAT(sharp("1/z", 1, 0.0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(sharp("exp(n*z)", 3, 0.0), WithinAbs(1.5, 1e-15));
  // Double pole: 1/z^2 has (1/f)# = |2z|/(1+|z|^4) = 0 at z = 0.
  CHECK(sharp("1/z^2", 1, 0.0) == 0.0);
  CHECK_THROWS_AS(sharp("re(z)", 1, 0.0), Error);
  CHECK_THROWS_AS(spherical_derivative({parse("z"), 1}, SpherePoint::infinity()), Error);
}

TEST_CASE("exp(n z) spherical derivative agrees with finite differences", "[marty]") {
  const int n = 3;
  const double h = 1e-6;
  for (Complex z : {Complex(0.0, 0.0), Complex(0.1, 0.3), Complex(-0.2, -0.1)}) {
    const Complex d = (std::exp(double(n) * (z + h)) - std::exp(double(n) * (z - h))) / (2 * h);
    const double fd = std::abs(d) / (1.0 + std::norm(std::exp(double(n) * z)));
    CHECK_THAT(sharp("exp(n*z)", n, z), WithinRel(fd, 1e-8));
  }
}

TEST_CASE("closed form for n z + sqrt(n)", "[marty][property]") {
  testing::Rng rng(1);
  const SphericalDerivative fs(parse("n*z + sqrt(n)"));
  for (int i = 0; i < 10000; ++i) {
    const int n = rng.integer(1, 10000);
    const Complex z = rng.in_disk(0.0, 2.0);
    REQUIRE_THAT(fs(n, z), WithinRel(testing::oracle_linear_sharp(n, z), 1e-10));
  }
}

TEST_CASE("direct and reciprocal routes agree near poles", "[marty][property]") {
  testing::Rng rng(2);
  const char* rational[] = {"1/z", "1/(z - 0.5)", "(z+1)/(z^2 - 0.25)", "n/(z^3 + i)", "z^2/(n*z - 1)"};
  const Complex poles[] = {0.0, 0.5, 0.5, std::polar(1.0, -std::numbers::pi / 6), 1.0};
  for (std::size_t k = 0; k < std::size(rational); ++k) {
    const SphericalDerivative fs(parse(rational[k]));
    for (int i = 0; i < 200; ++i) {
      const double dist = std::pow(10.0, rng.uniform(-6.0, -1.0));
      const Complex z = poles[k] + std::polar(dist, rng.uniform(0.0, 6.28));
      const auto a = fs.direct(1, z);
      const auto b = fs.via_reciprocal(1, z);
      if (!a || !b) continue;
      INFO(rational[k] << " at " << z);
      REQUIRE_THAT(*a, WithinRel(*b, 1e-8));
    }
  }
}

TEST_CASE("rescaling identity g#(zeta) = |rho| f#(c + rho zeta)", "[marty][property]") {
  testing::Rng rng(3);
  const char* families[] = {"n*z + sqrt(n)", "exp(n*z)", "1/(z^2 + n)", "z^3 - n*z"};
  for (const char* text : families) {
    const Expr f = parse(text);
    for (int i = 0; i < 100; ++i) {
      const int n = rng.integer(1, 20);
      const Complex c = rng.in_disk(0.0, 0.5);
      const Complex rho = rng.in_disk(0.0, 0.3);
      const Complex zeta = rng.in_disk(0.0, 1.0);
      if (std::abs(rho) < 1e-4) continue;
      const Expr g = substitute_affine(bind(f, n), c, rho);
      const double lhs = spherical_derivative({g, n}, SpherePoint(zeta));
      const double rhs = std::abs(rho) * spherical_derivative({f, n}, SpherePoint(c + rho * zeta));
      INFO(text << " n=" << n);
      REQUIRE_THAT(lhs, WithinRel(rhs, 1e-10));
    }
  }
}

TEST_CASE("polar grid layout", "[marty]") {
  const ScanRegion r{{1.0, -1.0}, 2.0, 3, 4};
  const auto g = r.grid();
  REQUIRE(g.size() == 1 + 2 * 4);
  CHECK(g[0] == Complex(1.0, -1.0));
  CHECK_THAT(std::abs(g[1] - Complex(2.0, -1.0)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(g[2] - Complex(1.0, 0.0)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(g.back() - Complex(1.0, -3.0)), WithinAbs(0.0, 1e-15));
  CHECK_THROWS_AS((ScanRegion{0.0, -1.0, 4, 4}.validate()), Error);
  CHECK_THROWS_AS((ScanRegion{0.0, 1.0, 1, 4}.validate()), Error);
}

TEST_CASE("marty scan of exp(n z) diverges", "[marty]") {
  const ScanReport rep = marty_scan(parse("exp(n*z)"), {0.0, 0.5, 64, 256}, one_to(20));
  REQUIRE(rep.rows.size() == 20);
  CHECK(rep.rows[9].n == 10);
  CHECK(rep.rows[9].sup >= 5.0);
  for (const auto& row : rep.rows) {
    CHECK_THAT(row.sup, WithinRel(row.n / 2.0, 1e-12));
    CHECK(row.failed == 0);
    CHECK(row.points == 1 + 63 * 256);
  }
  CHECK(normality_evidence(rep) == NormalityVerdict::DivergentEvidence);
}

TEST_CASE("marty scan of bounded families", "[marty]") {
  const ScanReport flat = marty_scan(parse("7"), {0.0, 0.5, 16, 32}, one_to(6));
  for (const auto& row : flat.rows) CHECK(row.sup == 0.0);
  CHECK(normality_evidence(flat) == NormalityVerdict::BoundedEvidence);

  const ScanReport shift = marty_scan(parse("z + 1/n"), {0.0, 0.5, 32, 64}, one_to(10));
  for (const auto& row : shift.rows) CHECK(row.sup <= 1.0);
  CHECK(normality_evidence(shift) == NormalityVerdict::BoundedEvidence);
}

TEST_CASE("marty scan brackets the peak of n z + sqrt(n)", "[marty]") {
  // 65 rings put radius 1/4 on the grid, 256 angles put pi on it.
  const ScanReport rep = marty_scan(parse("n*z + sqrt(n)"), {0.0, 0.5, 65, 256}, {16});
  CHECK(rep.rows[0].sup >= 16.0 - 1e-12);
  CHECK_THAT(std::abs(rep.rows[0].argmax + 0.25), WithinAbs(0.0, 1e-12));
}

TEST_CASE("marty scan records failures without aborting", "[marty]") {
  // The removable-looking quotient needs more than eight retries at 0.
  const ScanReport rep = marty_scan(parse("z^9/z^9 + z"), {0.0, 0.5, 4, 8}, {1}, {true});
  CHECK(rep.rows[0].failed == 1);
  CHECK(rep.rows[0].points == 25);
  REQUIRE(rep.grid_values.size() == 1);
  CHECK(std::isnan(rep.grid_values[0][0]));
  // Elsewhere f = 1 + z, whose f# peaks at z = -1/2 with value 1/(1 + 1/4).
  CHECK_THAT(rep.rows[0].sup, WithinRel(0.8, 1e-12));
}

TEST_CASE("normality verdict rules", "[marty]") {
  auto report = [](std::vector<double> sups) {
    ScanReport r;
    int n = 1;
    for (double s : sups) r.rows.push_back({n++, s, {}, 0, 1});
    return r;
  };
  CHECK(normality_evidence(report({1, 2, 3, 4, 11})) == NormalityVerdict::DivergentEvidence);
  CHECK(normality_evidence(report({1, 2, 3, 4, 10})) == NormalityVerdict::Inconclusive);
  CHECK(normality_evidence(report({1, 2, 2, 4, 20})) == NormalityVerdict::Inconclusive);
  CHECK(normality_evidence(report({1, 1.5, 2, 1, 1})) == NormalityVerdict::BoundedEvidence);
  CHECK(normality_evidence(report({0, 0, 0, 0, 0})) == NormalityVerdict::BoundedEvidence);
  CHECK_THROWS_AS(normality_evidence(report({1, 2, 3, 4})), Error);
}
