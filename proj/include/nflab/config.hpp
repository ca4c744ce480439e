#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nflab/caratheodory.hpp"
#include "nflab/expr.hpp"
#include "nflab/marty.hpp"

namespace nflab {

/// A scenario as written in a TOML file:
///
///   name = "example"
///   f = "exp(n*z)"                    # family under test
///   a = "0"                           # exceptional functions, optional
///   b = "inf"                         #   (all three or none)
///   c = "-exp(i*n*im(z))"
///   families = ["exp(n*z)"]           # tuple for rescaling, default [f]
///   epsilon = 0.96                    # required with a, b, c
///   n_list = [2, 4, 8]
///   out = "out"
///
///   [domain]
///   center = [0.0, 0.0]
///   radius = 0.5
///
///   [grid]
///   radial = 64
///   angular = 256
///
/// Unknown keys and tables are rejected.
struct ScenarioConfig {
  std::string name;
  std::string f;
  std::optional<std::string> a, b, c;
  std::vector<std::string> families;
  std::optional<double> epsilon;
  std::vector<int> n_list;
  std::string out = "out";
  Complex center{0.0, 0.0};
  double radius = 0.5;
  int radial = 64;
  int angular = 256;

  bool has_exceptional() const { return a.has_value(); }
  ScanRegion domain() const { return {center, radius, radial, angular}; }
  std::vector<Expr> family_exprs() const;
  FamilyScenario scenario() const;  // requires a, b, c and epsilon
  void validate() const;
};

ScenarioConfig parse_config(std::string_view toml);
ScenarioConfig load_config(const std::string& path);

std::vector<std::string> builtin_names();
std::optional<ScenarioConfig> builtin_config(std::string_view name);

/// A built-in name or a path to a TOML file. Throws Error(Config).
ScenarioConfig resolve_config(const std::string& name_or_path);

}  // namespace nflab
