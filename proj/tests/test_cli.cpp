#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nflab/cli.hpp"
#include "nflab/serialize.hpp"

using namespace nflab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "nflab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nflab_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_toml(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / (name + ".toml");
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("format_metric trims trailing zeros", "[cli]") {
  CHECK(format_metric(std::acos(-1.0) / 2) == "1.570796326794897");
  CHECK(format_metric(std::acos(-1.0) / 4) == "0.785398163397448");
  CHECK(format_metric(1.0) == "1");
  CHECK(format_metric(0.0) == "0");
  CHECK(format_metric(-0.0) == "0");
  CHECK(format_metric(0.5) == "0.5");
}

TEST_CASE("parse_point accepts literals only", "[cli]") {
  CHECK(parse_point("inf").is_infinite());
  CHECK(parse_point("-1") == SpherePoint(-1.0));
  CHECK(parse_point("0.5+2*i") == SpherePoint(0.5, 2.0));
  CHECK_THROWS(parse_point("z"));
  CHECK_THROWS(parse_point("sqrt(n)"));
  CHECK_THROWS(parse_point("1 +"));
}

TEST_CASE("metric command", "[cli]") {
  auto r = run({"metric", "0", "inf"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "chi=1\nsigma=1.570796326794897\n");
  r = run({"metric", "0", "0"});
  CHECK(r.out == "chi=0\nsigma=0\n");
  r = run({"metric", "0", "-1"});
  CHECK(r.out == "chi=0.707106781186547\nsigma=0.785398163397448\n");
  CHECK(run({"metric", "0", "1 +"}).code == kExitUsage);
  CHECK(run({"metric", "0", "z"}).code == kExitUsage);
  CHECK(run({"metric", "0"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
}

TEST_CASE("sphder command", "[cli]") {
  const auto r = run({"sphder", "n*z + sqrt(n)", "-0.1", "--n", "100"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "fsharp=100\n");
  CHECK(run({"sphder", "re(z)", "0"}).code == kExitUsage);
}

TEST_CASE("scan command", "[cli]") {
  const fs::path out = scratch("scan");
  auto r = run({"scan", "cara-counterexample", "--out", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("verdict=DivergentEvidence") != std::string::npos);
  CHECK(fs::exists(out / "scan_cara-counterexample_f.csv"));
  CHECK(fs::exists(out / "scan_cara-counterexample_f.json"));
  CHECK(slurp(out / "scan_cara-counterexample_f.csv").rfind("n,sup,argmax_re,argmax_im\n", 0) == 0);

  r = run({"scan", "zalcman-counterexample", "--out", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("verdict=DivergentEvidence") != std::string::npos);

  const fs::path cfg = write_toml("nflab_constant", "name = \"constant\"\nf = \"7\"\nn_list = [1, 2, 3, 4, 5]\n");
  r = run({"scan", "--config", cfg.string(), "--out", out.string(), "--grid", "8,16"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("verdict=BoundedEvidence") != std::string::npos);

  CHECK(run({"scan", "cara-counterexample", "--which", "a", "--out", out.string(), "--n-list", "1,2"}).code == kExitOk);
  CHECK(run({"scan", "zalcman-counterexample", "--which", "a", "--out", out.string()}).code == kExitUsage);
  CHECK(run({"scan", "cara-counterexample", "--grid", "8"}).code == kExitUsage);
  CHECK(run({"scan", "cara-counterexample", "--n-list", "3,x"}).code == kExitUsage);
  CHECK(run({"scan"}).code == kExitUsage);
}

TEST_CASE("scan reports degraded evaluation", "[cli]") {
  // The centre needs nine retries; it is one of five grid points.
  const fs::path cfg = write_toml("nflab_degraded", "name = \"degraded\"\nf = \"z^9/z^9\"\nn_list = [1]\n"
                                                    "[grid]\nradial = 2\nangular = 4\n");
  const auto r = run({"scan", "--config", cfg.string(), "--out", scratch("degraded").string()});
  CHECK(r.code == kExitDegraded);
}

TEST_CASE("rescale command", "[cli]") {
  const fs::path out = scratch("rescale");
  auto r = run({"rescale", "zalcman-counterexample", "--j0", "1", "--out", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("component 2: ConvergentToInfinity") != std::string::npos);
  CHECK(fs::exists(out / "rescale_zalcman-counterexample_j1.json"));
  CHECK(fs::exists(out / "rescale_zalcman-counterexample_j1_n256_gsharp.csv"));

  r = run({"rescale", "zalcman-counterexample", "--j0", "2", "--out", out.string()});
  CHECK(r.out.find("component 1: ConvergentToInfinity") != std::string::npos);

  r = run({"rescale", "cara-counterexample", "--j0", "1", "--auto-zstar", "--out", out.string()});
  CHECK(r.code == kExitOk);
  const json doc = json::parse(slurp(out / "rescale_cara-counterexample_j1.json"));
  for (const auto& e : doc["sequence"]["entries"]) {
    CHECK(e["verification"]["all_passed"] == true);
    CHECK(std::abs(e["verification"]["gsharp_at_zero"][0].get<double>() - 1.0) <= 1e-9);
  }

  CHECK(run({"rescale", "zalcman-counterexample", "--out", out.string()}).code == kExitUsage);
  CHECK(run({"rescale", "zalcman-counterexample", "--j0", "3", "--out", out.string()}).code == kExitUsage);
  CHECK(run({"rescale", "cara-counterexample", "--j0", "1", "--zstar-list", "0,0", "--out", out.string()}).code ==
        kExitUsage);
}

TEST_CASE("rescale with explicit z* list", "[cli]") {
  const fs::path cfg = write_toml("nflab_zstar", "name = \"zstar\"\nf = \"n*z + sqrt(n)\"\n"
                                                 "n_list = [100, 400, 1600, 6400, 25600]\n");
  const auto r = run({"rescale", "--config", cfg.string(), "--zstar-list", "-0.1,-0.05,-0.025,-0.0125,-0.00625",
                      "--out", scratch("zstar").string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("n=100 r=0.30000000000000004") != std::string::npos);
}

TEST_CASE("separation and crossratio commands", "[cli]") {
  const fs::path out = scratch("sep");
  auto r = run({"separation", "cara-counterexample", "--out", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("min=0.9689461462593") != std::string::npos);
  CHECK(fs::exists(out / "separation_cara-counterexample.csv"));
  CHECK(run({"separation", "zalcman-counterexample", "--out", out.string()}).code == kExitUsage);

  r = run({"crossratio", "cara-counterexample", "--out", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("cross_ratio_violations=0") != std::string::npos);
}

TEST_CASE("scenario command", "[cli]") {
  auto r = run({"scenario", "list"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "cara-counterexample\nzalcman-counterexample\n");

  const fs::path out = scratch("scenario");
  r = run({"scenario", "run", "cara-counterexample", "--out", out.string()});
  CHECK(r.code == kExitOk);
  const json doc = json::parse(slurp(out / "scenario_cara-counterexample.json"));
  const double pi = std::acos(-1.0);
  for (const auto& s : doc["report"]["separation"])
    CHECK(std::abs(s["min"].get<double>() - pi * pi * pi / 32) < 1e-12);
  CHECK(doc["report"]["meromorphic"]["c"] == false);
  CHECK(doc["report"]["theorem_tension"] == false);

  CHECK(run({"scenario", "run", "zalcman-counterexample", "--out", out.string()}).code == kExitOk);
  CHECK(run({"scenario", "run", "missing.toml"}).code == kExitUsage);
  CHECK(run({"scenario", "explode"}).code == kExitUsage);
}

TEST_CASE("outputs are byte-identical across runs", "[cli]") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const fs::path& dir : {a, b}) {
    REQUIRE(run({"rescale", "zalcman-counterexample", "--j0", "1", "--out", dir.string()}).code == kExitOk);
    REQUIRE(run({"scenario", "run", "cara-counterexample", "--out", dir.string()}).code == kExitOk);
    REQUIRE(run({"scan", "cara-counterexample", "--out", dir.string()}).code == kExitOk);
  }
  int files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
    ++files;
  }
  CHECK(files > 10);
}
