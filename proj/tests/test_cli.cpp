#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "ref_cache.hpp"
#include "surflab/error.hpp"
#include "surflab/idss.hpp"

using namespace surflab;
using namespace surflab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("surflab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::vector<std::string>* header) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) header->push_back(cell);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    rows.emplace_back();
    for (std::string cell; std::getline(ls, cell, ',');) rows.back().push_back(std::stod(cell));
  }
  return rows;
}

RunOptions at(const fs::path& dir) {
  RunOptions o;
  o.out = dir.string();
  return o;
}

std::string config_error(const json& cfg, const std::string& sub = "band") {
  try {
    execute(sub, cfg, at(scratch("err")));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) return e.what();
    return "other error";
  }
  return "accepted";
}

}  // namespace

TEST_CASE("config errors name the offending field") {
  CHECK(config_error(json::parse(R"({"geometry": {"M": 15}})")).find("geometry.M") != std::string::npos);
  CHECK(config_error(json::parse(R"({"geometry": {"d1": 3}})")).find("geometry.d1") != std::string::npos);
  CHECK(config_error(json::parse(R"({"run": {"theta_points": 10}})")).find("run.theta_points") !=
        std::string::npos);
  CHECK(config_error(json::parse(R"({"potential": {"distribution": {"kind": "normal"}}})"))
            .find("potential.distribution.kind") != std::string::npos);
  CHECK(config_error(json::parse(R"({"geometry": {"L": 4, "Ls": [4]}})")).find("geometry.Ls") !=
        std::string::npos);
  CHECK(config_error(json::parse(R"({"bogus": {}})")).find("bogus") != std::string::npos);
  CHECK(config_error(json::parse(R"({"geometry": {"M": 15}})")).find("/geometry/M") != std::string::npos);
  CHECK(config_error(json::parse(R"({"geometry": {"N": 4}})")).find("geometry.N") != std::string::npos);
  CHECK(config_error(json::parse(R"({"run": {"n_samples": 4}})")).find("run.n_samples") != std::string::npos);
  CHECK(config_error(json::parse(R"({"output": {"formats": ["xml"]}})")).find("output.formats") !=
        std::string::npos);
  CHECK(config_error(json::parse(R"({"run": {"energies": [-1.0]}})"), "idss").find("run.n_samples") ==
        std::string::npos);
  CHECK(config_error(json::parse(R"({"run": {"x2": "N", "energies": [-1.0]}})"), "idss").find("run.x2") !=
        std::string::npos);
}

TEST_CASE("band of the free operator is the discrete cosine band") {
  const fs::path dir = scratch("band");
  const json cfg = json::parse(R"({"geometry": {"M": 8}, "potential": {"surface": false}, "run": {"theta_points": 9}})");
  const RunOutcome r = execute("band", cfg, at(dir));
  CHECK(r.passed);
  std::vector<std::string> head;
  const auto rows = read_csv(dir / "band.csv", &head);
  REQUIRE(head.size() == 8);
  CHECK(head[0] == "theta1");
  REQUIRE(rows.size() == 9);
  const double ex2 = 2.0 * (1.0 - std::cos(std::numbers::pi / 9.0));  // Dirichlet x2 ground level
  for (const auto& row : rows) {
    CHECK(row[1] == doctest::Approx(2.0 * (1.0 - std::cos(row[0])) + ex2).epsilon(1e-12));
    CHECK(row[3] == doctest::Approx(row[4]).epsilon(1e-12));
  }
  const json side = json::parse(slurp(dir / "band.json"));
  CHECK(side["subcommand"] == "band");
  CHECK(side["config"] == cfg);
  CHECK(side["passed"] == true);
  CHECK(side["files"].size() == 1);
}

TEST_CASE("reruns and worker counts give byte-identical data") {
  const json cfg = json::parse(R"({
    "geometry": {"M": 12, "Ls": [6, 10]},
    "run": {"seed": 9, "energies": {"from": -1.3, "to": -0.7, "count": 4}, "n_samples": 40}
  })");
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  RunOptions oa = at(a), ob = at(b);
  oa.workers = 1;
  ob.workers = 3;
  execute("idss", cfg, oa);
  execute("idss", cfg, ob);
  CHECK(slurp(a / "idss.csv") == slurp(b / "idss.csv"));
  RunOptions oc = at(b);
  oc.seed = 10;
  execute("idss", cfg, oc);
  CHECK(slurp(a / "idss.csv") != slurp(b / "idss.csv"));
  CHECK(json::parse(slurp(b / "idss.json"))["overrides"]["seed"] == 10);
}

TEST_CASE("cached references reproduce fresh ones exactly") {
  const fs::path dir = scratch("cache");
  const PeriodicPotential U = periodic_potential(default_model());
  const GridSpec cell = build_grid(1, 1, 1, 1, 12);
  RefCache cache(dir.string());
  const auto fresh = cache.get("k", cell, U, 14);
  const auto hit = cache.get("k", cell, U, 14);
  CHECK(cache.misses() == 1);
  CHECK(cache.hits() == 1);
  CHECK(hit->E0 == fresh->E0);
  CHECK(hit->residual == fresh->residual);
  CHECK(hit->psi0 == fresh->psi0);
  CHECK(hit->grid == fresh->grid);
  RefCache(dir.string()).get("other", cell, U, 14);
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 2);

  const json cfg = json::parse(R"({"geometry": {"M": 12, "Ls": [4, 8]}})");
  const fs::path a = scratch("cache_a"), b = scratch("cache_b");
  setenv("SURFLAB_CACHE_DIR", dir.string().c_str(), 1);
  execute("gap", cfg, at(a));
  execute("gap", cfg, at(b));
  unsetenv("SURFLAB_CACHE_DIR");
  CHECK(json::parse(slurp(b / "gap.json"))["cache"]["hits"] == 1);
  CHECK(slurp(a / "gap.csv") == slurp(b / "gap.csv"));
}

TEST_CASE("selftest exits zero and reports each invariant") {
  const fs::path dir = scratch("selftest");
  const fs::path cfg = dir / "selftest.json";
  std::ofstream(cfg) << R"({"run": {"criteria": [1, 5]}})";
  RunOptions o = at(dir);
  o.config_path = cfg.string();
  CHECK(run_file("selftest", o) == 0);
  const std::string csv = slurp(dir / "selftest.csv");
  CHECK(csv.rfind("id,name,passed\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  o.config_path = (dir / "missing.json").string();
  CHECK(run_file("selftest", o) == 2);
}
