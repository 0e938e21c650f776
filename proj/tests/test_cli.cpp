#include "support/cli_runner.hpp"

#include <doctest.h>

using namespace clirun;

namespace {

const char* kDensityConfig = R"(seed = 7
[measure]
kind = line
radius = 2
h = 0.001
[scan]
a = 0, 0
m = 1
r0 = 0.5
ratio = 0.8
r_min = 0.05
threshold = 0.05
)";

}  // namespace

TEST_CASE("density command") {
  const fs::path dir = scratch_dir("cli_density");
  write_text(dir / "run.cfg", kDensityConfig);
  REQUIRE(run(dir, "density --config " + (dir / "run.cfg").string() + " --out " + (dir / "a.csv").string()) == 0);
  const std::string a = read_text(dir / "a.csv");
  CHECK(a.rfind("# gmt-lab density config_hash=", 0) == 0);
  CHECK(a.find("r,density,gap_ratio_so_far\n") != std::string::npos);
  CHECK(a.find("verdict=small-gap") != std::string::npos);
  CHECK(count_data_rows(a) == 11);

  REQUIRE(run(dir, "density --threads 4 --config " + (dir / "run.cfg").string() + " --out " + (dir / "b.csv").string()) == 0);
  CHECK(read_text(dir / "b.csv") == a);

  REQUIRE(run(dir, "density --seed 8 --config " + (dir / "run.cfg").string()) == 0);
  const std::string reseeded = read_text(dir / "stdout.txt");
  CHECK(reseeded.substr(0, reseeded.find('\n')) != a.substr(0, a.find('\n')));
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch_dir("cli_exit");
  CHECK(run(dir, "density --config " + (dir / "missing.cfg").string()) == 2);
  CHECK(run(dir, "frobnicate --config x") == 2);
  CHECK(run(dir, "density") == 2);
  CHECK(run(dir, "--help") == 0);

  write_text(dir / "bad_kind.cfg", "[measure]\nkind = teapot\n[scan]\na = 0, 0\n");
  CHECK(run(dir, "density --config " + (dir / "bad_kind.cfg").string()) == 2);
  CHECK(read_text(dir / "stderr.txt").find("teapot") != std::string::npos);

  write_text(dir / "guard.cfg",
             "[measure]\nkind = line\nradius = 1\nh = 0.001\n[pv]\nx = 0, 0\neps_top = 0.01\ncount = 8\n");
  CHECK(run(dir, "pv --config " + (dir / "guard.cfg").string()) == 3);

  write_text(dir / "dup.cfg", "[scan]\na = 1\na = 2\n");
  CHECK(run(dir, "density --config " + (dir / "dup.cfg").string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("generate writes measures and a manifest") {
  const fs::path dir = scratch_dir("cli_generate");
  write_text(dir / "cantor.cfg", "[entry]\nkind = cantor\ndepth = 7\n");
  REQUIRE(run(dir, "generate --config " + (dir / "cantor.cfg").string() + " --out " + (dir / "cantor.csv").string()) == 0);
  const std::string first = read_text(dir / "cantor.csv");
  CHECK(count_data_rows(first) == 16384);
  CHECK(read_text(dir / "cantor.csv.manifest").find("points=16384") != std::string::npos);
  REQUIRE(run(dir, "generate --config " + (dir / "cantor.cfg").string() + " --out " + (dir / "cantor.csv").string()) == 0);
  CHECK(read_text(dir / "cantor.csv") == first);

  write_text(dir / "many.cfg",
             "[entry]\nkind = line\nradius = 1\nh = 0.01\nname = line\n"
             "[entry]\nkind = cross\nh = 0.01\nextent = 0.5\n"
             "[entry]\nkind = cloud\ncount = 20\nseed = 4\n");
  REQUIRE(run(dir, "generate --config " + (dir / "many.cfg").string() + " --out " + (dir / "corpus").string()) == 0);
  CHECK(count_data_rows(read_text(dir / "corpus" / "line.csv")) == 201);
  CHECK(count_data_rows(read_text(dir / "corpus" / "cross.csv")) == 201);
  CHECK(fs::exists(dir / "corpus" / "cloud.csv"));
  const std::string manifest = read_text(dir / "corpus" / "manifest.txt");
  CHECK(manifest.find("kind=cross") != std::string::npos);

  write_text(dir / "none.cfg", "seed = 1\n");
  CHECK(run(dir, "generate --config " + (dir / "none.cfg").string() + " --out " + (dir / "x.csv").string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("metric and dmo commands") {
  const fs::path dir = scratch_dir("cli_metric");
  write_text(dir / "metric.cfg",
             "[metric]\nquery = f_ball\nr = 1\n[mu]\nkind = cloud\ncount = 10\nseed = 1\n[nu]\nkind = cloud\ncount = 10\nseed = 2\n");
  REQUIRE(run(dir, "metric --config " + (dir / "metric.cfg").string()) == 0);
  CHECK(read_text(dir / "stdout.txt").find("f_ball=") != std::string::npos);

  write_text(dir / "dmo.cfg",
             "[coefficients]\nkind = holder\ndim = 2\nalpha = 0.5\namplitude = 0.5\n"
             "[probes]\ncount = 4\nextent = 0.5\nseed = 3\n[dmo]\nradii = 0.4, 0.1\nper_axis = 8\n");
  REQUIRE(run(dir, "dmo --config " + (dir / "dmo.cfg").string()) == 0);
  const std::string out = read_text(dir / "stdout.txt");
  CHECK(out.find("r,omega,tau,tau_hat,kappa_hat,divergence_warning\n") != std::string::npos);
  CHECK(count_data_rows(out) == 2);
  fs::remove_all(dir);
}
