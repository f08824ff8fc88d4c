#define DOCTEST_CONFIG_IMPLEMENT
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

static std::string g_binary;

namespace {
int run_cli(const std::string& args) {
  std::string cmd = g_binary + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path tmpdir() {
  fs::path d = fs::temp_directory_path() / "slipchannel_cli_test";
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write_config(const fs::path& dir, const std::string& name,
                      const std::string& extra = "") {
  fs::path p = dir / name;
  std::ofstream f(p);
  f << "[params]\nmu = 1\nalpha = 1\ngamma = 1\nbeta_s = 1\nbeta_b = 1\n"
       "L = 1\nH = 0.5\n"
       "[pressure]\np_in = -100\np_out = 0\np0 = 100\n"
       "[grid]\nn_x = 12\nn_y = 6\nn_s = 12\n"
       "[time]\ndt = 1e-3\nt_end = 0.01\nepsilon = 1e-3\n"
       "[output]\nstate_cadence = 2\n"
    << extra;
  return p;
}
}  // namespace

TEST_CASE("validate accepts a good config and rejects bad ones") {
  fs::path d = tmpdir();
  fs::path good = write_config(d, "good.txt");
  CHECK(run_cli("validate " + good.string()) == 0);

  fs::path bad = d / "bad.txt";
  std::ofstream(bad) << "[params]\nmu = -1\n";
  CHECK(run_cli("validate " + bad.string()) == 1);

  fs::path mal = d / "mal.txt";
  std::ofstream(mal) << "[params]\nnot_a_key = 1\n";
  CHECK(run_cli("validate " + mal.string()) == 1);

  CHECK(run_cli("validate " + (d / "missing.txt").string()) == 2);
}

TEST_CASE("run produces the documented directory layout") {
  fs::path d = tmpdir();
  fs::path cfg = write_config(d, "run.txt");
  fs::path out = d / "out";
  REQUIRE(run_cli("run " + cfg.string() + " -o " + out.string()) == 0);
  CHECK(fs::exists(out / "config.txt"));
  CHECK(fs::exists(out / "timeseries.csv"));
  CHECK(fs::exists(out / "energy.csv"));
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "states" / "index.txt"));
  std::string header = slurp(out / "timeseries.csv").substr(0, 200);
  CHECK(header.rfind("t,min_h,argmin_x,q_in,q_out,flux_residual,energy_total,"
                     "penalty_deviation,h3_seminorm",
                     0) == 0);
  std::string summary = slurp(out / "summary.json");
  CHECK(summary.find("\"termination\"") != std::string::npos);
  CHECK(summary.find("\"config_digest\"") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  fs::path d = tmpdir();
  fs::path cfg = write_config(d, "rep.txt");
  REQUIRE(run_cli("run " + cfg.string() + " -o " + (d / "a").string()) == 0);
  REQUIRE(run_cli("run " + cfg.string() + " -o " + (d / "b").string()) == 0);
  CHECK(slurp(d / "a" / "timeseries.csv") == slurp(d / "b" / "timeseries.csv"));
  CHECK(slurp(d / "a" / "energy.csv") == slurp(d / "b" / "energy.csv"));
  CHECK(slurp(d / "a" / "summary.json") == slurp(d / "b" / "summary.json"));
  CHECK(slurp(d / "a" / "states" / "000000.txt") ==
        slurp(d / "b" / "states" / "000000.txt"));
}

TEST_CASE("penalty sweep emits sweep.csv with one row per value") {
  fs::path d = tmpdir();
  fs::path cfg = write_config(d, "sw.txt");
  fs::path out = d / "sweep";
  REQUIRE(run_cli("sweep " + cfg.string() + " --axis penalty --values 1e-2,1e-3 -o " +
                  out.string()) == 0);
  std::string csv = slurp(out / "sweep.csv");
  CHECK(csv.find("value,termination") == 0);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 3);  // header + 2 rows
  CHECK(fs::exists(out / "run_000" / "summary.json"));
  CHECK(fs::exists(out / "run_001" / "summary.json"));
}

TEST_CASE("sweep honors SLIPCHANNEL_THREADS") {
  fs::path d = tmpdir();
  fs::path cfg = write_config(d, "swt.txt");
  fs::path out = d / "sweep_threads";
  std::string cmd = "SLIPCHANNEL_THREADS=2 " + g_binary + " sweep " + cfg.string() +
                    " --axis penalty --values 1e-2,1e-3 -o " + out.string() +
                    " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(out / "sweep.csv"));
}

TEST_CASE("diagnose writes diagnostics.json next to the run") {
  fs::path d = tmpdir();
  fs::path cfg = write_config(d, "diag.txt");
  fs::path out = d / "diagout";
  REQUIRE(run_cli("run " + cfg.string() + " -o " + out.string()) == 0);
  REQUIRE(run_cli("diagnose " + out.string()) == 0);
  std::string j = slurp(out / "diagnostics.json");
  CHECK(j.find("\"weakform\"") != std::string::npos);
  CHECK(j.find("\"contradiction\"") != std::string::npos);
  CHECK(j.find("\"h3_budget\"") != std::string::npos);
  CHECK(j.find("\"testpair_checks\"") != std::string::npos);
}

TEST_CASE("diagnose on a missing directory exits 2") {
  CHECK(run_cli("diagnose /nonexistent/run/dir") == 2);
}

int main_impl(int argc, char** argv) {
  doctest::Context ctx;
  int kept = 1;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (!a.empty() && a[0] != '-' && g_binary.empty() && fs::exists(a)) {
      g_binary = a;
    } else {
      argv[kept++] = argv[i];
    }
  }
  ctx.applyCommandLine(kept, argv);
  if (g_binary.empty()) {
    std::fprintf(stderr, "usage: test_cli <path-to-slipchannel-binary>\n");
    return 2;
  }
  return ctx.run();
}

int main(int argc, char** argv) { return main_impl(argc, argv); }
