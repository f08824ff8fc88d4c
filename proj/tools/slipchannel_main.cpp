#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "slipchannel/io.hpp"
#include "slipchannel/testpair.hpp"

using namespace slipchannel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

SimulationConfig load_and_validate(const std::string& path, bool& ok, int& rc) {
  ok = false;
  rc = kExitOk;
  SimulationConfig cfg;
  try {
    cfg = parse_config_file(path);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = kExitIo;
    return cfg;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = kExitInvalid;
    return cfg;
  }
  auto errs = validate_config(cfg);
  if (!errs.empty()) {
    for (const auto& e : errs) std::cerr << "invalid: " << e << "\n";
    rc = kExitInvalid;
    return cfg;
  }
  ok = true;
  return cfg;
}

int cmd_run(const std::string& config, const std::string& outdir) {
  bool ok;
  int rc;
  SimulationConfig cfg = load_and_validate(config, ok, rc);
  if (!ok) return rc;
  if (auto adv = cfl_advisory(cfg)) std::cerr << "advisory: " << *adv << "\n";
  RunResult res = run_simulation(cfg);
  try {
    write_run_dir(outdir, cfg, res);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  std::cout << "termination: " << res.termination;
  if (res.contact)
    std::cout << " (t = " << res.contact_time << ", x = " << res.contact_x << ")";
  std::cout << "\n";
  return res.termination == "failure" ? kExitInvalid : kExitOk;
}

int sweep_threads() {
  if (const char* env = std::getenv("SLIPCHANNEL_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

int cmd_sweep(const std::string& config, const std::string& axis,
              std::vector<double> values, const std::string& outdir) {
  bool ok;
  int rc;
  SimulationConfig base = load_and_validate(config, ok, rc);
  if (!ok) return rc;
  if (axis != "pressure" && axis != "penalty") {
    std::cerr << "error: --axis must be 'pressure' or 'penalty'\n";
    return kExitInvalid;
  }
  std::vector<SimulationConfig> cfgs;
  for (double v : values) {
    SimulationConfig c = base;
    if (axis == "pressure") {
      // value = multiplier on both signals and p0
      for (auto& x : c.pressure.p_in.v) x *= v;
      for (auto& x : c.pressure.p_out.v) x *= v;
      c.pressure.p0 *= v;
    } else {
      c.time.epsilon = v;
    }
    cfgs.push_back(c);
  }
  std::vector<RunResult> results(cfgs.size());
  int nthreads = std::min<int>(sweep_threads(), static_cast<int>(cfgs.size()));
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (size_t k = next.fetch_add(1); k < cfgs.size(); k = next.fetch_add(1))
        results[k] = run_simulation(cfgs[k]);
    });
  }
  for (auto& th : pool) th.join();

  try {
    std::filesystem::create_directories(outdir);
    std::ofstream f(outdir + "/sweep.csv", std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot write sweep.csv");
    f << "value,termination,contact_time,contact_x,flux_dev_integral,max_flux_residual,"
         "audit_defect\n";
    for (size_t k = 0; k < cfgs.size(); ++k) {
      const RunResult& r = results[k];
      std::vector<double> qs;
      for (size_t j = 1; j < r.series.size(); ++j) qs.push_back(r.series[j].q_out);
      double fdev = flux_deviation_integral(qs, cfgs[k].time.dt);
      char buf[256];
      std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    values[k], r.termination.c_str(), r.contact_time, r.contact_x, fdev,
                    r.max_flux_residual, r.audit.max_abs_defect);
      f << buf;
      char sub[64];
      std::snprintf(sub, sizeof sub, "/run_%03zu", k);
      write_run_dir(outdir + sub, cfgs[k], r);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int cmd_validate(const std::string& config) {
  bool ok;
  int rc;
  SimulationConfig cfg = load_and_validate(config, ok, rc);
  if (!ok) return rc;
  if (auto adv = cfl_advisory(cfg)) std::cout << "advisory: " << *adv << "\n";
  std::cout << "valid (digest " << config_digest(cfg) << ")\n";
  return kExitOk;
}

int cmd_diagnose(const std::string& rundir, double horizon) {
  LoadedRun run;
  try {
    run = load_run_dir(rundir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (run.states.size() < 3) {
    std::cerr << "error: need at least 3 stored states to diagnose\n";
    return kExitInvalid;
  }
  const Grid& g = run.cfg.grid;
  StructureState last{run.states.back().h, run.states.back().v};
  TestPairChecks ck = testpair_checks(last, run.cfg.params, g);
  WeakformTerms wf = weakform_terms(run.states, run.cfg);
  ContradictionDiagnostic cd = contradiction_diagnostic(run.states, run.cfg, horizon);
  ReducedEnergy re = reduced_energy(last, run.cfg.params, g);

  nlohmann::json j;
  j["testpair_checks"] = {
      {"corner", ck.corner},       {"interface_id", ck.interface_id},
      {"bottom", ck.bottom},       {"inflow", ck.inflow},
      {"divergence", ck.divergence}, {"jump_top", ck.jump_top},
      {"robin_bottom", ck.robin_bottom}, {"robin_top", ck.robin_top},
      {"partition", ck.partition}};
  j["weakform"] = {{"I1", wf.I1}, {"I2", wf.I2}, {"I3", wf.I3}, {"I4", wf.I4},
                   {"I5", wf.I5}, {"I6", wf.I6}, {"I7", wf.I7}, {"lhs", wf.lhs},
                   {"sum", wf.sum()}, {"sum_abs", wf.sum_abs()}};
  j["contradiction"] = {{"horizons", cd.horizons},
                        {"lhs_mag", cd.lhs_mag},
                        {"sum_abs", cd.sum_abs},
                        {"exponent_lhs", cd.exponent_lhs},
                        {"exponent_sum", cd.exponent_sum}};
  j["reduced_energy_integral"] = re.integral;

  // H^3 budget int_0^{T_delta} |h|_{H3}^2 dt for shrinking clearance floors
  std::vector<double> deltas = {0.1 * g.H, 0.05 * g.H, 0.025 * g.H};
  nlohmann::json h3 = nlohmann::json::array();
  for (double del : deltas) {
    double acc = 0.0;
    for (size_t k = 0; k + 1 < run.states.size(); ++k) {
      const auto& s0 = run.states[k];
      const auto& s1 = run.states[k + 1];
      if (s0.h.minCoeff() < del || s1.h.minCoeff() < del) break;
      double a = h3_seminorm(s0.h, g.dxs());
      double b = h3_seminorm(s1.h, g.dxs());
      acc += 0.5 * (a * a + b * b) * (s1.t - s0.t);
    }
    h3.push_back({{"delta", del}, {"integral", acc}});
  }
  j["h3_budget"] = h3;

  try {
    std::ofstream f(rundir + "/diagnostics.json", std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot write diagnostics.json");
    f << j.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slip-channel fluid/plate interaction simulator"};
  app.require_subcommand(1);

  std::string config, outdir = "out", axis = "pressure", rundir;
  std::vector<double> values;
  double horizon = -1.0;

  auto* run = app.add_subcommand("run", "run one simulation");
  run->add_option("config", config)->required();
  run->add_option("-o,--out", outdir);

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("config", config)->required();
  sweep->add_option("--axis", axis)->required();
  sweep->add_option("--values", values)->required()->delimiter(',');
  sweep->add_option("-o,--out", outdir);

  auto* val = app.add_subcommand("validate", "parse and validate a config");
  val->add_option("config", config)->required();

  auto* diag = app.add_subcommand("diagnose", "analyze a stored run directory");
  diag->add_option("rundir", rundir)->required();
  diag->add_option("-T,--horizon", horizon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : kExitIo;
  }

  if (run->parsed()) return cmd_run(config, outdir);
  if (sweep->parsed()) return cmd_sweep(config, axis, values, outdir);
  if (val->parsed()) return cmd_validate(config);
  if (diag->parsed()) return cmd_diagnose(rundir, horizon);
  return kExitIo;
}
