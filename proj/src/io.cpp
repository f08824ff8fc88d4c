#include "slipchannel/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace slipchannel {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write " + path);
  return f;
}

void write_vec(std::ostream& o, const VectorXd& v) {
  for (int i = 0; i < v.size(); ++i) o << (i ? " " : "") << fmt(v[i]);
  o << "\n";
}

VectorXd read_vec(std::istream& in, int n) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i)
    if (!(in >> v[i])) throw std::ios_base::failure("truncated state file");
  return v;
}

}  // namespace

void write_timeseries(const std::string& path, const std::vector<SeriesRow>& rows) {
  auto f = open_out(path);
  f << "t,min_h,argmin_x,q_in,q_out,flux_residual,energy_total,penalty_deviation,h3_seminorm\n";
  for (const auto& r : rows) {
    f << fmt(r.t) << ',' << fmt(r.min_h) << ',' << fmt(r.argmin_x) << ',' << fmt(r.q_in)
      << ',' << fmt(r.q_out) << ',' << fmt(r.flux_residual) << ',' << fmt(r.energy_total)
      << ',' << fmt(r.penalty_deviation) << ',' << fmt(r.h3_seminorm) << "\n";
  }
}

void write_energy_csv(const std::string& path, const std::vector<EnergyRecord>& recs) {
  auto f = open_out(path);
  f << "t,kin_fluid,kin_plate,bending,d_visc,d_bottom,d_interface,d_plate,d_penalty,"
       "work_pressure,work_penalty,defect\n";
  double e0 = recs.empty() ? 0.0 : recs.front().total();
  double sumD = 0.0, sumW = 0.0;
  for (size_t k = 0; k < recs.size(); ++k) {
    const auto& r = recs[k];
    if (k) {
      sumD += r.d_visc + r.d_bottom + r.d_interface + r.d_plate + r.d_penalty;
      sumW += r.work_pressure + r.work_penalty;
    }
    double defect = k ? (r.total() + sumD - e0 - sumW) : 0.0;
    f << fmt(r.t) << ',' << fmt(r.kin_fluid) << ',' << fmt(r.kin_plate) << ','
      << fmt(r.bending) << ',' << fmt(r.d_visc) << ',' << fmt(r.d_bottom) << ','
      << fmt(r.d_interface) << ',' << fmt(r.d_plate) << ',' << fmt(r.d_penalty) << ','
      << fmt(r.work_pressure) << ',' << fmt(r.work_penalty) << ',' << fmt(defect) << "\n";
  }
}

void write_summary_json(const std::string& path, const SimulationConfig& cfg,
                        const RunResult& res) {
  nlohmann::json j;
  j["config_digest"] = config_digest(cfg);
  j["termination"] = res.termination;
  j["steps"] = res.steps;
  j["contact"] = res.contact;
  if (res.contact) {
    j["contact_time"] = res.contact_time;
    j["contact_x"] = res.contact_x;
  }
  if (!res.failure_reason.empty()) j["failure_reason"] = res.failure_reason;
  if (!res.series.empty()) {
    const SeriesRow& last = res.series.back();
    j["final"] = {{"t", last.t},           {"min_h", last.min_h},
                  {"q_in", last.q_in},     {"q_out", last.q_out},
                  {"energy_total", last.energy_total}, {"h3_seminorm", last.h3_seminorm}};
  }
  j["max_flux_residual"] = res.max_flux_residual;
  j["audit"] = {{"max_defect", res.audit.max_defect},
                {"max_abs_defect", res.audit.max_abs_defect},
                {"slack", res.audit.slack},
                {"c1", res.audit.c1},
                {"ok", res.audit.ok}};
  auto f = open_out(path);
  f << j.dump(2) << "\n";
}

void write_snapshot(const std::string& path, const FluidState& fs, const AleMap& m,
                    const Grid& g) {
  auto f = open_out(path);
  f << "x y u1 u2 p\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double u1c = 0.5 * (fs.u1[g.iu1(i, j)] + fs.u1[g.iu1(i + 1, j)]);
      double u2c = 0.5 * (fs.u2[g.iu2(i, j)] + fs.u2[g.iu2(i, j + 1)]);
      f << fmt(g.xc(i)) << ' ' << fmt(g.xic(j) * m.hc[i]) << ' ' << fmt(u1c) << ' '
        << fmt(u2c) << ' ' << fmt(fs.p[g.ip(i, j)]) << "\n";
    }
  }
}

void write_run_dir(const std::string& dir, const SimulationConfig& cfg, const RunResult& res) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    auto f = open_out(dir + "/config.txt");
    f << serialize_config(cfg);
  }
  write_timeseries(dir + "/timeseries.csv", res.series);
  write_energy_csv(dir + "/energy.csv", res.energy);
  write_summary_json(dir + "/summary.json", cfg, res);
  fs::create_directories(dir + "/states");
  auto idx = open_out(dir + "/states/index.txt");
  for (size_t k = 0; k < res.states.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.txt", k);
    idx << name << "\n";
    auto f = open_out(dir + "/states/" + name);
    const StoredState& s = res.states[k];
    f << fmt(s.t) << "\n";
    write_vec(f, s.h);
    write_vec(f, s.v);
    write_vec(f, s.u1);
    write_vec(f, s.u2);
    write_vec(f, s.p);
  }
  if (cfg.output.snapshots) {
    fs::create_directories(dir + "/snapshots");
    // final state of the run at cell centers
    if (!res.states.empty()) {
      const StoredState& s = res.states.back();
      StructureState st{s.h, s.v};
      AleMap m = build_map(st, cfg.grid);
      FluidState fl{s.u1, s.u2, s.p};
      write_snapshot(dir + "/snapshots/final.txt", fl, m, cfg.grid);
    }
  }
}

LoadedRun load_run_dir(const std::string& dir) {
  LoadedRun run;
  {
    std::ifstream f(dir + "/config.txt");
    if (!f) throw std::ios_base::failure("cannot read " + dir + "/config.txt");
    std::ostringstream ss;
    ss << f.rdbuf();
    run.cfg = parse_config(ss.str());
  }
  const Grid& g = run.cfg.grid;
  std::ifstream idx(dir + "/states/index.txt");
  if (!idx) throw std::ios_base::failure("cannot read " + dir + "/states/index.txt");
  std::string name;
  while (idx >> name) {
    std::ifstream f(dir + "/states/" + name);
    if (!f) throw std::ios_base::failure("cannot read state " + name);
    StoredState s;
    if (!(f >> s.t)) throw std::ios_base::failure("bad state file " + name);
    s.h = read_vec(f, g.ns + 1);
    s.v = read_vec(f, g.ns + 1);
    s.u1 = read_vec(f, g.n_u1());
    s.u2 = read_vec(f, g.n_u2_all());
    s.p = read_vec(f, g.n_p());
    run.states.push_back(std::move(s));
  }
  return run;
}

}  // namespace slipchannel
