#include "slipchannel/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace slipchannel {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::istringstream iss(v);
  std::string tok;
  while (iss >> tok) {
    if (tok == "inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    try {
      size_t pos = 0;
      double x = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(x);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + tok + "' for key '" + key + "'");
    }
  }
  return out;
}

double one_number(const std::vector<double>& xs, const std::string& key) {
  if (xs.size() != 1) throw ConfigError("key '" + key + "' expects one number");
  return xs[0];
}

PressureSignal parse_signal(const std::vector<double>& xs, const std::string& key) {
  PressureSignal s;
  if (xs.size() == 1) {
    s.t = {0.0};
    s.v = {xs[0]};
    return s;
  }
  if (xs.empty() || xs.size() % 2 != 0)
    throw ConfigError("key '" + key + "' expects a value or t/v pairs");
  s.t.clear();
  s.v.clear();
  for (size_t k = 0; k < xs.size(); k += 2) {
    s.t.push_back(xs[k]);
    s.v.push_back(xs[k + 1]);
  }
  for (size_t k = 1; k < s.t.size(); ++k)
    if (s.t[k] <= s.t[k - 1])
      throw ConfigError("key '" + key + "' sample times must increase");
  return s;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SimulationConfig parse_config(const std::string& text) {
  SimulationConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto nums = [&] { return parse_numbers(val, key); };
    auto num = [&] { return one_number(parse_numbers(val, key), key); };

    if (section == "params") {
      if (key == "mu") cfg.params.mu = num();
      else if (key == "alpha") cfg.params.alpha = num();
      else if (key == "gamma") cfg.params.gamma = num();
      else if (key == "beta_s") cfg.params.beta_s = num();
      else if (key == "beta_b") cfg.params.beta_b = num();
      else if (key == "L") cfg.params.L = num();
      else if (key == "H") cfg.params.H = num();
      else throw ConfigError("unknown key '" + key + "' in [params]");
    } else if (section == "pressure") {
      if (key == "p_in") cfg.pressure.p_in = parse_signal(nums(), key);
      else if (key == "p_out") cfg.pressure.p_out = parse_signal(nums(), key);
      else if (key == "p0") cfg.pressure.p0 = num();
      else throw ConfigError("unknown key '" + key + "' in [pressure]");
    } else if (section == "grid") {
      if (key == "n_x") cfg.grid.nx = static_cast<int>(num());
      else if (key == "n_y") cfg.grid.ny = static_cast<int>(num());
      else if (key == "n_s") cfg.grid.ns = static_cast<int>(num());
      else throw ConfigError("unknown key '" + key + "' in [grid]");
    } else if (section == "time") {
      if (key == "dt") cfg.time.dt = num();
      else if (key == "t_end") cfg.time.t_end = num();
      else if (key == "epsilon") cfg.time.epsilon = num();
      else if (key == "h_stop") cfg.time.h_stop = num();
      else throw ConfigError("unknown key '" + key + "' in [time]");
    } else if (section == "initial") {
      if (key == "h0") {
        if (val == "flat") cfg.initial.h0.clear();
        else cfg.initial.h0 = nums();
      } else if (key == "v0") {
        if (val == "zero") cfg.initial.v0.clear();
        else cfg.initial.v0 = nums();
      } else if (key == "u0") {
        if (val == "zero") { cfg.initial.u10 = cfg.initial.u20 = 0.0; }
        else {
          auto xs = nums();
          if (xs.size() != 2) throw ConfigError("u0 expects 'zero' or two numbers");
          cfg.initial.u10 = xs[0];
          cfg.initial.u20 = xs[1];
        }
      } else throw ConfigError("unknown key '" + key + "' in [initial]");
    } else if (section == "output") {
      if (key == "series_every") cfg.output.series_every = static_cast<int>(num());
      else if (key == "state_cadence") cfg.output.state_cadence = static_cast<int>(num());
      else if (key == "snapshots") cfg.output.snapshots = num() != 0.0;
      else throw ConfigError("unknown key '" + key + "' in [output]");
    } else {
      throw ConfigError("key '" + key + "' outside of a known section");
    }
  }
  cfg.grid.L = cfg.params.L;
  cfg.grid.H = cfg.params.H;
  return cfg;
}

SimulationConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimulationConfig& cfg) {
  std::ostringstream o;
  o << "[params]\n";
  o << "mu = " << fmt(cfg.params.mu) << "\nalpha = " << fmt(cfg.params.alpha)
    << "\ngamma = " << fmt(cfg.params.gamma) << "\nbeta_s = " << fmt(cfg.params.beta_s)
    << "\nbeta_b = " << fmt(cfg.params.beta_b) << "\nL = " << fmt(cfg.params.L)
    << "\nH = " << fmt(cfg.params.H) << "\n";
  auto sig = [&](const char* key, const PressureSignal& s) {
    o << key << " =";
    if (s.t.size() == 1) o << " " << fmt(s.v[0]);
    else
      for (size_t k = 0; k < s.t.size(); ++k) o << " " << fmt(s.t[k]) << " " << fmt(s.v[k]);
    o << "\n";
  };
  o << "[pressure]\n";
  sig("p_in", cfg.pressure.p_in);
  sig("p_out", cfg.pressure.p_out);
  o << "p0 = " << fmt(cfg.pressure.p0) << "\n";
  o << "[grid]\nn_x = " << cfg.grid.nx << "\nn_y = " << cfg.grid.ny << "\nn_s = " << cfg.grid.ns << "\n";
  o << "[time]\ndt = " << fmt(cfg.time.dt) << "\nt_end = " << fmt(cfg.time.t_end)
    << "\nepsilon = " << fmt(cfg.time.epsilon) << "\nh_stop = " << fmt(cfg.time.h_stop) << "\n";
  o << "[initial]\n";
  if (cfg.initial.h0.empty()) o << "h0 = flat\n";
  else {
    o << "h0 =";
    for (double x : cfg.initial.h0) o << " " << fmt(x);
    o << "\n";
  }
  if (cfg.initial.v0.empty()) o << "v0 = zero\n";
  else {
    o << "v0 =";
    for (double x : cfg.initial.v0) o << " " << fmt(x);
    o << "\n";
  }
  if (cfg.initial.u10 == 0.0 && cfg.initial.u20 == 0.0) o << "u0 = zero\n";
  else o << "u0 = " << fmt(cfg.initial.u10) << " " << fmt(cfg.initial.u20) << "\n";
  o << "[output]\nseries_every = " << cfg.output.series_every
    << "\nstate_cadence = " << cfg.output.state_cadence
    << "\nsnapshots = " << (cfg.output.snapshots ? 1 : 0) << "\n";
  return o.str();
}

double pressure_eval(const PressureSignal& s, double t) {
  if (t <= s.t.front()) return s.v.front();
  if (t >= s.t.back()) return s.v.back();
  auto it = std::upper_bound(s.t.begin(), s.t.end(), t);
  size_t k = static_cast<size_t>(it - s.t.begin());
  double w = (t - s.t[k - 1]) / (s.t[k] - s.t[k - 1]);
  return (1.0 - w) * s.v[k - 1] + w * s.v[k];
}

bool penalty_enabled(const TimeSpec& ts) {
  return ts.epsilon > 0.0 && std::isfinite(ts.epsilon);
}

double contact_threshold(const SimulationConfig& cfg) {
  double frac = cfg.time.h_stop >= 0.0 ? cfg.time.h_stop : 0.01;
  return frac * cfg.params.H;
}

std::vector<std::string> validate_config(const SimulationConfig& cfg) {
  std::vector<std::string> errs;
  auto pos = [&](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) errs.push_back(std::string(name) + " must be positive");
  };
  pos(cfg.params.mu, "mu");
  pos(cfg.params.alpha, "alpha");
  pos(cfg.params.gamma, "gamma");
  pos(cfg.params.beta_s, "beta_s");
  pos(cfg.params.beta_b, "beta_b");
  pos(cfg.params.L, "L");
  pos(cfg.params.H, "H");
  pos(cfg.time.dt, "dt");
  pos(cfg.time.t_end, "t_end");
  if (cfg.grid.nx < 4) errs.push_back("n_x must be at least 4");
  if (cfg.grid.ny < 4) errs.push_back("n_y must be at least 4");
  if (cfg.grid.ns < 4) errs.push_back("n_s must be at least 4");
  if (cfg.output.series_every < 1) errs.push_back("series_every must be >= 1");
  if (cfg.output.state_cadence < 1) errs.push_back("state_cadence must be >= 1");
  if (cfg.pressure.p0 < 0.0) errs.push_back("p0 must be nonnegative");
  if (cfg.time.h_stop >= 0.0 && cfg.time.h_stop >= cfg.params.H)
    errs.push_back("h_stop must be below H");

  // Pressure-drop hypothesis: p_out - p_in >= p0 at every sample time of
  // either signal plus the horizon endpoints.
  std::vector<double> ts = {0.0, cfg.time.t_end};
  ts.insert(ts.end(), cfg.pressure.p_in.t.begin(), cfg.pressure.p_in.t.end());
  ts.insert(ts.end(), cfg.pressure.p_out.t.begin(), cfg.pressure.p_out.t.end());
  for (double t : ts) {
    if (t < 0.0 || t > cfg.time.t_end) continue;
    double drop = pressure_eval(cfg.pressure.p_out, t) - pressure_eval(cfg.pressure.p_in, t);
    if (drop < cfg.pressure.p0 - 1e-12) {
      errs.push_back("pressure drop p_out - p_in falls below p0 at t = " + fmt(t));
      break;
    }
  }

  // Clamped compatibility of the initial profile.
  if (!cfg.initial.h0.empty()) {
    if (static_cast<int>(cfg.initial.h0.size()) != cfg.grid.ns + 1) {
      errs.push_back("h0 must provide n_s + 1 samples");
    } else {
      const auto& h0 = cfg.initial.h0;
      double H = cfg.params.H;
      double dxs = cfg.params.L / cfg.grid.ns;
      double vtol = 1e-9 * std::max(1.0, H);
      double stol = 1e-3 * std::max(1.0, H) / cfg.params.L;
      if (std::abs(h0.front() - H) > vtol || std::abs(h0.back() - H) > vtol)
        errs.push_back("h0 endpoints must equal H (clamped)");
      double sl = (-1.5 * h0[0] + 2.0 * h0[1] - 0.5 * h0[2]) / dxs;
      double sr = (1.5 * h0[cfg.grid.ns] - 2.0 * h0[cfg.grid.ns - 1] + 0.5 * h0[cfg.grid.ns - 2]) / dxs;
      if (std::abs(sl) > stol || std::abs(sr) > stol)
        errs.push_back("h0 endpoint slopes must vanish (clamped)");
      double thr = contact_threshold(cfg);
      for (double h : h0)
        if (h <= thr) {
          errs.push_back("h0 must stay above the contact threshold");
          break;
        }
    }
  }
  if (!cfg.initial.v0.empty()) {
    if (static_cast<int>(cfg.initial.v0.size()) != cfg.grid.ns + 1) {
      errs.push_back("v0 must provide n_s + 1 samples");
    } else if (std::abs(cfg.initial.v0.front()) > 1e-12 || std::abs(cfg.initial.v0.back()) > 1e-12) {
      errs.push_back("v0 endpoints must vanish (clamped)");
    }
  }
  return errs;
}

std::optional<std::string> cfl_advisory(const SimulationConfig& cfg) {
  const double kCflSafety = 0.5;
  double dxmin = std::min(cfg.params.L / cfg.grid.nx, cfg.params.H / cfg.grid.ny);
  double dt_adv = kCflSafety * dxmin * dxmin / cfg.params.mu;
  if (cfg.time.dt > dt_adv) {
    return "dt = " + fmt(cfg.time.dt) + " exceeds the advisory bound " + fmt(dt_adv) +
           " = 0.5*min(dx,dy)^2/mu; explicit couplings may lose accuracy";
  }
  return std::nullopt;
}

std::string config_digest(const SimulationConfig& cfg) {
  std::string s = serialize_config(cfg);
  uint64_t hv = 1469598103934665603ull;
  for (unsigned char ch : s) {
    hv ^= ch;
    hv *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hv));
  return buf;
}

SimulationConfig reference_contact_config() {
  SimulationConfig cfg;
  cfg.params = PhysicalParams{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5};
  cfg.pressure.p_in.v = {-100.0};
  cfg.pressure.p_out.v = {0.0};
  cfg.pressure.p0 = 100.0;
  cfg.grid = Grid{64, 32, 64, 1.0, 0.5};
  cfg.time = TimeSpec{1e-3, 2.0, 1e-4, -1.0};
  return cfg;
}

}  // namespace slipchannel
