#pragma once
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slipchannel/grid.hpp"

namespace slipchannel {

struct PhysicalParams {
  double mu = 1.0;      // fluid viscosity
  double alpha = 1.0;   // plate bending stiffness
  double gamma = 1.0;   // plate viscoelastic damping
  double beta_s = 1.0;  // interface slip length
  double beta_b = 1.0;  // bottom slip length
  double L = 1.0;       // channel length
  double H = 0.5;       // reference height
};

// Tabulated signal with linear interpolation, constant outside the table.
// A single sample means a constant signal.
struct PressureSignal {
  std::vector<double> t{0.0};
  std::vector<double> v{0.0};
};

struct PressureData {
  PressureSignal p_in;
  PressureSignal p_out;
  double p0 = 0.0;  // required lower bound on p_out - p_in
};

struct TimeSpec {
  double dt = 1e-3;
  double t_end = 1.0;
  double epsilon = 1e-4;  // outlet-flux penalty; <= 0 or inf disables it
  double h_stop = -1.0;   // contact threshold; < 0 means the default 0.01*H
};

struct InitialSpec {
  std::vector<double> h0;  // empty = flat (H); otherwise ns+1 nodal samples
  std::vector<double> v0;  // empty = zero
  double u10 = 0.0, u20 = 0.0;  // constant initial velocity, projected
};

struct OutputSpec {
  int series_every = 1;
  int state_cadence = 10;
  bool snapshots = false;
};

struct SimulationConfig {
  PhysicalParams params;
  PressureData pressure;
  Grid grid{64, 32, 64, 1.0, 0.5};
  TimeSpec time;
  InitialSpec initial;
  OutputSpec output;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse the flat key-value format ([params]/[pressure]/[grid]/[time]/
// [initial]/[output] sections).  Throws ConfigError on malformed input.
SimulationConfig parse_config(const std::string& text);
SimulationConfig parse_config_file(const std::string& path);
std::string serialize_config(const SimulationConfig& cfg);

// Returns the list of violated constraints (empty = valid).
std::vector<std::string> validate_config(const SimulationConfig& cfg);

double pressure_eval(const PressureSignal& s, double t);

bool penalty_enabled(const TimeSpec& ts);
double contact_threshold(const SimulationConfig& cfg);

// Advisory only: flags time steps too coarse for the explicit pieces.
std::optional<std::string> cfl_advisory(const SimulationConfig& cfg);

// FNV-1a digest of the canonical serialization, for run summaries.
std::string config_digest(const SimulationConfig& cfg);

// The contact study configuration used throughout the documentation:
// L=1, H=0.5, mu=alpha=gamma=beta_s=beta_b=1, P_in=-100, P_out=0, p0=100
// (the smallest drop in this family observed to reach contact is ~100).
SimulationConfig reference_contact_config();

}  // namespace slipchannel
