#pragma once
#include <string>
#include <vector>

#include "slipchannel/energy_ledger.hpp"

namespace slipchannel {

struct SystemState {
  StructureState plate;
  FluidState fluid;
  AleMap map;
  double t = 0.0;
};

SystemState initial_state(const SimulationConfig& cfg);

// One splitting step: plate under frozen traction, geometry rebuild, fluid
// solve on the new geometry with the new interface velocity.
void lie_trotter_step(SystemState& st, const SimulationConfig& cfg);

// Leftmost node index at or below the threshold, or -1.
int detect_contact(const StructureState& plate, double threshold);

double flux_identity_residual(const FluidState& fs, const AleMap& m, const Grid& g);

struct SeriesRow {
  double t, min_h, argmin_x, q_in, q_out, flux_residual, energy_total,
      penalty_deviation, h3_seminorm;
};

struct StoredState {
  double t;
  VectorXd h, v, u1, u2, p;
};

struct RunResult {
  std::vector<SeriesRow> series;
  std::vector<EnergyRecord> energy;  // first record holds the initial energies
  std::vector<StoredState> states;   // at state_cadence
  std::string termination;           // "contact" | "t_end" | "failure"
  bool contact = false;
  double contact_time = -1.0;
  double contact_x = -1.0;
  int steps = 0;
  LedgerAudit audit;
  double max_flux_residual = 0.0;
  std::string failure_reason;
};

struct RunOptions {
  bool freeze_structure = false;  // fluid-only stepping on the initial geometry
  bool store_states = true;
};

RunResult run_simulation(const SimulationConfig& cfg, const RunOptions& opts = {});

}  // namespace slipchannel
