#pragma once
#include "slipchannel/fluid_solver.hpp"
#include "slipchannel/plate_solver.hpp"

namespace slipchannel {

// One row of the ledger: instantaneous stored energies at the end of the
// step plus the per-step dissipation/work increments (midpoint quadrature).
struct EnergyRecord {
  double t = 0.0;
  double kin_fluid = 0.0;
  double kin_plate = 0.0;
  double bending = 0.0;
  double d_visc = 0.0;       // mu |grad u|^2
  double d_bottom = 0.0;     // (1/beta_b) |u.tau|^2 on the bottom wall
  double d_interface = 0.0;  // (1/beta_s) |(u-v).tau|^2 on the interface
  double d_plate = 0.0;      // gamma |dxt h|^2
  double d_penalty = 0.0;    // (1/2eps)(q_out - 1)^2
  double work_pressure = 0.0;  // (P_in q_in - P_out q_out) dt
  // The penalty power drawn from the fluid is (1/eps)(q_out-1) q_out; half of
  // it is the deviation dissipation above, the rest, -(1/2eps)(q_out^2-1), is
  // the work done against the flux target and belongs on the work side.
  double work_penalty = 0.0;
  double total() const { return kin_fluid + kin_plate + bending; }
};

struct EnergySnapshot {
  double kin_fluid = 0.0, kin_plate = 0.0, bending = 0.0;
  double total() const { return kin_fluid + kin_plate + bending; }
};

EnergySnapshot energy_snapshot(const FluidState& fs, const StructureState& st,
                               const AleMap& m, const PhysicalParams& pp, const Grid& g);

// Dissipation rates of a single state (integrands of the energy balance).
struct DissipationRates {
  double visc = 0.0, bottom = 0.0, interface = 0.0, plate = 0.0;
};
DissipationRates dissipation_rates(const FluidState& fs, const StructureState& st,
                                   const AleMap& m, const PhysicalParams& pp, const Grid& g);

// Midpoint-in-time increments over one step (states averaged).
EnergyRecord dissipation_increment(const FluidState& fs0, const StructureState& st0,
                                   const FluidState& fs1, const StructureState& st1,
                                   const PhysicalParams& pp, const Grid& g,
                                   double t1, double dt, double eps,
                                   double P_in_mid, double P_out_mid);

// Cumulative audit of  E(t) + sum D <= E(0) + sum W + slack.  The defect is
// signed; `ok` checks its positive part against the slack budget c1*dt.
struct LedgerAudit {
  double max_defect = 0.0;      // max_k positive part
  double max_abs_defect = 0.0;  // max_k |defect|
  double slack = 0.0;
  double c1 = 0.0;
  bool ok = false;
};
LedgerAudit ledger_audit(const std::vector<EnergyRecord>& recs, double dt,
                         double c1 = -1.0);

// int (q_out - 1)^2 dt of a run, rectangle rule over per-step samples.
double flux_deviation_integral(const std::vector<double>& q_out, double dt,
                               double target = 1.0);

}  // namespace slipchannel
