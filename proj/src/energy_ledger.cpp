#include "slipchannel/energy_ledger.hpp"

#include <cmath>

namespace slipchannel {

EnergySnapshot energy_snapshot(const FluidState& fs, const StructureState& st,
                               const AleMap& m, const PhysicalParams& pp, const Grid& g) {
  EnergySnapshot e;
  double dv = g.dx() * g.dxi();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double u1c = 0.5 * (fs.u1[g.iu1(i, j)] + fs.u1[g.iu1(i + 1, j)]);
      double u2c = 0.5 * (fs.u2[g.iu2(i, j)] + fs.u2[g.iu2(i, j + 1)]);
      e.kin_fluid += 0.5 * (u1c * u1c + u2c * u2c) * m.hc[i] * dv;
    }
  }
  e.kin_plate = plate_kinetic_energy(st, g);
  e.bending = plate_bending_energy(st, pp, g);
  return e;
}

DissipationRates dissipation_rates(const FluidState& fs, const StructureState& st,
                                   const AleMap& m, const PhysicalParams& pp, const Grid& g) {
  DissipationRates d;
  const int nx = g.nx, ny = g.ny;
  double dx = g.dx(), dxi = g.dxi();

  // mu int |grad u|^2 over cell centers (mapped derivatives)
  CenterFields cf = center_fields(fs, m, g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int k = g.ip(i, j);
      d.visc += (cf.g11[k] * cf.g11[k] + cf.g12[k] * cf.g12[k] + cf.g21[k] * cf.g21[k] +
                 cf.g22[k] * cf.g22[k]) * m.hc[i] * dx * dxi;
    }
  }
  d.visc *= pp.mu;

  // wall terms, trapezoid over u1 faces
  for (int i = 0; i <= nx; ++i) {
    double w = (i == 0 || i == nx) ? 0.5 : 1.0;
    double u1b = 1.5 * fs.u1[g.iu1(i, 0)] - 0.5 * fs.u1[g.iu1(i, 1)];
    d.bottom += w * u1b * u1b * dx;
    double hx = m.hxf[i], ht = m.htf[i];
    double S = std::sqrt(1.0 + hx * hx);
    double u1t = 1.5 * fs.u1[g.iu1(i, ny - 1)] - 0.5 * fs.u1[g.iu1(i, ny - 2)];
    int il = std::max(i - 1, 0), ir = std::min(i, nx - 1);
    double u2t = 0.5 * (fs.u2[g.iu2(il, ny)] + fs.u2[g.iu2(ir, ny)]);
    double jump = (u1t + hx * (u2t - ht)) / S;  // ((u-(0,ht)).tau)
    d.interface += w * jump * jump * S * dx;
  }
  d.bottom /= pp.beta_b;
  d.interface /= pp.beta_s;

  d.plate = plate_gradient_dissipation_rate(st.v, pp, g);
  return d;
}

EnergyRecord dissipation_increment(const FluidState& fs0, const StructureState& st0,
                                   const FluidState& fs1, const StructureState& st1,
                                   const PhysicalParams& pp, const Grid& g,
                                   double t1, double dt, double eps,
                                   double P_in_mid, double P_out_mid) {
  FluidState fsm;
  fsm.u1 = 0.5 * (fs0.u1 + fs1.u1);
  fsm.u2 = 0.5 * (fs0.u2 + fs1.u2);
  fsm.p = 0.5 * (fs0.p + fs1.p);
  StructureState stm;
  stm.h = 0.5 * (st0.h + st1.h);
  stm.v = 0.5 * (st0.v + st1.v);
  AleMap mm = build_map(stm, g);

  EnergyRecord r;
  r.t = t1;
  DissipationRates d = dissipation_rates(fsm, stm, mm, pp, g);
  r.d_visc = d.visc * dt;
  r.d_bottom = d.bottom * dt;
  r.d_interface = d.interface * dt;
  r.d_plate = d.plate * dt;

  Fluxes q = boundary_fluxes(fsm, mm, g);
  if (eps > 0.0 && std::isfinite(eps)) {
    r.d_penalty = dt / (2.0 * eps) * (q.q_out - 1.0) * (q.q_out - 1.0);
    r.work_penalty = -dt / (2.0 * eps) * (q.q_out * q.q_out - 1.0);
  }
  r.work_pressure = dt * (P_in_mid * q.q_in - P_out_mid * q.q_out);

  AleMap m1 = build_map(st1, g);
  EnergySnapshot e = energy_snapshot(fs1, st1, m1, pp, g);
  r.kin_fluid = e.kin_fluid;
  r.kin_plate = e.kin_plate;
  r.bending = e.bending;
  return r;
}

LedgerAudit ledger_audit(const std::vector<EnergyRecord>& recs, double dt, double c1) {
  LedgerAudit a;
  if (recs.empty()) return a;
  double e0 = recs.front().total();  // caller passes a t=0 record first
  double sumD = 0.0, sumW = 0.0, sumAbsW = 0.0, sumAbsD = 0.0;
  for (size_t k = 1; k < recs.size(); ++k) {
    const EnergyRecord& r = recs[k];
    sumD += r.d_visc + r.d_bottom + r.d_interface + r.d_plate + r.d_penalty;
    sumAbsD = sumD;
    sumW += r.work_pressure + r.work_penalty;
    sumAbsW += std::abs(r.work_pressure) + std::abs(r.work_penalty);
    double defect = r.total() + sumD - e0 - sumW;
    a.max_defect = std::max(a.max_defect, defect);
    a.max_abs_defect = std::max(a.max_abs_defect, std::abs(defect));
  }
  a.c1 = (c1 > 0.0) ? c1 : 10.0 * (e0 + sumAbsW + sumAbsD + 1e-12);
  a.slack = a.c1 * dt;
  a.ok = a.max_defect <= a.slack;
  return a;
}

double flux_deviation_integral(const std::vector<double>& q_out, double dt, double target) {
  double acc = 0.0;
  for (double q : q_out) acc += (q - target) * (q - target) * dt;
  return acc;
}

}  // namespace slipchannel
