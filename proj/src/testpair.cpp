#include "slipchannel/testpair.hpp"

#include <cmath>

namespace slipchannel {

namespace {

// Value + first/second derivative with respect to h, for the rational
// coefficient functions a(h), b(h), c(h).
struct Jet2 {
  double f = 0.0, d1 = 0.0, d2 = 0.0;
};
Jet2 jconst(double v) { return {v, 0.0, 0.0}; }
Jet2 jvar(double v) { return {v, 1.0, 0.0}; }
Jet2 operator+(Jet2 a, Jet2 b) { return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2}; }
Jet2 operator-(Jet2 a, Jet2 b) { return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2}; }
Jet2 operator*(Jet2 a, Jet2 b) {
  return {a.f * b.f, a.d1 * b.f + a.f * b.d1, a.d2 * b.f + 2.0 * a.d1 * b.d1 + a.f * b.d2};
}
Jet2 operator*(double s, Jet2 a) { return {s * a.f, s * a.d1, s * a.d2}; }
Jet2 operator/(Jet2 a, Jet2 b) {
  Jet2 q;
  q.f = a.f / b.f;
  q.d1 = (a.d1 - q.f * b.d1) / b.f;
  q.d2 = (a.d2 - q.f * b.d2 - 2.0 * q.d1 * b.d1) / b.f;
  return q;
}

struct CoeffJets {
  Jet2 a, b, c;
};

CoeffJets coeff_jets(double h, const PhysicalParams& pp) {
  Jet2 hh = jvar(h);
  Jet2 ls = (1.0 / pp.beta_s) * hh;
  Jet2 lb = (1.0 / pp.beta_b) * hh;
  Jet2 D = ls * lb + 4.0 * (ls + lb) + jconst(12.0);
  CoeffJets cj;
  cj.a = (-2.0) * (ls + lb + ls * lb) / D;
  cj.b = 3.0 * (lb * (ls + jconst(2.0))) / D;
  cj.c = 6.0 * (ls + jconst(2.0)) / D;
  return cj;
}

}  // namespace

Lambdas lambda_coeffs(double h, const PhysicalParams& pp) {
  return Lambdas{h / pp.beta_s, h / pp.beta_b};
}

SlipProfileCoeffs cubic_coeffs(double lam_s, double lam_b) {
  double D = lam_s * lam_b + 4.0 * (lam_s + lam_b) + 12.0;
  SlipProfileCoeffs cc;
  cc.a = -2.0 * (lam_s + lam_b + lam_s * lam_b) / D;
  cc.b = 3.0 * lam_b * (lam_s + 2.0) / D;
  cc.c = 6.0 * (lam_s + 2.0) / D;
  return cc;
}

PhiValue phi_profile(const SlipProfileCoeffs& cc, double xi) {
  return PhiValue{cc.a * xi * xi * xi + cc.b * xi * xi + cc.c * xi,
                  3.0 * cc.a * xi * xi + 2.0 * cc.b * xi + cc.c,
                  6.0 * cc.a * xi + 2.0 * cc.b};
}

PhiEval contact_phi_at(double h, double hx, double hxx, double ht, double xi,
                       const PhysicalParams& pp) {
  (void)ht;
  CoeffJets cj = coeff_jets(h, pp);
  double a = cj.a.f, b = cj.b.f, c = cj.c.f;
  double ax = cj.a.d1 * hx, bx = cj.b.d1 * hx, cx = cj.c.d1 * hx;
  double axx = cj.a.d2 * hx * hx + cj.a.d1 * hxx;
  double bxx = cj.b.d2 * hx * hx + cj.b.d1 * hxx;
  double cxx = cj.c.d2 * hx * hx + cj.c.d1 * hxx;

  double x2 = xi * xi, x3 = x2 * xi;
  double Phi = a * x3 + b * x2 + c * xi;
  double Phi_xi = 3.0 * a * x2 + 2.0 * b * xi + c;
  double Phi_xixi = 6.0 * a * xi + 2.0 * b;
  double Phi_x = ax * x3 + bx * x2 + cx * xi;
  double Phi_xxi = 3.0 * ax * x2 + 2.0 * bx * xi + cx;
  double Phi_xx = axx * x3 + bxx * x2 + cxx * xi;

  PhiEval e;
  e.psi = h * Phi;
  e.phi1 = -Phi_xi;
  e.phi2 = hx * Phi + h * Phi_x - hx * xi * Phi_xi;
  e.dxphi1 = -Phi_xxi + Phi_xixi * xi * hx / h;
  e.dyphi1 = -Phi_xixi / h;
  // (1/h) d_xi phi2, written independently of dxphi1 so the div-free
  // identity exercises both derivative paths
  e.dyphi2 = Phi_xxi - (xi * hx / h) * Phi_xixi;
  double dphi2_dx = hxx * Phi + 2.0 * hx * Phi_x + h * Phi_xx - xi * (hxx * Phi_xi + hx * Phi_xxi);
  double dphi2_dxi = h * Phi_xxi - hx * xi * Phi_xixi;
  e.dxphi2 = dphi2_dx - (xi * hx / h) * dphi2_dxi;
  return e;
}

PhiEval regularity_phi_at(double h, double hx, double hxx, double hxxx, double xi) {
  double P = -2.0 * xi * xi * xi + 3.0 * xi * xi;
  double Pxi = -6.0 * xi * xi + 6.0 * xi;
  double Pxixi = -12.0 * xi + 6.0;
  PhiEval e;
  e.psi = hx * P;
  e.phi1 = -hx * Pxi / h;
  e.phi2 = hxx * P - xi * hx * hx * Pxi / h;
  e.dxphi1 = -(hxx / h - hx * hx / (h * h)) * Pxi + xi * hx * hx * Pxixi / (h * h);
  e.dyphi1 = -hx * Pxixi / (h * h);
  e.dyphi2 = (1.0 / h) * (hxx * Pxi - (hx * hx / h) * (Pxi + xi * Pxixi));
  double dx_fix = hxxx * P - xi * (2.0 * hx * hxx / h - hx * hx * hx / (h * h)) * Pxi;
  double dxi_fix = hxx * Pxi - (hx * hx / h) * (Pxi + xi * Pxixi);
  e.dxphi2 = dx_fix - (xi * hx / h) * dxi_fix;
  return e;
}

namespace {

TestPair build_pair(TestPair::Kind kind, const StructureState& st,
                    const PhysicalParams& pp, const Grid& g, double scale) {
  TestPair tp;
  tp.kind = kind;
  tp.scale = scale;
  AleMap m = build_map(st, g);
  VectorXd hxxxs = d3_nodal(st.h, g.dxs());
  VectorXd hxxxc(g.nx);
  for (int i = 0; i < g.nx; ++i) hxxxc[i] = sample_linear(hxxxs, g.dxs(), g.xc(i));

  tp.eta.resize(g.ns + 1);
  for (int k = 0; k <= g.ns; ++k)
    tp.eta[k] = scale * (kind == TestPair::kContact ? m.hxs[k] : m.hxxs[k]);

  int nc = g.nx * g.ny;
  tp.phi1.resize(nc); tp.phi2.resize(nc);
  tp.dxphi1.resize(nc); tp.dyphi1.resize(nc);
  tp.dxphi2.resize(nc); tp.dyphi2.resize(nc);
  auto eval = [&](double h, double hx, double hxx, double hxxx, double ht, double xi) {
    return kind == TestPair::kContact ? contact_phi_at(h, hx, hxx, ht, xi, pp)
                                      : regularity_phi_at(h, hx, hxx, hxxx, xi);
  };
  for (int j = 0; j < g.ny; ++j) {
    double xi = g.xic(j);
    for (int i = 0; i < g.nx; ++i) {
      PhiEval e = eval(m.hc[i], m.hxc[i], m.hxxc[i], hxxxc[i], m.htc[i], xi);
      int k = g.ip(i, j);
      tp.phi1[k] = scale * e.phi1;
      tp.phi2[k] = scale * e.phi2;
      tp.dxphi1[k] = scale * e.dxphi1;
      tp.dyphi1[k] = scale * e.dyphi1;
      tp.dxphi2[k] = scale * e.dxphi2;
      tp.dyphi2[k] = scale * e.dyphi2;
    }
  }
  tp.phi1_in.resize(g.ny);
  tp.phi1_out.resize(g.ny);
  for (int j = 0; j < g.ny; ++j) {
    double xi = g.xic(j);
    PhiEval ein = eval(m.hs[0], m.hxs[0], m.hxxs[0], hxxxs[0], 0.0, xi);
    PhiEval eout = eval(m.hs[g.ns], m.hxs[g.ns], m.hxxs[g.ns], hxxxs[g.ns], 0.0, xi);
    tp.phi1_in[j] = scale * ein.phi1;
    tp.phi1_out[j] = scale * eout.phi1;
  }
  tp.phi1_bot.resize(g.nx);
  tp.phi1_top.resize(g.nx);
  tp.phi2_top.resize(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    PhiEval eb = eval(m.hc[i], m.hxc[i], m.hxxc[i], hxxxc[i], m.htc[i], 0.0);
    PhiEval et = eval(m.hc[i], m.hxc[i], m.hxxc[i], hxxxc[i], m.htc[i], 1.0);
    tp.phi1_bot[i] = scale * eb.phi1;
    tp.phi1_top[i] = scale * et.phi1;
    tp.phi2_top[i] = scale * et.phi2;
  }
  return tp;
}

}  // namespace

TestPair contact_testpair(const StructureState& st, const PhysicalParams& pp,
                          const Grid& g, double scale) {
  return build_pair(TestPair::kContact, st, pp, g, scale);
}

TestPair regularity_testpair(const StructureState& st, const PhysicalParams& pp,
                             const Grid& g, double scale) {
  return build_pair(TestPair::kRegularity, st, pp, g, scale);
}

TestPairChecks testpair_checks(const StructureState& st, const PhysicalParams& pp,
                               const Grid& g) {
  TestPairChecks ck;
  AleMap m = build_map(st, g);
  VectorXd hxxxs = d3_nodal(st.h, g.dxs());

  // corner psi(0, H) = H
  {
    PhiEval e = contact_phi_at(m.hs[0], m.hxs[0], m.hxxs[0], 0.0, 1.0, pp);
    ck.corner = e.psi - g.H;
  }
  // interface and bottom identities, jump formula, divergence at the nodes
  for (int k = 0; k <= g.ns; ++k) {
    double h = m.hs[k], hx = m.hxs[k], hxx = m.hxxs[k], hxxx = hxxxs[k];
    PhiEval top = contact_phi_at(h, hx, hxx, 0.0, 1.0, pp);
    PhiEval bot = contact_phi_at(h, hx, hxx, 0.0, 0.0, pp);
    // psi(x, h) - (int_0^x dx h + H) = psi(x,h) - h
    ck.interface_id = std::max(ck.interface_id, std::abs(top.psi - h));
    ck.bottom = std::max(ck.bottom, std::abs(bot.psi));
    double S = std::sqrt(1.0 + hx * hx);
    double eta = hx;
    double jump = (top.phi1 + hx * (top.phi2 - eta)) / S;
    // -dy psi * S with dy psi = Phi_xi(1) = -phi1
    double ref = top.phi1 * S;
    ck.jump_top = std::max(ck.jump_top, std::abs(jump - ref));
    Lambdas lm = lambda_coeffs(h, pp);
    SlipProfileCoeffs cc = cubic_coeffs(lm.lam_s, lm.lam_b);
    ck.partition = std::max(ck.partition, std::abs(cc.a + cc.b + cc.c - 1.0));
    ck.robin_bottom = std::max(ck.robin_bottom, std::abs(2.0 * cc.b - lm.lam_b * cc.c));
    ck.robin_top = std::max(
        ck.robin_top, std::abs(6.0 * cc.a + 2.0 * cc.b + lm.lam_s * (3.0 * cc.a + 2.0 * cc.b + cc.c)));
    for (double xi : {0.15, 0.5, 0.85}) {
      PhiEval ec = contact_phi_at(h, hx, hxx, 0.0, xi, pp);
      PhiEval er = regularity_phi_at(h, hx, hxx, hxxx, xi);
      ck.divergence = std::max(ck.divergence, std::abs(ec.dxphi1 + ec.dyphi2));
      ck.divergence = std::max(ck.divergence, std::abs(er.dxphi1 + er.dyphi2));
    }
  }
  // inflow: int_0^H phi1(0,y) dy = -H, midpoint quadrature in xi
  {
    int nq = 400;
    double acc = 0.0;
    for (int q = 0; q < nq; ++q) {
      double xi = (q + 0.5) / nq;
      PhiEval e = contact_phi_at(m.hs[0], m.hxs[0], m.hxxs[0], 0.0, xi, pp);
      acc += e.phi1 * m.hs[0] / nq;
    }
    ck.inflow = acc + g.H;
  }
  return ck;
}

ReducedEnergy reduced_energy(const StructureState& st, const PhysicalParams& pp,
                             const Grid& g) {
  ReducedEnergy re;
  AleMap m = build_map(st, g);
  re.density.resize(g.ns + 1);
  for (int k = 0; k <= g.ns; ++k) {
    double h = m.hs[k], hx = m.hxs[k], hxx = m.hxxs[k];
    Lambdas lm = lambda_coeffs(h, pp);
    SlipProfileCoeffs cc = cubic_coeffs(lm.lam_s, lm.lam_b);
    double S2 = 1.0 + hx * hx;
    double alpha_s = (1.0 / pp.beta_s + curvature(hx, hxx)) * std::pow(S2, 1.5);
    double alpha_b = 1.0 / pp.beta_b;
    double bendq = (12.0 * cc.a * cc.a + 12.0 * cc.a * cc.b + 4.0 * cc.b * cc.b) / h;
    double top = 3.0 * cc.a + 2.0 * cc.b + cc.c;
    re.density[k] = bendq + alpha_s * top * top + alpha_b * cc.c * cc.c;
  }
  for (int k = 0; k <= g.ns; ++k) {
    double w = (k == 0 || k == g.ns) ? 0.5 : 1.0;
    re.integral += w * re.density[k] * g.dxs();
  }
  return re;
}

namespace {

struct FrameData {
  StructureState st;
  AleMap m;
  FluidState fl;
  TestPair tp;
  CenterFields cf;
  double t;
};

double dot_center(const Grid& g, const AleMap& m, const VectorXd& a1, const VectorXd& a2,
                  const VectorXd& b1, const VectorXd& b2) {
  double acc = 0.0;
  double dv = g.dx() * g.dxi();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int k = g.ip(i, j);
      acc += (a1[k] * b1[k] + a2[k] * b2[k]) * m.hc[i] * dv;
    }
  return acc;
}

}  // namespace

WeakformTerms weakform_terms(const std::vector<StoredState>& states,
                             const SimulationConfig& cfg) {
  const Grid& g = cfg.grid;
  const PhysicalParams& pp = cfg.params;
  double scale = -1.0 / g.H;
  size_t K = states.size();
  if (K < 2) return {};

  std::vector<FrameData> fr(K);
  for (size_t k = 0; k < K; ++k) {
    fr[k].t = states[k].t;
    fr[k].st = StructureState{states[k].h, states[k].v};
    fr[k].m = build_map(fr[k].st, g);
    fr[k].fl = FluidState{states[k].u1, states[k].u2, states[k].p};
    fr[k].tp = contact_testpair(fr[k].st, pp, g, scale);
    fr[k].cf = center_fields(fr[k].fl, fr[k].m, g);
  }

  double dxi = g.dxi(), dx = g.dx(), dxs = g.dxs();
  std::vector<double> r_lhs(K), r2(K), r3(K), r4(K), r5(K), r6(K), r7(K);
  for (size_t k = 0; k < K; ++k) {
    const FrameData& F = fr[k];
    const TestPair& tp = F.tp;
    const AleMap& m = F.m;
    const CenterFields& cf = F.cf;

    double qin_phi = 0.0, qout_phi = 0.0;
    for (int j = 0; j < g.ny; ++j) {
      qin_phi += tp.phi1_in[j] * m.hf[0] * dxi;
      qout_phi += tp.phi1_out[j] * m.hf[g.nx] * dxi;
    }
    r_lhs[k] = pressure_eval(cfg.pressure.p_in, F.t) * qin_phi -
               pressure_eval(cfg.pressure.p_out, F.t) * qout_phi;

    // d/dt phi at fixed physical point from stored pairs
    size_t km = (k == 0) ? 0 : k - 1;
    size_t kp = (k + 1 == K) ? K - 1 : k + 1;
    double denom = fr[kp].t - fr[km].t;
    double acc2 = 0.0;
    if (denom > 0.0) {
      for (int j = 0; j < g.ny; ++j) {
        double xi = g.xic(j);
        for (int i = 0; i < g.nx; ++i) {
          int idx = g.ip(i, j);
          double dt1 = (fr[kp].tp.phi1[idx] - fr[km].tp.phi1[idx]) / denom -
                       xi * m.htc[i] * tp.dyphi1[idx];
          double dt2 = (fr[kp].tp.phi2[idx] - fr[km].tp.phi2[idx]) / denom -
                       xi * m.htc[i] * tp.dyphi2[idx];
          acc2 += (cf.u1c[idx] * dt1 + cf.u2c[idx] * dt2) * m.hc[i] * dx * dxi;
        }
      }
    }
    r2[k] = acc2;

    double acc3 = 0.0, acc4 = 0.0;
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        int idx = g.ip(i, j);
        double J = m.hc[i] * dx * dxi;
        acc3 += (cf.g11[idx] * tp.dxphi1[idx] + cf.g12[idx] * tp.dyphi1[idx] +
                 cf.g21[idx] * tp.dxphi2[idx] + cf.g22[idx] * tp.dyphi2[idx]) * J;
        double u1 = cf.u1c[idx], u2 = cf.u2c[idx];
        double conv_u_phi = tp.phi1[idx] * (u1 * cf.g11[idx] + u2 * cf.g12[idx]) +
                            tp.phi2[idx] * (u1 * cf.g21[idx] + u2 * cf.g22[idx]);
        double conv_phi_u = u1 * (u1 * tp.dxphi1[idx] + u2 * tp.dyphi1[idx]) +
                            u2 * (u1 * tp.dxphi2[idx] + u2 * tp.dyphi2[idx]);
        acc4 += 0.5 * (conv_u_phi - conv_phi_u) * J;
      }
    }
    r3[k] = pp.mu * acc3;

    double acc5 = 0.0, acc6 = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      double u1b = 0.5 * (1.5 * F.fl.u1[g.iu1(i, 0)] - 0.5 * F.fl.u1[g.iu1(i, 1)] +
                          1.5 * F.fl.u1[g.iu1(i + 1, 0)] - 0.5 * F.fl.u1[g.iu1(i + 1, 1)]);
      acc5 += u1b * tp.phi1_bot[i] * dx;
      double hx = m.hxc[i], ht = m.htc[i];
      double S = std::sqrt(1.0 + hx * hx);
      double u1t = 0.5 * (1.5 * F.fl.u1[g.iu1(i, g.ny - 1)] - 0.5 * F.fl.u1[g.iu1(i, g.ny - 2)] +
                          1.5 * F.fl.u1[g.iu1(i + 1, g.ny - 1)] - 0.5 * F.fl.u1[g.iu1(i + 1, g.ny - 2)]);
      double u2t = F.fl.u2[g.iu2(i, g.ny)];
      double jump_u = (u1t + hx * (u2t - ht)) / S;
      double eta_c = scale * hx;
      double jump_phi = (tp.phi1_top[i] + hx * (tp.phi2_top[i] - eta_c)) / S;
      acc6 += jump_u * jump_phi * S * dx;
      // interface advection correction: -1/2 (u.phi)(u.n)S
      double unS = -hx * u1t + u2t;
      acc4 -= 0.5 * (u1t * tp.phi1_top[i] + u2t * tp.phi2_top[i]) * unS * dx;
    }
    r4[k] = acc4;
    r5[k] = acc5 / pp.beta_b;
    r6[k] = acc6 / pp.beta_s;

    VectorXd hxxx = d3_nodal(F.st.h, dxs);
    VectorXd vx = d1_nodal(F.st.v, dxs);
    double acc7 = 0.0;
    for (int n = 0; n <= g.ns; ++n) {
      double w = (n == 0 || n == g.ns) ? 0.5 : 1.0;
      double eta_x = scale * m.hxxs[n];
      double eta_xx = scale * hxxx[n];
      double eta_t = scale * vx[n];
      acc7 += w * (pp.alpha * m.hxxs[n] * eta_xx + pp.gamma * vx[n] * eta_x -
                   F.st.v[n] * eta_t) * dxs;
    }
    r7[k] = acc7;
  }

  auto integrate = [&](const std::vector<double>& r) {
    double acc = 0.0;
    for (size_t k = 0; k + 1 < K; ++k)
      acc += 0.5 * (r[k] + r[k + 1]) * (fr[k + 1].t - fr[k].t);
    return acc;
  };

  WeakformTerms wf;
  auto endpoint = [&](const FrameData& F) {
    double e = dot_center(g, F.m, F.cf.u1c, F.cf.u2c, F.tp.phi1, F.tp.phi2);
    for (int n = 0; n <= g.ns; ++n) {
      double w = (n == 0 || n == g.ns) ? 0.5 : 1.0;
      e += w * F.st.v[n] * F.tp.eta[n] * dxs;
    }
    return e;
  };
  wf.I1 = endpoint(fr[K - 1]) - endpoint(fr[0]);
  wf.I2 = -integrate(r2);
  wf.I3 = integrate(r3);
  wf.I4 = integrate(r4);
  wf.I5 = integrate(r5);
  wf.I6 = integrate(r6);
  wf.I7 = integrate(r7);
  wf.lhs = integrate(r_lhs);
  return wf;
}

ContradictionDiagnostic contradiction_diagnostic(const std::vector<StoredState>& states,
                                                 const SimulationConfig& cfg, double T) {
  ContradictionDiagnostic d;
  if (states.size() < 3) return d;
  if (T <= 0.0) T = states.back().t;
  for (double Tk : {0.25 * T, 0.5 * T, T}) {
    std::vector<StoredState> sub;
    for (const auto& s : states)
      if (s.t <= Tk + 1e-12) sub.push_back(s);
    if (sub.size() < 2) continue;
    WeakformTerms wf = weakform_terms(sub, cfg);
    d.horizons.push_back(sub.back().t);
    d.lhs_mag.push_back(std::abs(wf.lhs));
    d.sum_abs.push_back(wf.sum_abs());
  }
  auto fit = [&](const std::vector<double>& y) {
    // least-squares slope of log y vs log T
    size_t n = d.horizons.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < n; ++k) {
      double lx = std::log(d.horizons[k]);
      double ly = std::log(std::max(y[k], 1e-300));
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  d.exponent_lhs = fit(d.lhs_mag);
  d.exponent_sum = fit(d.sum_abs);
  return d;
}

}  // namespace slipchannel
