#include "slipchannel/fluid_solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace slipchannel {

namespace {

// value at an extended staggered index as (unknown, coefficient) + constant
struct Lin {
  int idx = -1;
  double c = 0.0;
  double cst = 0.0;
};

struct Assembler {
  std::vector<Eigen::Triplet<double>> trip;
  VectorXd rhs;
  explicit Assembler(int n) : rhs(VectorXd::Zero(n)) {}
  void coef(int r, int c, double w) {
    if (w != 0.0) trip.emplace_back(r, c, w);
  }
  void lin(int r, const Lin& l, double w) {
    if (l.idx >= 0) coef(r, l.idx, w * l.c);
    rhs[r] -= w * l.cst;
  }
  void add_rhs(int r, double v) { rhs[r] += v; }
};

// Everything the assembly needs about one step.
struct StepCtx {
  const Grid& g;
  const AleMap& m;
  const PhysicalParams& pp;
  const FluidStepOpts& o;
  const FluidState& old_;  // lagged fields (boundary rows filled)
  int base_u2, base_p, idx_s, N;
  bool penalty;
  // Robin ghost data per u1 column
  VectorXd gb_coef;           // bottom: ghost = gb_coef * u1(i,0)
  VectorXd gt_coef, gt_cst;   // top: ghost = gt_coef * u1(i,ny-1) + gt_cst

  int ju1(int i, int j) const { return g.iu1(i, j); }
  int ju2(int i, int j) const { return base_u2 + (j - 1) * g.nx + i; }
  int jp(int i, int j) const { return base_p + g.ip(i, j); }
};

double dx_centered(const VectorXd& f, int i, double dx) {
  int n = static_cast<int>(f.size());
  if (i == 0) return (f[1] - f[0]) / dx;
  if (i == n - 1) return (f[n - 1] - f[n - 2]) / dx;
  return (f[i + 1] - f[i - 1]) / (2.0 * dx);
}

// Lagged top values of u2 at cell centers (the kinematic Dirichlet value).
VectorXd kinematic_top_u2(const FluidState& fs, const AleMap& m, const Grid& g) {
  VectorXd out(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    double u1t = 0.5 * (fs.u1[g.iu1(i, g.ny - 1)] + fs.u1[g.iu1(i + 1, g.ny - 1)]);
    out[i] = m.htc[i] + m.hxc[i] * u1t;
  }
  return out;
}

// Build the Robin ghost relations for u1.  Bottom:  u1 = beta_b*mu*dy u1.
// Interface: ((0,dt h)-u).tau = beta_s*mu*(grad u n).tau, with the metric
// cross terms evaluated from the lagged velocity.
void build_u1_ghosts(StepCtx& c) {
  const Grid& g = c.g;
  double dxi = g.dxi();
  c.gb_coef.resize(g.nx + 1);
  c.gt_coef.resize(g.nx + 1);
  c.gt_cst.resize(g.nx + 1);

  // lagged surface quantities at u1 faces
  VectorXd u1top(g.nx + 1), du1dxi(g.nx + 1);
  for (int i = 0; i <= g.nx; ++i) {
    double a = c.old_.u1[g.iu1(i, g.ny - 1)];
    double b = c.old_.u1[g.iu1(i, g.ny - 2)];
    du1dxi[i] = (a - b) / dxi;
    u1top[i] = a + 0.5 * dxi * du1dxi[i];
  }
  // lagged u2 top data at centers -> faces
  VectorXd u2top_c(g.nx), dyu2_c(g.nx), dxu2_c(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    double t0 = c.old_.u2[g.iu2(i, g.ny)];
    double t1 = c.old_.u2[g.iu2(i, g.ny - 1)];
    double t2 = c.old_.u2[g.iu2(i, g.ny - 2)];
    u2top_c[i] = t0;
    dyu2_c[i] = (3.0 * t0 - 4.0 * t1 + t2) / (2.0 * dxi) / c.m.hc[i];
  }
  for (int i = 0; i < g.nx; ++i) {
    dxu2_c[i] = dx_centered(u2top_c, i, g.dx()) - c.m.hxc[i] * dyu2_c[i];
  }
  auto face_of = [&](const VectorXd& cen, int i) {
    if (i == 0) return cen[0];
    if (i == g.nx) return cen[g.nx - 1];
    return 0.5 * (cen[i - 1] + cen[i]);
  };

  for (int i = 0; i <= g.nx; ++i) {
    double h = c.m.hf[i];
    // bottom
    double kb = c.pp.beta_b * c.pp.mu / (h * dxi);
    c.gb_coef[i] = (kb - 0.5) / (kb + 0.5);
    // top
    double hx = c.m.hxf[i], ht = c.m.htf[i];
    double S = std::sqrt(1.0 + hx * hx);
    double ks = c.pp.beta_s * c.pp.mu / (S * h * dxi);
    double dyu1 = du1dxi[i] / h;
    double dxu1 = dx_centered(u1top, i, g.dx()) - (hx / h) * du1dxi[i];
    double u2f = face_of(u2top_c, i);
    double dyu2 = face_of(dyu2_c, i);
    double dxu2 = face_of(dxu2_c, i);
    (void)dyu1;
    double R = -hx * ht + hx * u2f +
               (c.pp.beta_s * c.pp.mu / S) * (-hx * dxu1 - hx * hx * dxu2 + hx * dyu2);
    c.gt_coef[i] = (ks - 0.5) / (ks + 0.5);
    c.gt_cst[i] = -R / (0.5 + ks);
  }
}

Lin val_u1(const StepCtx& c, int i, int j) {
  if (j == -1) return Lin{c.ju1(i, 0), c.gb_coef[i], 0.0};
  if (j == c.g.ny) return Lin{c.ju1(i, c.g.ny - 1), c.gt_coef[i], c.gt_cst[i]};
  return Lin{c.ju1(i, j), 1.0, 0.0};
}

Lin val_u2(const StepCtx& c, const VectorXd& u2top, int i, int j) {
  double sign = 1.0;
  if (i == -1) { i = 0; sign = -1.0; }        // u2 = 0 on the inlet
  if (i == c.g.nx) { i = c.g.nx - 1; sign = -1.0; }  // and outlet
  if (j == 0) return Lin{-1, 0.0, 0.0};
  if (j == c.g.ny) return Lin{-1, 0.0, sign * u2top[i]};
  return Lin{c.ju2(i, j), sign, 0.0};
}

}  // namespace

FluidState rest_fluid(const Grid& g) {
  FluidState fs;
  fs.u1 = VectorXd::Zero(g.n_u1());
  fs.u2 = VectorXd::Zero(g.n_u2_all());
  fs.p = VectorXd::Zero(g.n_p());
  return fs;
}

void fluid_step(FluidState& fs, const AleMap& m, const PhysicalParams& pp,
                const Grid& g, const FluidStepOpts& o) {
  const int nx = g.nx, ny = g.ny;
  const double dx = g.dx(), dxi = g.dxi(), dt = o.dt;
  const double mu = o.viscous ? pp.mu : 0.0;
  bool penalty = o.eps > 0.0 && std::isfinite(o.eps);

  StepCtx c{g, m, pp, o, fs, 0, 0, 0, 0, penalty, {}, {}, {}};
  c.base_u2 = g.n_u1();
  c.base_p = c.base_u2 + g.n_u2_int();
  c.idx_s = c.base_p + g.n_p();
  c.N = c.idx_s + (penalty ? 1 : 0);
  if (o.viscous) build_u1_ghosts(c);
  else {
    c.gb_coef = VectorXd::Ones(nx + 1);   // unused ghosts: symmetric extension
    c.gt_coef = VectorXd::Ones(nx + 1);
    c.gt_cst = VectorXd::Zero(nx + 1);
  }
  VectorXd u2top = kinematic_top_u2(fs, m, g);

  Assembler A(c.N);

  // --- u1 momentum ----------------------------------------------------------
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      int r = c.ju1(i, j);
      bool bnd = (i == 0 || i == nx);
      double h = m.hf[i], hx = m.hxf[i], hxx = m.hxxf[i], ht = m.htf[i];
      double xi = g.xic(j);
      double gg = xi * hx / h;
      double G1 = xi * (2.0 * hx * hx - hxx * h) / (h * h);
      double V = h * dx * dxi * (bnd ? 0.5 : 1.0);

      // time derivative
      A.coef(r, c.ju1(i, j), V / dt);
      A.add_rhs(r, V / dt * fs.u1[r]);

      // Oseen advection, ALE-corrected
      if (o.advection) {
        double a1 = fs.u1[r];
        double a2;
        {
          int il = std::max(i - 1, 0), ir = std::min(i, nx - 1);
          a2 = 0.25 * (fs.u2[g.iu2(il, j)] + fs.u2[g.iu2(il, j + 1)] +
                       fs.u2[g.iu2(ir, j)] + fs.u2[g.iu2(ir, j + 1)]);
        }
        double ceff = (a2 - xi * ht) / h - a1 * gg;
        if (!bnd) {
          A.lin(r, val_u1(c, i + 1, j), V * a1 / (2.0 * dx));
          A.lin(r, val_u1(c, i - 1, j), -V * a1 / (2.0 * dx));
        } else if (i == 0) {
          A.lin(r, val_u1(c, 1, j), V * a1 / dx);
          A.lin(r, val_u1(c, 0, j), -V * a1 / dx);
        } else {
          A.lin(r, val_u1(c, nx, j), V * a1 / dx);
          A.lin(r, val_u1(c, nx - 1, j), -V * a1 / dx);
        }
        A.lin(r, val_u1(c, i, j + 1), V * ceff / (2.0 * dxi));
        A.lin(r, val_u1(c, i, j - 1), -V * ceff / (2.0 * dxi));
      }

      // viscous: -mu*V*(Dxx + (g^2+1/h^2)Dxixi - 2g Dxxi + G1 Dxi)
      if (o.viscous) {
        double Cxx = mu * V / (dx * dx);
        double Cii = mu * V * (gg * gg + 1.0 / (h * h)) / (dxi * dxi);
        if (!bnd) {
          A.lin(r, val_u1(c, i + 1, j), -Cxx);
          A.lin(r, val_u1(c, i - 1, j), -Cxx);
          A.lin(r, val_u1(c, i, j), 2.0 * Cxx);
        }
        A.lin(r, val_u1(c, i, j + 1), -Cii);
        A.lin(r, val_u1(c, i, j - 1), -Cii);
        A.lin(r, val_u1(c, i, j), 2.0 * Cii);
        if (!bnd && gg != 0.0) {
          double Cxi = 2.0 * mu * V * gg / (4.0 * dx * dxi);
          A.lin(r, val_u1(c, i + 1, j + 1), Cxi);
          A.lin(r, val_u1(c, i + 1, j - 1), -Cxi);
          A.lin(r, val_u1(c, i - 1, j + 1), -Cxi);
          A.lin(r, val_u1(c, i - 1, j - 1), Cxi);
        }
        if (G1 != 0.0) {
          double Cg = mu * V * G1 / (2.0 * dxi);
          A.lin(r, val_u1(c, i, j + 1), -Cg);
          A.lin(r, val_u1(c, i, j - 1), Cg);
        }
      }

      // pressure gradient and in/out natural condition
      if (!bnd) {
        A.coef(r, c.jp(i, j), V / dx);
        A.coef(r, c.jp(i - 1, j), -V / dx);
        if (gg != 0.0) {
          // -V*g * (d/dxi p) at the face, one-sided at the xi edges
          double w = -V * gg;
          auto pavg = [&](int jj, double wt) {
            A.coef(r, c.jp(i - 1, jj), wt * 0.5);
            A.coef(r, c.jp(i, jj), wt * 0.5);
          };
          if (j > 0 && j < ny - 1) {
            pavg(j + 1, w / (2.0 * dxi));
            pavg(j - 1, -w / (2.0 * dxi));
          } else if (j == 0) {
            pavg(1, w / dxi);
            pavg(0, -w / dxi);
          } else {
            pavg(ny - 1, w / dxi);
            pavg(ny - 2, -w / dxi);
          }
        }
      } else {
        double hDxi = h * dxi;
        double bern = o.bernoulli ? 0.5 * fs.u1[r] * fs.u1[r] : 0.0;
        if (i == 0) {
          // -(h dxi)[ (mu dx u1 - p)|_{dx/2} - (-P_in + bern) ]
          A.coef(r, c.ju1(1, j), -hDxi * mu / dx);
          A.coef(r, c.ju1(0, j), hDxi * mu / dx);
          A.coef(r, c.jp(0, j), hDxi);
          A.add_rhs(r, hDxi * (o.P_in - bern));
        } else {
          // -(h dxi)[ (-P_out + bern - s) - (mu dx u1 - p)|_{L-dx/2} ]
          A.coef(r, c.ju1(nx, j), hDxi * mu / dx);
          A.coef(r, c.ju1(nx - 1, j), -hDxi * mu / dx);
          A.coef(r, c.jp(nx - 1, j), -hDxi);
          if (penalty) A.coef(r, c.idx_s, hDxi);
          A.add_rhs(r, hDxi * (-o.P_out + bern));
        }
      }
    }
  }

  // --- u2 momentum ----------------------------------------------------------
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int r = c.ju2(i, j);
      double h = m.hc[i], hx = m.hxc[i], hxx = m.hxxc[i], ht = m.htc[i];
      double xi = g.xif(j);
      double gg = xi * hx / h;
      double G1 = xi * (2.0 * hx * hx - hxx * h) / (h * h);
      double V = h * dx * dxi;
      auto U2 = [&](int ii, int jj) { return val_u2(c, u2top, ii, jj); };

      A.coef(r, c.ju2(i, j), V / dt);
      A.add_rhs(r, V / dt * fs.u2[g.iu2(i, j)]);

      if (o.advection) {
        double a1 = 0.25 * (fs.u1[g.iu1(i, j - 1)] + fs.u1[g.iu1(i + 1, j - 1)] +
                            fs.u1[g.iu1(i, j)] + fs.u1[g.iu1(i + 1, j)]);
        double a2 = fs.u2[g.iu2(i, j)];
        double ceff = (a2 - xi * ht) / h - a1 * gg;
        A.lin(r, U2(i + 1, j), V * a1 / (2.0 * dx));
        A.lin(r, U2(i - 1, j), -V * a1 / (2.0 * dx));
        A.lin(r, U2(i, j + 1), V * ceff / (2.0 * dxi));
        A.lin(r, U2(i, j - 1), -V * ceff / (2.0 * dxi));
      }

      if (o.viscous) {
        double Cxx = mu * V / (dx * dx);
        double Cii = mu * V * (gg * gg + 1.0 / (h * h)) / (dxi * dxi);
        A.lin(r, U2(i + 1, j), -Cxx);
        A.lin(r, U2(i - 1, j), -Cxx);
        A.lin(r, U2(i, j), 2.0 * Cxx);
        A.lin(r, U2(i, j + 1), -Cii);
        A.lin(r, U2(i, j - 1), -Cii);
        A.lin(r, U2(i, j), 2.0 * Cii);
        if (gg != 0.0) {
          double Cxi = 2.0 * mu * V * gg / (4.0 * dx * dxi);
          A.lin(r, U2(i + 1, j + 1), Cxi);
          A.lin(r, U2(i + 1, j - 1), -Cxi);
          A.lin(r, U2(i - 1, j + 1), -Cxi);
          A.lin(r, U2(i - 1, j - 1), Cxi);
        }
        if (G1 != 0.0) {
          double Cg = mu * V * G1 / (2.0 * dxi);
          A.lin(r, U2(i, j + 1), -Cg);
          A.lin(r, U2(i, j - 1), Cg);
        }
      }

      A.coef(r, c.jp(i, j), V / (h * dxi));
      A.coef(r, c.jp(i, j - 1), -V / (h * dxi));
    }
  }

  // --- incompressibility (contravariant flux form; telescopes exactly) ------
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int r = c.jp(i, j);
      A.coef(r, c.ju1(i + 1, j), dxi * m.hf[i + 1]);
      A.coef(r, c.ju1(i, j), -dxi * m.hf[i]);
      // V at xi-faces: u2 - xi*hx*u1bar ; top face is the kinematic datum
      auto vflux = [&](int jf, double w) {
        if (jf == 0) return;
        if (jf == ny) {
          A.add_rhs(r, -w * m.htc[i]);
          return;
        }
        A.coef(r, c.ju2(i, jf), w);
        double xw = -g.xif(jf) * m.hxc[i] * 0.25 * w;
        if (xw != 0.0) {
          A.coef(r, c.ju1(i, jf - 1), xw);
          A.coef(r, c.ju1(i + 1, jf - 1), xw);
          A.coef(r, c.ju1(i, jf), xw);
          A.coef(r, c.ju1(i + 1, jf), xw);
        }
      };
      vflux(j + 1, dx);
      vflux(j, -dx);
    }
  }

  // --- penalty border -------------------------------------------------------
  if (penalty) {
    int r = c.idx_s;
    A.coef(r, c.idx_s, o.eps);
    for (int j = 0; j < ny; ++j) A.coef(r, c.ju1(nx, j), -m.hf[nx] * dxi);
    A.add_rhs(r, -o.flux_target);
  }

  // --- solve ----------------------------------------------------------------
  Eigen::SparseMatrix<double> M(c.N, c.N);
  M.setFromTriplets(A.trip.begin(), A.trip.end());
  M.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw std::runtime_error("fluid solve: factorization failed");
  VectorXd x = lu.solve(A.rhs);
  double resid = (M * x - A.rhs).norm();
  double scale = std::max(1.0, A.rhs.norm());
  if (!(resid <= 1e-10 * scale))
    throw std::runtime_error("fluid solve: residual " + std::to_string(resid / scale) +
                             " exceeds 1e-10");

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) fs.u1[g.iu1(i, j)] = x[c.ju1(i, j)];
  for (int i = 0; i < nx; ++i) {
    fs.u2[g.iu2(i, 0)] = 0.0;
    for (int j = 1; j < ny; ++j) fs.u2[g.iu2(i, j)] = x[c.ju2(i, j)];
    double u1t = 0.5 * (fs.u1[g.iu1(i, g.ny - 1)] + fs.u1[g.iu1(i + 1, g.ny - 1)]);
    fs.u2[g.iu2(i, ny)] = m.htc[i] + m.hxc[i] * u1t;
  }
  for (int k = 0; k < g.n_p(); ++k) fs.p[k] = x[c.base_p + k];
  fs.s = penalty ? x[c.idx_s] : 0.0;
}

FluidState initial_projection(const AleMap& m, const Grid& g, double u10, double u20) {
  FluidState fs = rest_fluid(g);
  for (int i = 0; i < g.nx; ++i) fs.u2[g.iu2(i, g.ny)] = m.htc[i];
  if (u10 == 0.0 && u20 == 0.0 && m.hts.lpNorm<Eigen::Infinity>() == 0.0) return fs;
  fs.u1.setConstant(u10);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 1; j < g.ny; ++j) fs.u2[g.iu2(i, j)] = u20;
  FluidStepOpts o;
  o.dt = 1.0;
  o.eps = -1.0;
  o.advection = false;
  o.bernoulli = false;
  o.viscous = false;
  PhysicalParams pp;  // mu unused with viscous off
  fluid_step(fs, m, pp, g, o);
  return fs;
}

VectorXd interface_traction(const FluidState& fs, const AleMap& m,
                            const PhysicalParams& pp, const Grid& g) {
  const int nx = g.nx, ny = g.ny;
  double dxi = g.dxi();
  VectorXd fc(nx);
  VectorXd u2top(nx);
  for (int i = 0; i < nx; ++i) u2top[i] = fs.u2[g.iu2(i, ny)];
  for (int i = 0; i < nx; ++i) {
    double ptop = 1.5 * fs.p[g.ip(i, ny - 1)] - 0.5 * fs.p[g.ip(i, ny - 2)];
    double dyu2 = (3.0 * fs.u2[g.iu2(i, ny)] - 4.0 * fs.u2[g.iu2(i, ny - 1)] +
                   fs.u2[g.iu2(i, ny - 2)]) /
                  (2.0 * dxi) / m.hc[i];
    double dxu2 = dx_centered(u2top, i, g.dx()) - m.hxc[i] * dyu2;
    fc[i] = ptop - pp.mu * (-m.hxc[i] * dxu2 + dyu2);
  }
  // centers -> structure nodes (piecewise linear, constant beyond end centers)
  VectorXd f(g.ns + 1);
  for (int k = 0; k <= g.ns; ++k) {
    double x = k * g.dxs();
    double s = x / g.dx() - 0.5;
    int i = static_cast<int>(std::floor(s));
    if (i < 0) { f[k] = fc[0]; continue; }
    if (i >= nx - 1) { f[k] = fc[nx - 1]; continue; }
    double w = s - i;
    f[k] = (1.0 - w) * fc[i] + w * fc[i + 1];
  }
  return f;
}

Fluxes boundary_fluxes(const FluidState& fs, const AleMap& m, const Grid& g) {
  Fluxes q;
  double dxi = g.dxi();
  for (int j = 0; j < g.ny; ++j) {
    q.q_in += fs.u1[g.iu1(0, j)] * m.hf[0] * dxi;
    q.q_out += fs.u1[g.iu1(g.nx, j)] * m.hf[g.nx] * dxi;
  }
  for (int i = 0; i < g.nx; ++i) q.q_interface += m.htc[i] * g.dx();
  return q;
}

CenterFields center_fields(const FluidState& fs, const AleMap& m, const Grid& g) {
  const int nx = g.nx, ny = g.ny;
  double dx = g.dx(), dxi = g.dxi();
  CenterFields cf;
  int nc = g.n_p();
  cf.u1c.resize(nc); cf.u2c.resize(nc);
  cf.g11.resize(nc); cf.g12.resize(nc); cf.g21.resize(nc); cf.g22.resize(nc);
  auto u1c = [&](int i, int j) { return 0.5 * (fs.u1[g.iu1(i, j)] + fs.u1[g.iu1(i + 1, j)]); };
  auto u2c = [&](int i, int j) { return 0.5 * (fs.u2[g.iu2(i, j)] + fs.u2[g.iu2(i, j + 1)]); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int k = g.ip(i, j);
      double h = m.hc[i], hx = m.hxc[i];
      double gg = g.xic(j) * hx / h;
      cf.u1c[k] = u1c(i, j);
      cf.u2c[k] = u2c(i, j);
      double du1_dx = (fs.u1[g.iu1(i + 1, j)] - fs.u1[g.iu1(i, j)]) / dx;
      double du2_dxi = (fs.u2[g.iu2(i, j + 1)] - fs.u2[g.iu2(i, j)]) / dxi;
      double du1_dxi, du2_dx;
      if (j == 0) du1_dxi = (u1c(i, 1) - u1c(i, 0)) / dxi;
      else if (j == ny - 1) du1_dxi = (u1c(i, ny - 1) - u1c(i, ny - 2)) / dxi;
      else du1_dxi = (u1c(i, j + 1) - u1c(i, j - 1)) / (2.0 * dxi);
      if (i == 0) du2_dx = (u2c(1, j) - u2c(0, j)) / dx;
      else if (i == nx - 1) du2_dx = (u2c(nx - 1, j) - u2c(nx - 2, j)) / dx;
      else du2_dx = (u2c(i + 1, j) - u2c(i - 1, j)) / (2.0 * dx);
      cf.g11[k] = du1_dx - gg * du1_dxi;
      cf.g12[k] = du1_dxi / h;
      cf.g21[k] = du2_dx - gg * du2_dxi;
      cf.g22[k] = du2_dxi / h;
    }
  }
  return cf;
}

SlipResiduals slip_residuals(const FluidState& fs, const AleMap& m,
                             const PhysicalParams& pp, const Grid& g) {
  SlipResiduals r;
  double dxi = g.dxi();
  VectorXd u1top(g.nx + 1), u2topf(g.nx + 1);
  for (int i = 0; i <= g.nx; ++i) {
    double a = fs.u1[g.iu1(i, g.ny - 1)], b = fs.u1[g.iu1(i, g.ny - 2)];
    u1top[i] = 1.5 * a - 0.5 * b;
    int il = std::max(i - 1, 0), ir = std::min(i, g.nx - 1);
    u2topf[i] = 0.5 * (fs.u2[g.iu2(il, g.ny)] + fs.u2[g.iu2(ir, g.ny)]);
  }
  for (int i = 0; i <= g.nx; ++i) {
    double h = m.hf[i];
    // bottom: u1 - beta_b*mu*dy u1 = 0
    double u1b = 1.5 * fs.u1[g.iu1(i, 0)] - 0.5 * fs.u1[g.iu1(i, 1)];
    double dyu1b = (fs.u1[g.iu1(i, 1)] - fs.u1[g.iu1(i, 0)]) / (h * dxi);
    r.bottom = std::max(r.bottom, std::abs(u1b - pp.beta_b * pp.mu * dyu1b));
    // interface: S*((0,ht)-u).tau - beta_s*mu*S*(grad u n).tau = 0
    double hx = m.hxf[i], ht = m.htf[i];
    double S = std::sqrt(1.0 + hx * hx);
    double du1dxi = (fs.u1[g.iu1(i, g.ny - 1)] - fs.u1[g.iu1(i, g.ny - 2)]) / dxi;
    double dyu1 = du1dxi / h;
    double dxu1 = dx_centered(u1top, i, g.dx()) - (hx / h) * du1dxi;
    int il = std::max(i - 1, 0), ir = std::min(i, g.nx - 1);
    auto dy2 = [&](int ic) {
      return (3.0 * fs.u2[g.iu2(ic, g.ny)] - 4.0 * fs.u2[g.iu2(ic, g.ny - 1)] +
              fs.u2[g.iu2(ic, g.ny - 2)]) /
             (2.0 * dxi) / m.hc[ic];
    };
    double dyu2 = 0.5 * (dy2(il) + dy2(ir));
    VectorXd u2c(g.nx);
    for (int k = 0; k < g.nx; ++k) u2c[k] = fs.u2[g.iu2(k, g.ny)];
    double dxu2 = dx_centered(u2c, std::min(std::max(i - (i == g.nx ? 1 : 0), 0), g.nx - 1), g.dx()) -
                  hx * dyu2;
    double lhs = hx * ht - u1top[i] - hx * u2topf[i];
    double rhs = (pp.beta_s * pp.mu / S) * (-hx * dxu1 + dyu1 - hx * hx * dxu2 + hx * dyu2);
    r.interface = std::max(r.interface, std::abs(lhs - rhs));
  }
  return r;
}

}  // namespace slipchannel
