#include "slipchannel/plate_solver.hpp"

#include <Eigen/Dense>

namespace slipchannel {

PlateOps make_plate_ops(const Grid& g) {
  PlateOps ops;
  ops.ns = g.ns;
  ops.dx = g.dxs();
  ops.H = g.H;
  int ni = g.ns - 1;  // interior nodes 1..ns-1
  double id2 = 1.0 / (ops.dx * ops.dx);
  ops.B = Eigen::MatrixXd::Zero(g.ns + 1, ni);
  ops.b0 = VectorXd::Zero(g.ns + 1);
  auto add = [&](int row, int node, double w) {
    // node in 0..ns; clamped data h(0) = h(ns) = H, reflection ghosts
    // h(-1) = h(1), h(ns+1) = h(ns-1).
    if (node == -1) node = 1;
    if (node == g.ns + 1) node = g.ns - 1;
    if (node == 0 || node == g.ns) ops.b0[row] += w * g.H;
    else ops.B(row, node - 1) += w;
  };
  for (int i = 0; i <= g.ns; ++i) {
    add(i, i - 1, id2);
    add(i, i, -2.0 * id2);
    add(i, i + 1, id2);
  }
  ops.wq = VectorXd::Ones(g.ns + 1);
  ops.wq[0] = ops.wq[g.ns] = 0.5;
  ops.Avisc = Eigen::MatrixXd::Zero(ni, ni);
  for (int i = 0; i < ni; ++i) {
    ops.Avisc(i, i) = 2.0 * id2;
    if (i > 0) ops.Avisc(i, i - 1) = -id2;
    if (i + 1 < ni) ops.Avisc(i, i + 1) = -id2;
  }
  return ops;
}

StructureState plate_step(const StructureState& st, const VectorXd& f,
                          const PhysicalParams& pp, const Grid& g, double dt) {
  PlateOps ops = make_plate_ops(g);
  int ni = g.ns - 1;
  // Trapezoid weights W at the curvature nodes: energy = a/2*dx*(Bh+b0)'W(Bh+b0),
  // so the interior force is -a*B'W(Bh+b0) (the dx cancels against the nodal
  // mass dx).  Scheme: w = v + dt*(-a*B^T(B h_mid + b0) - g*Avisc*v_mid + f),
  // h+ = h + dt*(v+w)/2, with h_mid = h + dt/4*(v+w), v_mid = (v+w)/2.
  VectorXd v = st.v.segment(1, ni);
  VectorXd h = st.h.segment(1, ni);
  VectorXd fi = f.segment(1, ni);

  Eigen::MatrixXd BtB = ops.B.transpose() * ops.wq.asDiagonal() * ops.B;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(ni, ni);
  M += (pp.alpha * dt * dt / 4.0) * BtB;
  M += (pp.gamma * dt / 2.0) * ops.Avisc;
  VectorXd rhs = v;
  rhs += dt * (-pp.alpha * (ops.B.transpose() * (ops.wq.asDiagonal() *
                                        (ops.B * (h + 0.25 * dt * v) + ops.b0)))
               - 0.5 * pp.gamma * (ops.Avisc * v) + fi);
  VectorXd w = M.partialPivLu().solve(rhs);

  StructureState out;
  out.h = st.h;
  out.v = st.v;
  out.v.segment(1, ni) = w;
  out.h.segment(1, ni) = h + 0.5 * dt * (v + w);
  out.h[0] = out.h[g.ns] = g.H;
  out.v[0] = out.v[g.ns] = 0.0;
  return out;
}

void apply_clamped_bc(StructureState& st, double H) {
  int ns = static_cast<int>(st.h.size()) - 1;
  st.h[0] = st.h[ns] = H;
  st.v[0] = st.v[ns] = 0.0;
}

double plate_kinetic_energy(const StructureState& st, const Grid& g) {
  int ni = g.ns - 1;
  return 0.5 * g.dxs() * st.v.segment(1, ni).squaredNorm();
}

double plate_bending_energy(const StructureState& st, const PhysicalParams& pp, const Grid& g) {
  PlateOps ops = make_plate_ops(g);
  VectorXd kappa = ops.B * st.h.segment(1, g.ns - 1) + ops.b0;
  return 0.5 * pp.alpha * g.dxs() * kappa.dot(ops.wq.asDiagonal() * kappa);
}

double plate_gradient_dissipation_rate(const VectorXd& v, const PhysicalParams& pp, const Grid& g) {
  // gamma * dx * |G v|^2 with forward differences and v(0)=v(L)=0; this is
  // exactly v^T Avisc v * dx for interior v, the quadratic form the scheme
  // dissipates.
  double acc = 0.0;
  double dx = g.dxs();
  for (int i = 0; i < g.ns; ++i) {
    double d = (v[i + 1] - v[i]) / dx;
    acc += d * d;
  }
  return pp.gamma * dx * acc;
}

}  // namespace slipchannel
