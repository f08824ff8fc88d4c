#pragma once
#include "slipchannel/grid.hpp"
#include "slipchannel/model_core.hpp"

namespace slipchannel {

struct StructureState {
  VectorXd h;  // ns+1 nodal heights
  VectorXd v;  // ns+1 nodal velocities (dh/dt)
};

StructureState flat_structure(const Grid& g, const InitialSpec& init);

// Unit normal/tangent of the graph y = h(x) and the surface measure
// S = sqrt(1 + hx^2); n = (-hx, 1)/S points out of the fluid.
struct InterfaceFrame {
  double nx, ny, tx, ty, S;
};
InterfaceFrame interface_frame(double hx);

double curvature(double hx, double hxx);

// Vertical-stretch map (x, xi) -> (x, xi*h(x)) with nodal metric data
// sampled on the structure grid and interpolated to the fluid grid.
struct AleMap {
  Grid grid;
  // structure-grid data, ns+1 nodes
  VectorXd hs, hxs, hxxs, hts;
  // fluid-grid samples at u1-face x (nx+1) and cell-center x (nx)
  VectorXd hf, hxf, hxxf, htf;
  VectorXd hc, hxc, hxxc, htc;

  double jacobian_f(int i) const { return hf[i]; }
  double jacobian_c(int i) const { return hc[i]; }
  double to_physical_y(double x, double xi) const { return xi * eval_h(x); }
  double to_reference_xi(double x, double y) const { return y / eval_h(x); }
  double eval_h(double x) const;
  double eval_hx(double x) const;
  double eval_ht(double x) const;
};

AleMap build_map(const StructureState& st, const Grid& g);

// Nodal derivative helpers on the structure grid (second-order stencils,
// one-sided at the ends).
VectorXd d1_nodal(const VectorXd& f, double dx);
VectorXd d2_nodal(const VectorXd& f, double dx);
VectorXd d3_nodal(const VectorXd& f, double dx);

// sqrt( int_0^L |dxxx h|^2 dx ), trapezoid over nodal third derivatives.
double h3_seminorm(const VectorXd& h, double dx);

// Piecewise-linear sampling of nodal data (nodes at k*dx, k = 0..n).
double sample_linear(const VectorXd& nodal, double dx, double x);

}  // namespace slipchannel
