#pragma once
#include "slipchannel/ale_geometry.hpp"

namespace slipchannel {

// Velocity/pressure on the staggered reference grid.  u2 carries its known
// boundary rows (j = 0 bottom, j = ny kinematic top) so stencil evaluation
// and post-processing can read them directly; only the interior rows are
// unknowns of the step.  s is the penalty multiplier (1/eps)(q_out - 1).
struct FluidState {
  VectorXd u1;  // (nx+1) * ny
  VectorXd u2;  // nx * (ny+1), boundary rows filled
  VectorXd p;   // nx * ny
  double s = 0.0;
};

FluidState rest_fluid(const Grid& g);

struct FluidStepOpts {
  double dt = 1e-3;
  double P_in = 0.0;   // boundary data at the new time level
  double P_out = 0.0;
  double eps = 1e-4;    // <= 0 or inf: penalty disabled
  double flux_target = 1.0;
  bool advection = true;
  bool bernoulli = true;  // lagged 1/2|u1|^2 in the in/out condition
  bool viscous = true;    // disabled only by the initial projection
};

// One semi-implicit step on the (already advanced) geometry.  Viscous,
// pressure, penalty and Oseen advection are implicit; metric cross terms in
// the interface Robin condition and the kinematic top value use the lagged
// velocity.  Throws std::runtime_error if the linear solve fails the
// 1e-10 relative residual check.
void fluid_step(FluidState& fs, const AleMap& map, const PhysicalParams& pp,
                const Grid& g, const FluidStepOpts& opts);

// L2 projection of a constant field onto the discretely divergence-free
// space compatible with the map's kinematic boundary values.
FluidState initial_projection(const AleMap& map, const Grid& g, double u10, double u20);

// f = -S_h sigma(u,p) n . e2 sampled at cell centers and interpolated to the
// ns+1 structure nodes.  For a rest state with p = c this is +c (pressure
// inflates the channel).
VectorXd interface_traction(const FluidState& fs, const AleMap& map,
                            const PhysicalParams& pp, const Grid& g);

struct Fluxes {
  double q_in = 0.0;        // int_{x=0} u1 dy
  double q_out = 0.0;       // int_{x=L} u1 dy
  double q_interface = 0.0; // int_0^L dt h dx
};
Fluxes boundary_fluxes(const FluidState& fs, const AleMap& map, const Grid& g);

// Cell-center velocities and physical velocity gradients (g11 = dx u1,
// g12 = dy u1, g21 = dx u2, g22 = dy u2), used by the ledger quadratures and
// the weak-form diagnostics.
struct CenterFields {
  VectorXd u1c, u2c, g11, g12, g21, g22;
};
CenterFields center_fields(const FluidState& fs, const AleMap& m, const Grid& g);

// Tangential slip residuals of a solved state, for convergence diagnostics:
// max over columns of |u.tau + beta*mu*(grad u n).tau - data| at each wall.
struct SlipResiduals {
  double bottom = 0.0;
  double interface = 0.0;
};
SlipResiduals slip_residuals(const FluidState& fs, const AleMap& map,
                             const PhysicalParams& pp, const Grid& g);

}  // namespace slipchannel
