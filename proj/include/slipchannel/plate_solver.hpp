#pragma once
#include "slipchannel/ale_geometry.hpp"

namespace slipchannel {

// Clamped viscoelastic plate  dtt h + alpha dxxxx h - gamma dxxt h = f  on
// (0,L), h = H and dx h = 0 at both ends.  Discretization is variational:
// the bending operator is B^T B where B is the 3-point second difference at
// every node (reflection ghosts encode the clamped slope, fixed end values
// encode h = H), so the discrete energy balance is exact.  Time stepping is
// trapezoidal in both stiffness and damping (unconditionally stable), with
// h advanced by the velocity average.
struct PlateOps {
  int ns;
  double dx, H;
  // curvature at nodes 0..ns as an affine map of the interior heights
  // kappa = B h_int + b0  (h_int = nodes 1..ns-1)
  Eigen::MatrixXd B;
  VectorXd b0;
  VectorXd wq;  // trapezoid quadrature weights at the curvature nodes
  Eigen::MatrixXd Avisc;  // interior [-1,2,-1]/dx^2 (v = 0 at the ends)
};

PlateOps make_plate_ops(const Grid& g);

// One step; f holds nodal traction samples (ns+1).  Interior forces use
// f[1..ns-1].
StructureState plate_step(const StructureState& st, const VectorXd& f,
                          const PhysicalParams& pp, const Grid& g, double dt);

// Enforce the clamped end values exactly (guards against drift when states
// are assembled from external data).
void apply_clamped_bc(StructureState& st, double H);

// Energies/dissipation consistent with the scheme above.
double plate_kinetic_energy(const StructureState& st, const Grid& g);
double plate_bending_energy(const StructureState& st, const PhysicalParams& pp, const Grid& g);
// gamma * int |dx v|^2 dx for a nodal velocity profile
double plate_gradient_dissipation_rate(const VectorXd& v, const PhysicalParams& pp, const Grid& g);

}  // namespace slipchannel
