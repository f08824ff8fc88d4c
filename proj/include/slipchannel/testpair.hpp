#pragma once
#include "slipchannel/coupling.hpp"

namespace slipchannel {

// Coefficients of the cubic slip profile Phi(xi) = a xi^3 + b xi^2 + c xi
// with Phi(1) = 1 and Robin ends  Phi''(0) - lam_b Phi'(0) = 0,
// Phi''(1) + lam_s Phi'(1) = 0, where lam_s = h/beta_s, lam_b = h/beta_b.
struct SlipProfileCoeffs {
  double a = 0.0, b = 0.0, c = 0.0;
};

struct Lambdas {
  double lam_s = 0.0, lam_b = 0.0;
};
Lambdas lambda_coeffs(double h, const PhysicalParams& pp);

SlipProfileCoeffs cubic_coeffs(double lam_s, double lam_b);

// Phi and its xi-derivatives at one point.
struct PhiValue {
  double Phi, Phi_xi, Phi_xixi;
};
PhiValue phi_profile(const SlipProfileCoeffs& cc, double xi);

// Full pointwise evaluation of the contact pair's stream function
// psi = h(x) Phi(x, xi) and velocity phi = grad^perp psi, with all first
// derivatives, from the local interface data (h, hx, hxx, ht).
struct PhiEval {
  double psi = 0.0;
  double phi1 = 0.0, phi2 = 0.0;
  double dxphi1 = 0.0, dyphi1 = 0.0, dxphi2 = 0.0, dyphi2 = 0.0;
};
PhiEval contact_phi_at(double h, double hx, double hxx, double ht, double xi,
                       const PhysicalParams& pp);

// Regularity pair: psi = hx * P(xi), P = -2 xi^3 + 3 xi^2, eta = hxx.
PhiEval regularity_phi_at(double h, double hx, double hxx, double hxxx, double xi);

// Sampled pair on the fluid grid (cell centers + traces), scaled by `scale`
// (the contradiction argument uses scale = -1/H).
struct TestPair {
  enum Kind { kContact, kRegularity };
  Kind kind = kContact;
  double scale = 1.0;
  VectorXd eta;  // ns+1 structure nodes (scaled)
  // cell-center fields, index g.ip(i,j)
  VectorXd phi1, phi2, dxphi1, dyphi1, dxphi2, dyphi2;
  VectorXd phi1_in, phi1_out;             // ny, xi centers at x = 0, L
  VectorXd phi1_bot, phi1_top, phi2_top;  // nx, cell centers
};
TestPair contact_testpair(const StructureState& st, const PhysicalParams& pp,
                          const Grid& g, double scale = 1.0);
TestPair regularity_testpair(const StructureState& st, const PhysicalParams& pp,
                             const Grid& g, double scale = 1.0);

// Identity residuals of the analytic construction on a given interface.
struct TestPairChecks {
  double corner = 0.0;       // psi(0,H) - H
  double interface_id = 0.0; // max |psi(x,h) - (int_0^x eta + H)|
  double bottom = 0.0;       // max |psi(x,0)|
  double inflow = 0.0;       // int_0^H phi1(0,y) dy + H   (contact pair)
  double divergence = 0.0;   // max |dx phi1 + dy phi2|
  double jump_top = 0.0;     // (phi-(0,eta)).tau + dy psi * S
  double robin_bottom = 0.0; // 2b - lam_b c
  double robin_top = 0.0;    // 6a + 2b + lam_s (3a + 2b + c)
  double partition = 0.0;    // a + b + c - 1
};
TestPairChecks testpair_checks(const StructureState& st, const PhysicalParams& pp,
                               const Grid& g);

// Reduced interface energy density per node:
//   (1/h) int_0^1 |Phi_xixi|^2 dxi + alpha_s |Phi_xi(1)|^2 + alpha_b |Phi_xi(0)|^2
// with alpha_s = (1/beta_s + curvature) (1+hx^2)^{3/2}, alpha_b = 1/beta_b.
struct ReducedEnergy {
  VectorXd density;  // ns+1
  double integral = 0.0;
};
ReducedEnergy reduced_energy(const StructureState& st, const PhysicalParams& pp,
                             const Grid& g);

// Cumulative weak-form terms of the contradiction argument over a stored
// trajectory (pair scaled by -1/H).
struct WeakformTerms {
  double I1 = 0, I2 = 0, I3 = 0, I4 = 0, I5 = 0, I6 = 0, I7 = 0;
  double lhs = 0.0;      // pressure side
  double sum_abs() const {
    return std::abs(I1) + std::abs(I2) + std::abs(I3) + std::abs(I4) + std::abs(I5) +
           std::abs(I6) + std::abs(I7);
  }
  double sum() const { return I1 + I2 + I3 + I4 + I5 + I6 + I7; }
};
WeakformTerms weakform_terms(const std::vector<StoredState>& states,
                             const SimulationConfig& cfg);

struct ContradictionDiagnostic {
  std::vector<double> horizons;
  std::vector<double> lhs_mag;
  std::vector<double> sum_abs;
  double exponent_lhs = 0.0;
  double exponent_sum = 0.0;
};
// Evaluates the weak-form balance over horizons {T, T/2, T/4} (T = time of
// the last stored state unless given) and fits log-log growth exponents.
ContradictionDiagnostic contradiction_diagnostic(const std::vector<StoredState>& states,
                                                 const SimulationConfig& cfg,
                                                 double T = -1.0);

}  // namespace slipchannel
